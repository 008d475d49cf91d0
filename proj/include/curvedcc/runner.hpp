#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvedcc/config_io.hpp"

namespace curvedcc {

inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr int kEnvelopeSchemaVersion = 1;

enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitConfig = 2, kExitNumerical = 3 };

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string csv() const;
};

struct RunResult {
  int exit_code = kExitPass;
  nlohmann::ordered_json envelope;
  std::vector<Assertion> assertions;
  std::vector<Table> tables;
};

// Dispatches on cfg.command and assembles the envelope. Module errors become
// exit code 3 with the message in the envelope; nothing is written here.
RunResult run(const ExperimentConfig& cfg);

// Writes envelope.json and one CSV per table into dir (created if needed).
void write_outputs(const RunResult& r, const std::filesystem::path& dir);

// Envelope without the fields that depend on the clock.
nlohmann::ordered_json strip_timestamps(nlohmann::ordered_json envelope);

}  // namespace curvedcc
