#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "heislab/config.hpp"

namespace heislab {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInvalid = 2,
  kExitNumerical = 3,
  kExitUnderResolved = 4,
  kExitBattery = 5,
};

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> outputs;  // data files, manifest last
  std::string summary;                         // one human-readable line
};

/// Runs one experiment and writes its outputs plus a manifest. Library
/// errors propagate; map them with exit_code_for.
CommandResult run_command(const ExperimentConfig& cfg);

CommandResult cmd_analyze(const ExperimentConfig& cfg);
CommandResult cmd_blowup(const ExperimentConfig& cfg);
CommandResult cmd_measure(const ExperimentConfig& cfg);
CommandResult cmd_certify(const ExperimentConfig& cfg);

int exit_code_for(const std::exception& e);

}  // namespace heislab
