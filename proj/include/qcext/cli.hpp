#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qcext::cli {

enum ExitCode : int { kOk = 0, kAssertion = 1, kSchema = 2, kBudget = 3 };

const std::vector<std::string>& subcommands();

// The configuration used when no --config file is given.
nlohmann::json default_config(const std::string& subcommand);

struct Outcome {
  int exit_code = kOk;
  // {"subcommand", "inputs", "results", "conditional", "timings"}; null on schema errors.
  nlohmann::json report;
  std::string message;
};

// Never throws for user errors: schema problems map to kSchema, budget exhaustion to kBudget
// with a partial report, failed checks to kAssertion.
Outcome run(const std::string& subcommand, const nlohmann::json& config, std::optional<std::uint64_t> seed = {});

// Serialises the deterministic part of a report (everything but timings).
std::string results_digest(const nlohmann::json& report);

}  // namespace qcext::cli
