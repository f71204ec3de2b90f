#pragma once

#include <string>

#include "json.hpp"
#include "rrcover_cli/config.hpp"

namespace rrcover_cli {

// Every command returns a self-contained JSON report that embeds the
// resolved configuration and any seed it consumed.
nlohmann::json cmd_validate(const ExperimentConfig& config);
nlohmann::json cmd_classify(const ExperimentConfig& config);
nlohmann::json cmd_escape(const ExperimentConfig& config);
nlohmann::json cmd_levels(const ExperimentConfig& config);
nlohmann::json cmd_simulate(const ExperimentConfig& config);
nlohmann::json cmd_mbp(const ExperimentConfig& config);
nlohmann::json cmd_oracle(const ExperimentConfig& config);

// Fixed-column table for simulate reports: h,n,E_n,ratio,escape_prob,verdict,seed.
std::string simulate_report_csv(const nlohmann::json& report);

// Derived stream id for per-height (or per-replica) seeding.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace rrcover_cli
