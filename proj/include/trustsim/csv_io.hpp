#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "trustsim/agents.hpp"
#include "trustsim/analysis.hpp"
#include "trustsim/game.hpp"

namespace trustsim {

// 17 significant digits; round-trips a double exactly.
std::string format_double(double value);

// Canonical round-log schema:
//   session_id,game_condition,round,sender_id,receiver_id,amount_sent,amount_returned
// UTF-8, LF line endings, '#' lines ignored. Errors carry line and column.
std::vector<RoundRecord> parse_round_log(const std::filesystem::path& path,
                                         int multiplier = 3);
void write_round_log(const std::filesystem::path& path,
                     const std::vector<RoundRecord>& log);

struct Provenance {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string config_json;  // the run's config, embedded verbatim
};

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryRow>& rows,
                          const Provenance& provenance);

void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report,
                          const Provenance& provenance);
std::vector<RegressionRow> parse_comparison_csv(const std::filesystem::path& path);
void write_comparison_json(const std::filesystem::path& path, const ComparisonReport& report,
                           const Provenance& provenance);

// Roster: JSON array of {"agent_id": ..., "kind": ..., "params": {...}}.
std::vector<std::pair<std::string, StrategySpec>> parse_roster(const std::filesystem::path& path);

TrustParams parse_trust_params(const std::filesystem::path& path);
std::string trust_params_json(const TrustParams& params);
std::string game_config_json(const GameConfig& config);

// FNV-1a hash of the serialized config, hex encoded.
std::string config_hash(const std::string& config_json);

}  // namespace trustsim
