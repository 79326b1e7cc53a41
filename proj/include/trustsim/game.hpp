#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trustsim/reputation.hpp"
#include "trustsim/trust_engine.hpp"

namespace trustsim {

enum class Condition { simple, identity, score, combined };

constexpr bool shows_id(Condition c) {
    return c == Condition::identity || c == Condition::combined;
}
constexpr bool shows_trust(Condition c) {
    return c == Condition::score || c == Condition::combined;
}

const char* to_string(Condition c);
Condition condition_from_string(const std::string& name);  // throws DataError

struct GameConfig {
    int endowment = 10;
    int multiplier = 3;
    int group_size = 6;
    int rounds_per_pair = 5;
    Condition condition = Condition::simple;
    std::uint64_t rng_seed = 0;
    TrustParams trust_params{};
    std::string session_id = "s1";

    void validate() const;  // throws ConfigError
};

struct RoundRecord {
    std::string session_id;
    Condition game_condition = Condition::simple;
    int round_index = 0;  // 1-based
    std::string sender_id;
    std::string receiver_id;
    int amount_sent = 0;
    int amount_returned = 0;
    int sender_payoff = 0;    // amount_returned - amount_sent
    int receiver_payoff = 0;  // multiplier * amount_sent - amount_returned
    bool is_zero_transaction = false;
};

// What a deciding agent is allowed to see. Fields absent under the
// condition flags are absent here, so strategies cannot read them.
struct PartnerView {
    std::optional<std::string> partner_label;
    std::optional<double> partner_trust_display;  // two significant digits
    long long own_balance = 0;
    std::optional<int> amount_received;  // receiver only
};

// One round of play: disjoint (sender, receiver) index pairs covering the group.
using RoundPairing = std::vector<std::pair<int, int>>;

// Round-robin matchings repeated rounds_per_pair times, roles alternating
// per pair, round order shuffled by the seed. Pure function of the config.
std::vector<RoundPairing> schedule_game(const GameConfig& config);

// Mechanics of a single exchange; ids and round index are filled by the caller.
RoundRecord play_round(int sender_decision, int receiver_decision, const GameConfig& config);

struct TrajectoryRow {
    int round = 0;
    std::string observer_id;
    std::string partner_id;
    UpdateTrace trace;
    double stored_atf = 0.0;       // adjusted fluctuation kept for the next round
    double reputation_value = 0.0; // partner's global reputation after this round
};

struct SimulationResult {
    std::vector<RoundRecord> rounds;
    std::vector<TrajectoryRow> trajectory;
    std::map<std::pair<std::string, std::string>, PairTrustState> trust;  // (observer, partner)
    std::map<std::string, ReputationState> reputation;
    std::map<std::string, long long> balances;
};

class Agent;

SimulationResult run_game(const GameConfig& config, std::vector<Agent>& agents);

}  // namespace trustsim
