#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trustsim/game.hpp"
#include "trustsim/stats.hpp"
#include "trustsim/trust_engine.hpp"

namespace trustsim {

enum class Role { sender, receiver };

const char* to_string(Role r);

// Per (participant, condition) behavioral summary. Receiver-side values
// exclude zero transactions; a participant with only such receiver rounds
// has no receiver average.
struct DependentMeasures {
    std::string participant_id;
    Condition condition = Condition::simple;
    std::size_t sender_rounds = 0;
    std::size_t receiver_rounds = 0;  // excludes zero transactions
    double avg_send_proportion_as_sender = 0.0;
    std::optional<double> avg_send_proportion_as_receiver;
    double zero_send_rate_as_sender = 0.0;
    std::optional<double> zero_return_rate_as_receiver;  // among positive receipts
};

std::vector<DependentMeasures> dependent_measures(const std::vector<RoundRecord>& log,
                                                  int endowment = 10, int multiplier = 3);

struct RegressionRow {
    std::string dataset;
    int round = 0;
    Role role = Role::sender;
    int df = 0;
    std::size_t n = 0;
    double t_trust = 0.0;
    double adj_r2_trust = 0.0;
    double t_reputation = 0.0;
    double adj_r2_reputation = 0.0;
    OlsFit trust_fit;
    OlsFit reputation_fit;
};

struct ComparisonReport {
    int start_round = 4;
    std::vector<RegressionRow> rows;      // sorted by (round, role)
    std::vector<std::string> warnings;    // omitted rows, with the reason
};

// For every round >= start_round and each role, regress the actor's send
// proportion on (a) the trust score the current partner held about the actor
// after the previous round, and (b) the actor's reputation after the previous
// round. Sessions are replayed independently and pooled by round index.
ComparisonReport predictive_comparison(const std::vector<RoundRecord>& log,
                                       const TrustParams& params,
                                       int start_round = 4,
                                       int endowment = 10, int multiplier = 3,
                                       const std::string& dataset_name = "log");

// Fraction of zero amounts for the role under the condition; receiver side
// counts returned-0 among positive-receipt rounds only.
std::optional<double> zero_send_rate(const std::vector<RoundRecord>& log,
                                     Condition condition, Role role);

// Replays a log through the trust and reputation machinery; the same update
// rules run_game applies live. Used by the `score` command and the
// predictive comparison.
struct ScoredLog {
    std::vector<TrajectoryRow> trajectory;
    std::map<std::pair<std::string, std::string>, PairTrustState> trust;
    std::map<std::string, ReputationState> reputation;
};

ScoredLog score_round_log(const std::vector<RoundRecord>& log, const TrustParams& params,
                          int endowment = 10, int multiplier = 3);

}  // namespace trustsim
