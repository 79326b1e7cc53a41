#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace trustsim {

// Constants of the pairwise trust metric. All dimensionless.
struct TrustParams {
    double smoothing = 0.3;       // weight of the newest deviation in beta/alpha
    double alpha_floor = 0.1;     // base aggregation weight
    double trend_step = 0.05;     // trend increment and fluctuation deadband
    double trend_deadband = 0.1;  // trend trigger threshold
    double max_atf = 1.0;         // betrayal threshold for accumulated fluctuation
    double initial_trust = 0.5;   // published score before any interaction

    void validate() const;  // throws ConfigError
};

// Directed per-pair state: what `observer` currently holds about `partner`.
// Constant size regardless of how many rounds were ingested.
struct PairTrustState {
    std::string observer_id;
    std::string partner_id;
    std::uint64_t round_count = 0;
    double last_current_trust = 0.0;  // single-round score of the previous interaction
    double beta = 0.0;                // smoothed deviation magnitude
    double aggregate_trust = 0.0;     // adaptive cumulative score
    double trend_factor = 0.5;        // recent behavioral direction, in [0,1]
    double fluctuation = 0.0;         // stored adjusted accumulated trust fluctuation
    double trust_value = 0.5;         // published score, in [0,1]
};

// Every intermediate of one update, for export and for oracle comparison.
struct UpdateTrace {
    double send_proportion = 0.0;
    double current_trust = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double aggregate_trust = 0.0;
    double trend_factor = 0.0;
    double raw_atf = 0.0;  // accumulated fluctuation before the halving adjustment
    double change_rate = 0.0;
    double expect_trust = 0.0;
    double trust_value = 0.0;
};

enum class PartnerRole { sender, receiver };

PairTrustState make_pair_state(std::string observer_id, std::string partner_id,
                               const TrustParams& params);

// amount / max_amount; empty iff max_amount == 0 (the 0/0 case).
// Throws ProtocolError if amount > max_amount or amount < 0.
std::optional<double> send_proportion(long long amount, long long max_amount);

// Single-round score: ln(p * (e - 1) + 1). Maps [0,1] onto [0,1].
double current_trust(double proportion);

// Full metric pipeline for one observed interaction.
std::pair<PairTrustState, UpdateTrace> update_pair_trust(const PairTrustState& state,
                                                         double proportion,
                                                         const TrustParams& params);

// A 0-send round: the sender's score is updated with p = 0, the receiver's
// score is left untouched (her proportion would be 0/0).
PairTrustState observe_zero_transaction(const PairTrustState& state,
                                        PartnerRole role_of_partner,
                                        const TrustParams& params);

// Two-significant-digit rounding for display. Presentation only.
double display_trust(double value);

}  // namespace trustsim
