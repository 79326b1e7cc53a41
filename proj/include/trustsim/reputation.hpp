#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "trustsim/errors.hpp"

namespace trustsim {

// Global-average reputation: arithmetic mean of every ingested send
// proportion of a participant, both roles, no recency weighting.
struct ReputationState {
    std::string participant_id;
    std::uint64_t observation_count = 0;
    double mean_proportion = 0.0;
};

inline ReputationState update_reputation(ReputationState state, double proportion) {
    if (!(proportion >= 0.0 && proportion <= 1.0)) {
        throw ProtocolError("proportion outside [0,1] in update_reputation");
    }
    state.observation_count += 1;
    state.mean_proportion += (proportion - state.mean_proportion)
                             / static_cast<double>(state.observation_count);
    return state;
}

inline std::optional<double> reputation_of(const ReputationState& state) {
    if (state.observation_count == 0) return std::nullopt;
    return state.mean_proportion;
}

}  // namespace trustsim
