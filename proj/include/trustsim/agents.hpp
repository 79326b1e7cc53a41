#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "trustsim/game.hpp"

namespace trustsim {

enum class StrategyKind {
    cooperator,
    defector,
    fixed_fraction,
    trust_proportional,
    reciprocator,
    fluctuator,
    betrayer,
    playbook,
    random_uniform,
};

const char* to_string(StrategyKind k);
StrategyKind strategy_kind_from_string(const std::string& name);  // throws DataError

struct StrategySpec {
    StrategyKind kind = StrategyKind::cooperator;
    double fraction = 0.0;       // fixed_fraction / reciprocator
    double gain = 1.0;           // trust_proportional
    double fallback = 0.5;       // trust_proportional, when trust is hidden
    int period = 1;              // fluctuator
    int betray_after = 0;        // betrayer: cooperative exchanges before defecting
    std::set<std::string> victims;  // playbook
    double good_fraction = 0.0;     // playbook
    double lo = 0.0, hi = 1.0;      // random_uniform

    void validate() const;  // throws DataError
};

// One participant's decision strategy. Deterministic given (spec, game seed,
// agent id); the rng stream is derived so agents never share randomness.
class Agent {
  public:
    Agent(std::string id, StrategySpec spec, std::uint64_t game_seed);

    const std::string& id() const { return id_; }
    const StrategySpec& spec() const { return spec_; }

    int decide_send(const PartnerView& view, const GameConfig& config);
    int decide_return(const PartnerView& view, int amount_received, const GameConfig& config);

  private:
    // Per-partner exchange counter when the partner is identifiable,
    // otherwise a single partner-agnostic counter.
    std::uint64_t& exchange_counter(const PartnerView& view);
    bool is_victim(const PartnerView& view) const;
    double uniform_fraction();

    std::string id_;
    StrategySpec spec_;
    std::mt19937_64 rng_;
    std::map<std::string, std::uint64_t> per_partner_;
    std::uint64_t anonymous_counter_ = 0;
};

// Round-half-to-even; the one rounding rule for fractional decisions.
long long round_half_even(double value);

}  // namespace trustsim
