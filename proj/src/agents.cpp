#include "trustsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "trustsim/errors.hpp"

namespace trustsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t agent_stream_seed(std::uint64_t game_seed, const std::string& agent_id) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the agent id
    for (unsigned char c : agent_id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(game_seed ^ h);
}

int clamp_decision(long long v, int upper) {
    return static_cast<int>(std::clamp<long long>(v, 0, upper));
}

}  // namespace

long long round_half_even(double value) {
    const double floor_v = std::floor(value);
    const double frac = value - floor_v;
    if (frac > 0.5) return static_cast<long long>(floor_v) + 1;
    if (frac < 0.5) return static_cast<long long>(floor_v);
    const long long lo = static_cast<long long>(floor_v);
    return lo % 2 == 0 ? lo : lo + 1;
}

const char* to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::cooperator: return "cooperator";
        case StrategyKind::defector: return "defector";
        case StrategyKind::fixed_fraction: return "fixed_fraction";
        case StrategyKind::trust_proportional: return "trust_proportional";
        case StrategyKind::reciprocator: return "reciprocator";
        case StrategyKind::fluctuator: return "fluctuator";
        case StrategyKind::betrayer: return "betrayer";
        case StrategyKind::playbook: return "playbook";
        case StrategyKind::random_uniform: return "random";
    }
    return "cooperator";
}

StrategyKind strategy_kind_from_string(const std::string& name) {
    if (name == "cooperator") return StrategyKind::cooperator;
    if (name == "defector") return StrategyKind::defector;
    if (name == "fixed_fraction") return StrategyKind::fixed_fraction;
    if (name == "trust_proportional") return StrategyKind::trust_proportional;
    if (name == "reciprocator") return StrategyKind::reciprocator;
    if (name == "fluctuator") return StrategyKind::fluctuator;
    if (name == "betrayer") return StrategyKind::betrayer;
    if (name == "playbook") return StrategyKind::playbook;
    if (name == "random") return StrategyKind::random_uniform;
    throw DataError("unknown strategy kind: '" + name + "'");
}

void StrategySpec::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    switch (kind) {
        case StrategyKind::fixed_fraction:
        case StrategyKind::reciprocator:
            if (!in01(fraction)) throw DataError("strategy fraction must be in [0,1]");
            break;
        case StrategyKind::trust_proportional:
            if (gain < 0.0) throw DataError("trust_proportional gain must be >= 0");
            if (!in01(fallback)) throw DataError("trust_proportional fallback must be in [0,1]");
            break;
        case StrategyKind::fluctuator:
            if (period < 1) throw DataError("fluctuator period must be >= 1");
            break;
        case StrategyKind::betrayer:
            if (betray_after < 0) throw DataError("betrayer count must be >= 0");
            break;
        case StrategyKind::playbook:
            if (!in01(good_fraction)) throw DataError("playbook good_f must be in [0,1]");
            break;
        case StrategyKind::random_uniform:
            if (!in01(lo) || !in01(hi) || lo > hi) {
                throw DataError("random strategy needs 0 <= lo <= hi <= 1");
            }
            break;
        default:
            break;
    }
}

Agent::Agent(std::string id, StrategySpec spec, std::uint64_t game_seed)
    : id_(std::move(id)), spec_(std::move(spec)), rng_(agent_stream_seed(game_seed, id_)) {
    spec_.validate();
}

std::uint64_t& Agent::exchange_counter(const PartnerView& view) {
    if (view.partner_label) return per_partner_[*view.partner_label];
    return anonymous_counter_;
}

bool Agent::is_victim(const PartnerView& view) const {
    // Without IDs the attack cannot target anyone.
    return view.partner_label && spec_.victims.count(*view.partner_label) > 0;
}

double Agent::uniform_fraction() {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return spec_.lo + (spec_.hi - spec_.lo) * u;
}

int Agent::decide_send(const PartnerView& view, const GameConfig& config) {
    const int e = config.endowment;
    switch (spec_.kind) {
        case StrategyKind::cooperator:
            return e;
        case StrategyKind::defector:
            return 0;
        case StrategyKind::fixed_fraction:
        case StrategyKind::reciprocator:
            return clamp_decision(round_half_even(spec_.fraction * e), e);
        case StrategyKind::trust_proportional: {
            const double f = view.partner_trust_display
                                 ? std::clamp(spec_.gain * *view.partner_trust_display, 0.0, 1.0)
                                 : spec_.fallback;
            return clamp_decision(round_half_even(f * e), e);
        }
        case StrategyKind::fluctuator: {
            const std::uint64_t c = exchange_counter(view)++;
            return (c / static_cast<std::uint64_t>(spec_.period)) % 2 == 0 ? e : 0;
        }
        case StrategyKind::betrayer: {
            const std::uint64_t c = exchange_counter(view)++;
            return c < static_cast<std::uint64_t>(spec_.betray_after) ? e : 0;
        }
        case StrategyKind::playbook:
            if (is_victim(view)) return 0;
            return clamp_decision(round_half_even(spec_.good_fraction * e), e);
        case StrategyKind::random_uniform:
            return clamp_decision(round_half_even(uniform_fraction() * e), e);
    }
    return 0;
}

int Agent::decide_return(const PartnerView& view, int amount_received, const GameConfig& config) {
    (void)config;
    const int cap = amount_received;
    switch (spec_.kind) {
        case StrategyKind::cooperator:
            return cap;
        case StrategyKind::defector:
            return 0;
        case StrategyKind::fixed_fraction:
        case StrategyKind::reciprocator:
            return clamp_decision(round_half_even(spec_.fraction * cap), cap);
        case StrategyKind::trust_proportional: {
            const double f = view.partner_trust_display
                                 ? std::clamp(spec_.gain * *view.partner_trust_display, 0.0, 1.0)
                                 : spec_.fallback;
            return clamp_decision(round_half_even(f * cap), cap);
        }
        case StrategyKind::fluctuator: {
            const std::uint64_t c = exchange_counter(view)++;
            return (c / static_cast<std::uint64_t>(spec_.period)) % 2 == 0 ? cap : 0;
        }
        case StrategyKind::betrayer: {
            const std::uint64_t c = exchange_counter(view)++;
            return c < static_cast<std::uint64_t>(spec_.betray_after) ? cap : 0;
        }
        case StrategyKind::playbook:
            // good_f shapes how much the attacker risks as sender; as receiver
            // good behavior is a full return, like the cooperative strategies
            return is_victim(view) ? 0 : cap;
        case StrategyKind::random_uniform:
            return clamp_decision(round_half_even(uniform_fraction() * cap), cap);
    }
    return 0;
}

}  // namespace trustsim
