#include "trustsim/trust_engine.hpp"

#include <algorithm>
#include <cmath>

#include "trustsim/errors.hpp"

namespace trustsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw NumericError(std::string("non-finite ") + what + " in trust update");
    }
}

}  // namespace

void TrustParams::validate() const {
    if (!(smoothing > 0.0 && smoothing < 1.0)) throw ConfigError("smoothing must be in (0,1)");
    if (!(alpha_floor >= 0.0 && alpha_floor < 1.0)) throw ConfigError("alpha_floor must be in [0,1)");
    if (!(trend_step > 0.0)) throw ConfigError("trend_step must be > 0");
    if (!(trend_deadband >= 0.0)) throw ConfigError("trend_deadband must be >= 0");
    if (!(max_atf > 0.0)) throw ConfigError("max_atf must be > 0");
    if (!(initial_trust >= 0.0 && initial_trust <= 1.0)) throw ConfigError("initial_trust must be in [0,1]");
}

PairTrustState make_pair_state(std::string observer_id, std::string partner_id,
                               const TrustParams& params) {
    params.validate();
    PairTrustState s;
    s.observer_id = std::move(observer_id);
    s.partner_id = std::move(partner_id);
    s.trust_value = params.initial_trust;
    return s;
}

std::optional<double> send_proportion(long long amount, long long max_amount) {
    if (amount < 0 || max_amount < 0) throw ProtocolError("negative amount in send_proportion");
    if (amount > max_amount) throw ProtocolError("amount exceeds maximum sendable amount");
    if (max_amount == 0) return std::nullopt;
    return static_cast<double>(amount) / static_cast<double>(max_amount);
}

double current_trust(double proportion) {
    if (!(proportion >= 0.0 && proportion <= 1.0)) {
        throw ProtocolError("proportion outside [0,1] in current_trust");
    }
    return std::log(proportion * (std::exp(1.0) - 1.0) + 1.0);
}

std::pair<PairTrustState, UpdateTrace> update_pair_trust(const PairTrustState& state,
                                                         double proportion,
                                                         const TrustParams& params) {
    UpdateTrace tr;
    tr.send_proportion = proportion;
    tr.current_trust = current_trust(proportion);

    tr.delta = std::abs(tr.current_trust - state.last_current_trust);
    const double beta = params.smoothing * tr.delta + (1.0 - params.smoothing) * state.beta;
    tr.alpha = clamp01(params.alpha_floor + params.smoothing * tr.delta / (1.0 + beta));

    // First observation seeds the aggregate so constant behavior is a fixed point.
    tr.aggregate_trust = state.round_count == 0
                             ? tr.current_trust
                             : tr.alpha * tr.current_trust + (1.0 - tr.alpha) * state.aggregate_trust;

    double trend = state.trend_factor;
    if (tr.current_trust - tr.aggregate_trust > params.trend_deadband) {
        trend += params.trend_step;
    } else if (tr.aggregate_trust - tr.current_trust > params.trend_deadband) {
        trend -= params.trend_step;
    }
    tr.trend_factor = clamp01(trend);

    // Upward surprises accumulate at half weight, downward ones at full weight.
    tr.raw_atf = state.fluctuation;
    if (tr.current_trust - tr.aggregate_trust > params.trend_step) {
        tr.raw_atf += (tr.current_trust - tr.aggregate_trust) / 2.0;
    } else if (tr.aggregate_trust - tr.current_trust > params.trend_step) {
        tr.raw_atf += tr.aggregate_trust - tr.current_trust;
    }

    tr.change_rate = tr.raw_atf >= params.max_atf
                         ? 0.0
                         : std::cos(kPi / 2.0 * tr.raw_atf / params.max_atf);

    tr.expect_trust = tr.trend_factor * tr.current_trust + (1.0 - tr.trend_factor) * tr.aggregate_trust;
    tr.trust_value = clamp01(tr.expect_trust * tr.change_rate);

    require_finite(tr.current_trust, "current_trust");
    require_finite(beta, "beta");
    require_finite(tr.aggregate_trust, "aggregate_trust");
    require_finite(tr.raw_atf, "accumulated fluctuation");
    require_finite(tr.trust_value, "trust_value");

    PairTrustState next = state;
    next.round_count = state.round_count + 1;
    next.last_current_trust = tr.current_trust;
    next.beta = beta;
    next.aggregate_trust = tr.aggregate_trust;
    next.trend_factor = tr.trend_factor;
    next.fluctuation = tr.raw_atf > params.max_atf ? tr.raw_atf / 2.0 : tr.raw_atf;
    next.trust_value = tr.trust_value;
    return {next, tr};
}

PairTrustState observe_zero_transaction(const PairTrustState& state,
                                        PartnerRole role_of_partner,
                                        const TrustParams& params) {
    if (role_of_partner == PartnerRole::receiver) {
        return state;  // her proportion is 0/0; score carries over unchanged
    }
    return update_pair_trust(state, 0.0, params).first;
}

double display_trust(double value) {
    if (value == 0.0) return 0.0;
    const double magnitude = std::ceil(std::log10(std::abs(value)));
    const double scale = std::pow(10.0, 2.0 - magnitude);
    return std::round(value * scale) / scale;
}

}  // namespace trustsim
