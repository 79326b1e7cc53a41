#include "trustsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "trustsim/errors.hpp"
#include "trustsim/reputation.hpp"

namespace trustsim {

const char* to_string(Role r) { return r == Role::sender ? "sender" : "receiver"; }

namespace {

struct MeasureAccum {
    std::size_t sender_rounds = 0;
    std::size_t receiver_rounds = 0;
    std::size_t zero_sends = 0;
    std::size_t zero_returns = 0;
    double sender_sum = 0.0;
    double receiver_sum = 0.0;
};

void check_record(const RoundRecord& r, int endowment, int multiplier) {
    if (r.amount_sent < 0 || r.amount_sent > endowment) {
        throw ProtocolError("record round " + std::to_string(r.round_index)
                            + ": amount_sent outside [0, endowment]");
    }
    if (r.amount_returned < 0 || r.amount_returned > multiplier * r.amount_sent) {
        throw ProtocolError("record round " + std::to_string(r.round_index)
                            + ": amount_returned outside [0, multiplier * amount_sent]");
    }
}

}  // namespace

std::vector<DependentMeasures> dependent_measures(const std::vector<RoundRecord>& log,
                                                  int endowment, int multiplier) {
    std::map<std::pair<std::string, Condition>, MeasureAccum> acc;
    for (const RoundRecord& r : log) {
        check_record(r, endowment, multiplier);
        MeasureAccum& s = acc[{r.sender_id, r.game_condition}];
        ++s.sender_rounds;
        s.sender_sum += *send_proportion(r.amount_sent, endowment);
        if (r.amount_sent == 0) ++s.zero_sends;

        if (!r.is_zero_transaction) {
            MeasureAccum& v = acc[{r.receiver_id, r.game_condition}];
            ++v.receiver_rounds;
            v.receiver_sum += *send_proportion(r.amount_returned, multiplier * r.amount_sent);
            if (r.amount_returned == 0) ++v.zero_returns;
        } else {
            acc[{r.receiver_id, r.game_condition}];  // participant exists, no receiver data
        }
    }

    std::vector<DependentMeasures> out;
    for (const auto& [key, a] : acc) {
        DependentMeasures m;
        m.participant_id = key.first;
        m.condition = key.second;
        m.sender_rounds = a.sender_rounds;
        m.receiver_rounds = a.receiver_rounds;
        if (a.sender_rounds > 0) {
            m.avg_send_proportion_as_sender = a.sender_sum / a.sender_rounds;
            m.zero_send_rate_as_sender = static_cast<double>(a.zero_sends) / a.sender_rounds;
        }
        if (a.receiver_rounds > 0) {
            m.avg_send_proportion_as_receiver = a.receiver_sum / a.receiver_rounds;
            m.zero_return_rate_as_receiver = static_cast<double>(a.zero_returns) / a.receiver_rounds;
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::optional<double> zero_send_rate(const std::vector<RoundRecord>& log,
                                     Condition condition, Role role) {
    std::size_t total = 0;
    std::size_t zeros = 0;
    for (const RoundRecord& r : log) {
        if (r.game_condition != condition) continue;
        if (role == Role::sender) {
            ++total;
            if (r.amount_sent == 0) ++zeros;
        } else if (!r.is_zero_transaction) {
            ++total;
            if (r.amount_returned == 0) ++zeros;
        }
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(zeros) / static_cast<double>(total);
}

ScoredLog score_round_log(const std::vector<RoundRecord>& log, const TrustParams& params,
                          int endowment, int multiplier) {
    params.validate();
    ScoredLog scored;

    auto state_of = [&](const std::string& observer, const std::string& partner) -> PairTrustState& {
        const auto key = std::make_pair(observer, partner);
        auto it = scored.trust.find(key);
        if (it == scored.trust.end()) {
            it = scored.trust.emplace(key, make_pair_state(observer, partner, params)).first;
        }
        return it->second;
    };
    auto rep_of = [&](const std::string& id) -> ReputationState& {
        auto it = scored.reputation.find(id);
        if (it == scored.reputation.end()) {
            it = scored.reputation.emplace(id, ReputationState{id, 0, 0.0}).first;
        }
        return it->second;
    };

    for (const RoundRecord& r : log) {
        check_record(r, endowment, multiplier);

        const double p_sender = *send_proportion(r.amount_sent, endowment);
        ReputationState& sender_rep = rep_of(r.sender_id);
        sender_rep = update_reputation(sender_rep, p_sender);

        PairTrustState& held_by_receiver = state_of(r.receiver_id, r.sender_id);
        auto [next_rs, rs_trace] = update_pair_trust(held_by_receiver, p_sender, params);
        held_by_receiver = next_rs;
        scored.trajectory.push_back({r.round_index, r.receiver_id, r.sender_id, rs_trace,
                                     next_rs.fluctuation, sender_rep.mean_proportion});

        PairTrustState& held_by_sender = state_of(r.sender_id, r.receiver_id);
        if (r.is_zero_transaction) {
            held_by_sender = observe_zero_transaction(held_by_sender, PartnerRole::receiver, params);
        } else {
            const double p_receiver = *send_proportion(r.amount_returned, multiplier * r.amount_sent);
            ReputationState& receiver_rep = rep_of(r.receiver_id);
            receiver_rep = update_reputation(receiver_rep, p_receiver);
            auto [next_ss, ss_trace] = update_pair_trust(held_by_sender, p_receiver, params);
            held_by_sender = next_ss;
            scored.trajectory.push_back({r.round_index, r.sender_id, r.receiver_id, ss_trace,
                                         next_ss.fluctuation, receiver_rep.mean_proportion});
        }
    }
    return scored;
}

namespace {

struct Sample {
    double response;
    double trust_predictor;
    double reputation_predictor;
};

}  // namespace

ComparisonReport predictive_comparison(const std::vector<RoundRecord>& log,
                                       const TrustParams& params, int start_round,
                                       int endowment, int multiplier,
                                       const std::string& dataset_name) {
    params.validate();
    ComparisonReport report;
    report.start_round = start_round;

    // Sessions are independent state spaces; samples pool across sessions by
    // round index. Records within a session are replayed in log order.
    std::map<std::string, std::vector<const RoundRecord*>> sessions;
    for (const RoundRecord& r : log) sessions[r.session_id].push_back(&r);

    std::map<std::pair<int, Role>, std::vector<Sample>> samples;
    for (const auto& [session_id, records] : sessions) {
        std::map<std::pair<std::string, std::string>, PairTrustState> trust;
        std::map<std::string, ReputationState> reputation;

        auto trust_before = [&](const std::string& observer, const std::string& partner) {
            const auto it = trust.find({observer, partner});
            return it != trust.end() ? it->second.trust_value : params.initial_trust;
        };

        for (const RoundRecord* rp : records) {
            const RoundRecord& r = *rp;
            check_record(r, endowment, multiplier);

            if (r.round_index >= start_round) {
                const auto sender_rep = reputation.find(r.sender_id);
                if (sender_rep != reputation.end() && sender_rep->second.observation_count > 0) {
                    samples[{r.round_index, Role::sender}].push_back(
                        {*send_proportion(r.amount_sent, endowment),
                         trust_before(r.receiver_id, r.sender_id),
                         sender_rep->second.mean_proportion});
                }
                if (!r.is_zero_transaction) {
                    const auto receiver_rep = reputation.find(r.receiver_id);
                    if (receiver_rep != reputation.end()
                        && receiver_rep->second.observation_count > 0) {
                        samples[{r.round_index, Role::receiver}].push_back(
                            {*send_proportion(r.amount_returned, multiplier * r.amount_sent),
                             trust_before(r.sender_id, r.receiver_id),
                             receiver_rep->second.mean_proportion});
                    }
                }
            }

            // Ingest the round, same rules as live play.
            const double p_sender = *send_proportion(r.amount_sent, endowment);
            auto& srep = reputation.try_emplace(r.sender_id, ReputationState{r.sender_id, 0, 0.0})
                             .first->second;
            srep = update_reputation(srep, p_sender);
            auto& by_receiver = trust.try_emplace({r.receiver_id, r.sender_id},
                                                  make_pair_state(r.receiver_id, r.sender_id, params))
                                    .first->second;
            by_receiver = update_pair_trust(by_receiver, p_sender, params).first;

            if (!r.is_zero_transaction) {
                const double p_receiver =
                    *send_proportion(r.amount_returned, multiplier * r.amount_sent);
                auto& rrep = reputation.try_emplace(r.receiver_id,
                                                    ReputationState{r.receiver_id, 0, 0.0})
                                 .first->second;
                rrep = update_reputation(rrep, p_receiver);
                auto& by_sender = trust.try_emplace({r.sender_id, r.receiver_id},
                                                    make_pair_state(r.sender_id, r.receiver_id, params))
                                      .first->second;
                by_sender = update_pair_trust(by_sender, p_receiver, params).first;
            }
        }
    }

    for (const auto& [key, group] : samples) {
        const auto [round, role] = key;
        std::vector<std::vector<double>> trust_x, rep_x;
        std::vector<double> y;
        for (const Sample& s : group) {
            trust_x.push_back({s.trust_predictor});
            rep_x.push_back({s.reputation_predictor});
            y.push_back(s.response);
        }
        try {
            RegressionRow row;
            row.dataset = dataset_name;
            row.round = round;
            row.role = role;
            row.n = group.size();
            row.trust_fit = ols_fit(trust_x, y);
            row.reputation_fit = ols_fit(rep_x, y);
            row.df = row.trust_fit.df_residual;
            row.t_trust = row.trust_fit.t_values[1];
            row.adj_r2_trust = row.trust_fit.adj_r_squared;
            row.t_reputation = row.reputation_fit.t_values[1];
            row.adj_r2_reputation = row.reputation_fit.adj_r_squared;
            report.rows.push_back(std::move(row));
        } catch (const DataError& e) {
            report.warnings.push_back("round " + std::to_string(round) + " "
                                      + to_string(role) + ": row omitted (" + e.what() + ")");
        }
    }

    std::sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
        if (a.round != b.round) return a.round < b.round;
        return static_cast<int>(a.role) < static_cast<int>(b.role);
    });
    return report;
}

}  // namespace trustsim
