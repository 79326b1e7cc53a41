#include "trustsim/agents.hpp"
#include "trustsim/errors.hpp"
#include "trustsim/game.hpp"

namespace trustsim {

namespace {

PairTrustState& directed_state(SimulationResult& result, const std::string& observer,
                               const std::string& partner, const TrustParams& params) {
    const auto key = std::make_pair(observer, partner);
    auto it = result.trust.find(key);
    if (it == result.trust.end()) {
        it = result.trust.emplace(key, make_pair_state(observer, partner, params)).first;
    }
    return it->second;
}

PartnerView make_view(const GameConfig& config, const SimulationResult& result,
                      const std::string& observer, const std::string& partner,
                      long long balance) {
    PartnerView view;
    view.own_balance = balance;
    if (shows_id(config.condition)) view.partner_label = partner;
    if (shows_trust(config.condition)) {
        const auto it = result.trust.find({observer, partner});
        const double value = it != result.trust.end() ? it->second.trust_value
                                                      : config.trust_params.initial_trust;
        view.partner_trust_display = display_trust(value);
    }
    return view;
}

}  // namespace

SimulationResult run_game(const GameConfig& config, std::vector<Agent>& agents) {
    config.validate();
    if (static_cast<int>(agents.size()) != config.group_size) {
        throw ConfigError("agent count does not match group_size");
    }

    SimulationResult result;
    for (const Agent& a : agents) {
        result.balances[a.id()] = config.endowment;
        result.reputation[a.id()] = ReputationState{a.id(), 0, 0.0};
    }

    const auto schedule = schedule_game(config);
    int round_index = 0;
    for (const RoundPairing& round : schedule) {
        ++round_index;
        for (const auto& [sender_idx, receiver_idx] : round) {
            Agent& sender = agents[sender_idx];
            Agent& receiver = agents[receiver_idx];

            const PartnerView sender_view = make_view(config, result, sender.id(),
                                                      receiver.id(),
                                                      result.balances[sender.id()]);
            const int sent = sender.decide_send(sender_view, config);
            if (sent < 0 || sent > config.endowment) {
                throw ProtocolError("agent '" + sender.id() + "' sent out-of-bounds amount");
            }

            int returned = 0;
            if (sent > 0) {
                PartnerView receiver_view = make_view(config, result, receiver.id(),
                                                      sender.id(),
                                                      result.balances[receiver.id()]);
                receiver_view.amount_received = config.multiplier * sent;
                returned = receiver.decide_return(receiver_view, config.multiplier * sent, config);
                if (returned < 0 || returned > config.multiplier * sent) {
                    throw ProtocolError("agent '" + receiver.id() + "' returned out-of-bounds amount");
                }
            }

            RoundRecord record = play_round(sent, returned, config);
            record.round_index = round_index;
            record.sender_id = sender.id();
            record.receiver_id = receiver.id();
            result.rounds.push_back(record);

            result.balances[sender.id()] += record.sender_payoff;
            result.balances[receiver.id()] += record.receiver_payoff;

            // Sender behavior is always scored, a 0-send as proportion 0.
            const double p_sender = *send_proportion(sent, config.endowment);
            result.reputation[sender.id()] =
                update_reputation(result.reputation[sender.id()], p_sender);

            PairTrustState& held_by_receiver =
                directed_state(result, receiver.id(), sender.id(), config.trust_params);
            auto [next_rs, rs_trace] =
                update_pair_trust(held_by_receiver, p_sender, config.trust_params);
            held_by_receiver = next_rs;
            result.trajectory.push_back({round_index, receiver.id(), sender.id(), rs_trace,
                                         next_rs.fluctuation,
                                         result.reputation[sender.id()].mean_proportion});

            // Receiver side: a zero transaction leaves her score untouched.
            PairTrustState& held_by_sender =
                directed_state(result, sender.id(), receiver.id(), config.trust_params);
            if (record.is_zero_transaction) {
                held_by_sender = observe_zero_transaction(held_by_sender, PartnerRole::receiver,
                                                          config.trust_params);
            } else {
                const double p_receiver = *send_proportion(returned, config.multiplier * sent);
                result.reputation[receiver.id()] =
                    update_reputation(result.reputation[receiver.id()], p_receiver);
                auto [next_ss, ss_trace] =
                    update_pair_trust(held_by_sender, p_receiver, config.trust_params);
                held_by_sender = next_ss;
                result.trajectory.push_back({round_index, sender.id(), receiver.id(), ss_trace,
                                             next_ss.fluctuation,
                                             result.reputation[receiver.id()].mean_proportion});
            }
        }
    }
    return result;
}

}  // namespace trustsim
