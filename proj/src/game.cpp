#include "trustsim/game.hpp"

#include <algorithm>
#include <random>

#include "trustsim/errors.hpp"

namespace trustsim {

const char* to_string(Condition c) {
    switch (c) {
        case Condition::simple: return "simple";
        case Condition::identity: return "identity";
        case Condition::score: return "score";
        case Condition::combined: return "combined";
    }
    return "simple";
}

Condition condition_from_string(const std::string& name) {
    if (name == "simple") return Condition::simple;
    if (name == "identity") return Condition::identity;
    if (name == "score") return Condition::score;
    if (name == "combined") return Condition::combined;
    throw DataError("unknown game condition: '" + name + "'");
}

void GameConfig::validate() const {
    if (endowment <= 0) throw ConfigError("endowment must be > 0");
    if (multiplier < 1) throw ConfigError("multiplier must be >= 1");
    if (group_size < 2 || group_size % 2 != 0) {
        throw ConfigError("group_size must be even and >= 2");
    }
    if (rounds_per_pair < 1) throw ConfigError("rounds_per_pair must be >= 1");
    trust_params.validate();
}

std::vector<RoundPairing> schedule_game(const GameConfig& config) {
    config.validate();
    const int n = config.group_size;

    // Circle-method round robin: n-1 perfect matchings covering every pair once.
    std::vector<int> ring(n);
    for (int i = 0; i < n; ++i) ring[i] = i;
    std::vector<std::vector<std::pair<int, int>>> days;
    for (int d = 0; d < n - 1; ++d) {
        std::vector<std::pair<int, int>> matching;
        for (int i = 0; i < n / 2; ++i) {
            int a = ring[i];
            int b = ring[n - 1 - i];
            matching.emplace_back(std::min(a, b), std::max(a, b));
        }
        days.push_back(std::move(matching));
        std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
    }

    std::vector<std::vector<std::pair<int, int>>> rounds;
    for (int rep = 0; rep < config.rounds_per_pair; ++rep) {
        for (const auto& day : days) rounds.push_back(day);
    }

    std::mt19937_64 rng(config.rng_seed);
    for (std::size_t i = rounds.size(); i > 1; --i) {
        const std::size_t j = rng() % i;
        std::swap(rounds[i - 1], rounds[j]);
    }

    // Roles alternate per pair across meetings; initial orientation is seeded.
    std::map<std::pair<int, int>, int> meeting_count;
    std::map<std::pair<int, int>, bool> first_is_sender;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            first_is_sender[{a, b}] = (rng() & 1u) != 0;
        }
    }

    std::vector<RoundPairing> schedule;
    schedule.reserve(rounds.size());
    for (const auto& matching : rounds) {
        RoundPairing round;
        for (const auto& pair : matching) {
            const int m = meeting_count[pair]++;
            const bool first = first_is_sender[pair] == (m % 2 == 0);
            round.emplace_back(first ? pair.first : pair.second,
                               first ? pair.second : pair.first);
        }
        schedule.push_back(std::move(round));
    }
    return schedule;
}

RoundRecord play_round(int sender_decision, int receiver_decision, const GameConfig& config) {
    if (sender_decision < 0 || sender_decision > config.endowment) {
        throw ProtocolError("sender_decision outside [0, endowment]");
    }
    if (receiver_decision < 0 || receiver_decision > config.multiplier * sender_decision) {
        throw ProtocolError("receiver_decision outside [0, multiplier * amount_sent]");
    }
    RoundRecord r;
    r.session_id = config.session_id;
    r.game_condition = config.condition;
    r.amount_sent = sender_decision;
    r.amount_returned = receiver_decision;
    r.sender_payoff = r.amount_returned - r.amount_sent;
    r.receiver_payoff = config.multiplier * r.amount_sent - r.amount_returned;
    r.is_zero_transaction = r.amount_sent == 0;
    return r;
}

}  // namespace trustsim
