// Standalone acceptance suite: one pass/fail line per criterion, exit code is
// the number of failures. Each check is self-contained and uses the reference
// evaluators in oracle.hpp rather than the library's own plumbing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "trustsim/agents.hpp"
#include "trustsim/analysis.hpp"
#include "trustsim/csv_io.hpp"
#include "trustsim/errors.hpp"
#include "trustsim/game.hpp"
#include "trustsim/stats.hpp"
#include "trustsim/trust_engine.hpp"

using namespace trustsim;
namespace fs = std::filesystem;

namespace {

constexpr double kE = 2.718281828459045;

double proportion_for(double tc) { return (std::exp(tc) - 1.0) / (kE - 1.0); }

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Numeric-field equality without tolerances.
bool states_identical(const PairTrustState& a, const PairTrustState& b) {
    const double fa[] = {a.last_current_trust, a.beta, a.aggregate_trust,
                         a.trend_factor, a.fluctuation, a.trust_value};
    const double fb[] = {b.last_current_trust, b.beta, b.aggregate_trust,
                         b.trend_factor, b.fluctuation, b.trust_value};
    return a.round_count == b.round_count && std::memcmp(fa, fb, sizeof(fa)) == 0;
}

std::vector<double> run_library(const std::vector<double>& proportions, const TrustParams& p) {
    PairTrustState st = make_pair_state("a", "b", p);
    std::vector<double> out;
    for (double prop : proportions) {
        auto [next, trace] = update_pair_trust(st, prop, p);
        st = next;
        out.push_back(trace.trust_value);
    }
    return out;
}

bool trace_matches_oracle(const std::vector<double>& proportions, double tol) {
    const TrustParams params;
    const auto lib = run_library(proportions, params);
    const auto ref = oracle::trust_trace(proportions);
    for (std::size_t i = 0; i < proportions.size(); ++i) {
        if (!close(lib[i], ref[i].trust, tol)) return false;
    }
    return true;
}

// ---- criteria ------------------------------------------------------------

bool criterion_point_checks() {
    return close(current_trust(0.0), 0.0, 1e-12) && close(current_trust(1.0), 1.0, 1e-12)
           && close(current_trust(0.5), 0.620115, 1e-6);
}

bool criterion_hand_traces() {
    const double p_half = proportion_for(0.5);

    // fixed point: a constant sequence scoring 0.5 publishes exactly 0.5
    const auto fixed = run_library(std::vector<double>(20, p_half), TrustParams{});
    for (double t : fixed) {
        if (!close(t, 0.5, 1e-9)) return false;
    }

    const auto five_ones = run_library(std::vector<double>(5, 1.0), TrustParams{});
    if (!close(five_ones.back(), 1.0, 1e-9)) return false;

    const std::vector<double> betrayal = {1, 1, 1, 1, 1, 0};
    const auto betrayed = run_library(betrayal, TrustParams{});
    if (!close(betrayed.back(), 0.180709, 1e-4)) return false;

    const std::vector<double> twice = {1, 1, 1, 1, 1, 0, 0};
    if (run_library(twice, TrustParams{}).back() != 0.0) return false;

    const std::vector<double> alternation = {1, 0, 1, 0};
    if (run_library(alternation, TrustParams{}).back() != 0.0) return false;

    return trace_matches_oracle(betrayal, 1e-9) && trace_matches_oracle(twice, 1e-9)
           && trace_matches_oracle(alternation, 1e-9)
           && trace_matches_oracle(std::vector<double>(20, p_half), 1e-9);
}

bool criterion_range_safety() {
    const TrustParams params;
    PairTrustState st = make_pair_state("a", "b", params);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double prev_raw = 0.0;
    for (int i = 0; i < 100000; ++i) {
        auto [next, trace] = update_pair_trust(st, unif(rng), params);
        const bool bounds = trace.trust_value >= 0.0 && trace.trust_value <= 1.0
                            && trace.aggregate_trust >= 0.0 && trace.aggregate_trust <= 1.0
                            && trace.trend_factor >= 0.0 && trace.trend_factor <= 1.0
                            && trace.raw_atf >= 0.0 && next.fluctuation >= 0.0;
        const bool gate = (trace.change_rate == 0.0) == (trace.raw_atf >= params.max_atf);
        const bool halving = next.fluctuation
                             == (trace.raw_atf > params.max_atf ? trace.raw_atf / 2.0
                                                                : trace.raw_atf);
        const bool monotone = trace.raw_atf >= prev_raw - 1e-15
                              || next.fluctuation == trace.raw_atf / 2.0;
        if (!(bounds && gate && halving && monotone)) return false;
        prev_raw = next.fluctuation;
        st = next;
    }
    return true;
}

bool criterion_asymmetric_punishment() {
    const TrustParams params;
    const double base_tc = 0.5;
    for (double d : {0.1, 0.2, 0.4}) {
        // settle the aggregate at base_tc, then deviate by +/- d in score space
        PairTrustState settled = make_pair_state("a", "b", params);
        for (int i = 0; i < 30; ++i) {
            settled = update_pair_trust(settled, proportion_for(base_tc), params).first;
        }
        const double atf0 = settled.fluctuation;
        const auto up = update_pair_trust(settled, proportion_for(base_tc + d), params);
        const auto down = update_pair_trust(settled, proportion_for(base_tc - d), params);
        const double inc_up = up.second.raw_atf - atf0;
        const double inc_down = down.second.raw_atf - atf0;
        if (inc_up <= 0.0 || inc_down <= 0.0) return false;
        if (!close(inc_down, 2.0 * inc_up, 1e-12)) return false;
    }
    return true;
}

bool criterion_betrayal_vs_average() {
    const TrustParams params;
    for (int k = 3; k <= 10; ++k) {
        std::vector<double> history(static_cast<std::size_t>(k), 1.0);
        history.push_back(0.0);
        const double trust = run_library(history, params).back();
        const double reputation = static_cast<double>(k) / (k + 1.0);
        if (!(trust < reputation - 0.3)) return false;
        if (k == 5) {
            if (!close(trust, 0.180709, 1e-4) || !close(reputation, 0.833333, 1e-4)) return false;
        }
    }
    return true;
}

bool criterion_playbook_separation() {
    GameConfig config;
    config.rng_seed = 11;
    config.condition = Condition::identity;
    std::vector<Agent> agents;
    {
        StrategySpec attacker;
        attacker.kind = StrategyKind::playbook;
        attacker.victims = {"p2"};
        attacker.good_fraction = 0.8;
        agents.emplace_back("p1", attacker, config.rng_seed);
    }
    for (int i = 1; i < config.group_size; ++i) {
        StrategySpec spec;
        spec.kind = StrategyKind::fixed_fraction;
        spec.fraction = 0.8;
        agents.emplace_back("p" + std::to_string(i + 1), spec, config.rng_seed);
    }
    const SimulationResult sim = run_game(config, agents);
    const auto it = sim.trust.find({"p2", "p1"});
    if (it == sim.trust.end()) return false;
    return it->second.trust_value <= 0.2 && sim.reputation.at("p1").mean_proportion >= 0.7;
}

bool criterion_predictive_direction() {
    GameConfig config;
    config.rng_seed = 7;
    config.condition = Condition::identity;
    config.group_size = 18;
    std::vector<Agent> agents;
    auto add = [&](const std::string& id, const StrategySpec& spec) {
        agents.emplace_back(id, spec, config.rng_seed);
    };
    // heterogeneous stable strategies plus low-level noise: attackers whose
    // behavior is partner-specific, two delayed betrayers, steady fractional
    // players, and two noise agents. Pairwise trust can see the targeting
    // and the betrayals; a global average cannot.
    const char* victims[6][3] = {{"p9", "p10", "p11"},  {"p11", "p12", "p13"},
                                 {"p13", "p14", "p15"}, {"p15", "p16", "p17"},
                                 {"p17", "p18", "p9"},  {"p10", "p12", "p14"}};
    const double good[6] = {0.95, 0.85, 0.8, 0.7, 0.6, 0.9};
    for (int i = 0; i < 6; ++i) {
        StrategySpec spec;
        spec.kind = StrategyKind::playbook;
        spec.victims = {victims[i][0], victims[i][1], victims[i][2]};
        spec.good_fraction = good[i];
        add("p" + std::to_string(i + 1), spec);
    }
    for (int i = 0; i < 2; ++i) {
        StrategySpec spec;
        spec.kind = StrategyKind::betrayer;
        spec.betray_after = 3 + 2 * i;
        add("p" + std::to_string(7 + i), spec);
    }
    const double fractions[8] = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    for (int i = 0; i < 8; ++i) {
        StrategySpec spec;
        spec.kind = StrategyKind::fixed_fraction;
        spec.fraction = fractions[i];
        add("p" + std::to_string(9 + i), spec);
    }
    for (int i = 0; i < 2; ++i) {
        StrategySpec spec;
        spec.kind = StrategyKind::random_uniform;
        spec.lo = 0.45;
        spec.hi = 0.55;
        add("p" + std::to_string(17 + i), spec);
    }
    const SimulationResult sim = run_game(config, agents);
    const ComparisonReport report = predictive_comparison(sim.rounds, config.trust_params, 4,
                                                          config.endowment, config.multiplier);
    if (report.rows.empty()) return false;
    std::size_t trust_wins = 0;
    for (const RegressionRow& row : report.rows) {
        if (row.adj_r2_trust >= row.adj_r2_reputation) ++trust_wins;
    }
    return static_cast<double>(trust_wins) >= 0.7 * static_cast<double>(report.rows.size());
}

bool criterion_statistics_oracles() {
    std::mt19937_64 rng(321);
    std::uniform_int_distribution<int> n_dist(8, 120);
    std::uniform_int_distribution<int> k_dist(1, 4);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = n_dist(rng);
        const int k = k_dist(rng);
        std::vector<std::vector<double>> x(n, std::vector<double>(k));
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) x[i][j] = unif(rng);
            y[i] = unif(rng);
        }
        const OlsFit fit = ols_fit(x, y);
        const oracle::NaiveOls ref = oracle::naive_ols(x, y);
        for (int j = 0; j <= k; ++j) {
            if (!close(fit.coefficients[j], ref.coefficients[j],
                       1e-8 * std::max(1.0, std::fabs(ref.coefficients[j]))))
                return false;
            if (!close(fit.t_values[j], ref.t_values[j],
                       1e-8 * std::max(1.0, std::fabs(ref.t_values[j]))))
                return false;
        }
        if (!close(fit.adj_r_squared, ref.adj_r_squared, 1e-8)) return false;
        if (!close(fit.f_stat, ref.f_stat, 1e-8 * std::max(1.0, std::fabs(ref.f_stat))))
            return false;
    }

    const PairedTInterval ci = paired_t_ci({1.0, 2.0, 3.0}, {2.0, 4.0, 3.0});
    if (!close(ci.lo, -3.484137711719546, 1e-3) || !close(ci.hi, 1.484137711719546, 1e-3))
        return false;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(8 + trial % 25), b(5 + trial % 19);
        for (double& v : a) v = unit(rng);
        for (double& v : b) v = unit(rng);
        double ref_df = 0.0;
        const double ref_t = oracle::naive_welch_t(a, b, &ref_df);
        const WelchResult r = welch_t(a, b);
        if (!close(r.t, ref_t, 1e-10 * std::max(1.0, std::fabs(ref_t)))) return false;
        if (!close(r.df, ref_df, 1e-10 * ref_df)) return false;
    }
    return true;
}

bool criterion_zero_transaction() {
    const TrustParams params;
    PairTrustState st = make_pair_state("a", "b", params);
    for (double p : {0.9, 0.7, 0.8}) st = update_pair_trust(st, p, params).first;

    // receiver side: untouched, bit for bit
    const PairTrustState receiver_after = observe_zero_transaction(st, PartnerRole::receiver,
                                                                   params);
    if (!states_identical(receiver_after, st)) return false;

    // sender side: exactly the p = 0 update
    const PairTrustState sender_after = observe_zero_transaction(st, PartnerRole::sender, params);
    const PairTrustState explicit_zero = update_pair_trust(st, 0.0, params).first;
    if (!states_identical(sender_after, explicit_zero)) return false;

    // dependent measures drop the receiver's 0/0 rounds and keep sender 0-sends
    auto record = [](int round, int sent, int ret) {
        RoundRecord r;
        r.session_id = "s1";
        r.round_index = round;
        r.sender_id = "A";
        r.receiver_id = "B";
        r.amount_sent = sent;
        r.amount_returned = ret;
        r.sender_payoff = ret - sent;
        r.receiver_payoff = 3 * sent - ret;
        r.is_zero_transaction = sent == 0;
        return r;
    };
    const std::vector<RoundRecord> log = {record(1, 0, 0), record(2, 10, 15)};
    for (const DependentMeasures& m : dependent_measures(log)) {
        if (m.participant_id == "A") {
            if (m.sender_rounds != 2 || !close(m.avg_send_proportion_as_sender, 0.5, 1e-12)
                || !close(m.zero_send_rate_as_sender, 0.5, 1e-12))
                return false;
        }
        if (m.participant_id == "B") {
            if (m.receiver_rounds != 1 || !m.avg_send_proportion_as_receiver.has_value()
                || !close(*m.avg_send_proportion_as_receiver, 0.5, 1e-12))
                return false;
        }
    }
    return true;
}

std::string serialize_state(const PairTrustState& st) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%020llu|%+.17e|%+.17e|%+.17e|%+.17e|%+.17e|%+.17e",
                  static_cast<unsigned long long>(st.round_count), st.last_current_trust,
                  st.beta, st.aggregate_trust, st.trend_factor, st.fluctuation, st.trust_value);
    return buf;
}

bool criterion_constant_cost() {
    const TrustParams params;
    auto median_update_ns = [&](std::uint64_t prior) {
        PairTrustState st = make_pair_state("a", "b", params);
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::uint64_t i = 0; i < prior; ++i) {
            st = update_pair_trust(st, unif(rng), params).first;
        }
        std::vector<double> samples;
        samples.reserve(1000);
        for (int i = 0; i < 1000; ++i) {
            const double p = unif(rng);
            const auto t0 = std::chrono::steady_clock::now();
            for (int j = 0; j < 32; ++j) st = update_pair_trust(st, p, params).first;
            const auto t1 = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / 32.0);
        }
        std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
        return std::make_pair(samples[samples.size() / 2], st);
    };
    const auto [t_small, st_small] = median_update_ns(10);
    const auto [t_large, st_large] = median_update_ns(1000000);
    if (!(t_large <= 2.0 * t_small)) return false;
    // serialized state size does not grow with history
    return serialize_state(st_small).size() == serialize_state(st_large).size();
}

bool criterion_determinism_roundtrip() {
    const fs::path dir = fs::temp_directory_path() / "trustsim_acceptance";
    fs::create_directories(dir);

    GameConfig config;
    config.rng_seed = 17;
    config.condition = Condition::combined;
    auto build_agents = [&]() {
        std::vector<Agent> agents;
        for (int i = 0; i < config.group_size; ++i) {
            StrategySpec spec;
            spec.kind = StrategyKind::random_uniform;
            spec.lo = 0.1;
            spec.hi = 0.9;
            agents.emplace_back("p" + std::to_string(i + 1), spec, config.rng_seed);
        }
        return agents;
    };
    auto agents_a = build_agents();
    auto agents_b = build_agents();
    const SimulationResult a = run_game(config, agents_a);
    const SimulationResult b = run_game(config, agents_b);

    const Provenance prov{config.rng_seed, config_hash(game_config_json(config)),
                          game_config_json(config)};
    auto read_bytes = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const fs::path log_a = dir / "a.csv", log_b = dir / "b.csv";
    write_round_log(log_a, a.rounds);
    write_round_log(log_b, b.rounds);
    if (read_bytes(log_a) != read_bytes(log_b)) return false;

    const ComparisonReport rep_a = predictive_comparison(a.rounds, config.trust_params);
    const ComparisonReport rep_b = predictive_comparison(b.rounds, config.trust_params);
    const fs::path rpt_a = dir / "a_report.csv", rpt_b = dir / "b_report.csv";
    write_comparison_csv(rpt_a, rep_a, prov);
    write_comparison_csv(rpt_b, rep_b, prov);
    if (read_bytes(rpt_a) != read_bytes(rpt_b)) return false;

    // round trip: parsed log analyzes exactly like the in-memory one
    const std::vector<RoundRecord> parsed = parse_round_log(log_a);
    if (parsed.size() != a.rounds.size()) return false;
    const ScoredLog mem = score_round_log(a.rounds, config.trust_params);
    const ScoredLog disk = score_round_log(parsed, config.trust_params);
    if (mem.trajectory.size() != disk.trajectory.size()) return false;
    for (std::size_t i = 0; i < mem.trajectory.size(); ++i) {
        if (mem.trajectory[i].trace.trust_value != disk.trajectory[i].trace.trust_value)
            return false;
        if (mem.trajectory[i].reputation_value != disk.trajectory[i].reputation_value)
            return false;
    }
    const ComparisonReport rep_disk = predictive_comparison(parsed, config.trust_params);
    if (rep_disk.rows.size() != rep_a.rows.size()) return false;
    for (std::size_t i = 0; i < rep_a.rows.size(); ++i) {
        if (rep_a.rows[i].t_trust != rep_disk.rows[i].t_trust) return false;
        if (rep_a.rows[i].adj_r2_reputation != rep_disk.rows[i].adj_r2_reputation) return false;
    }
    return true;
}

bool criterion_schedule_constraints() {
    GameConfig config;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        config.rng_seed = seed;
        const auto schedule = schedule_game(config);
        std::map<std::pair<int, int>, int> meetings;
        std::map<std::pair<int, int>, int> senders;
        for (const RoundPairing& round : schedule) {
            for (const auto& [s, r] : round) {
                ++meetings[{std::min(s, r), std::max(s, r)}];
                ++senders[{s, r}];
            }
        }
        for (int a = 0; a < config.group_size; ++a) {
            for (int b = a + 1; b < config.group_size; ++b) {
                const auto m = meetings.find({a, b});
                if (m == meetings.end() || m->second < config.rounds_per_pair) return false;
                const auto f = senders.find({a, b});
                const auto g = senders.find({b, a});
                const int diff = (f == senders.end() ? 0 : f->second)
                                 - (g == senders.end() ? 0 : g->second);
                if (std::abs(diff) > 1) return false;
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*fn)();
    };
    const Criterion criteria[] = {
        {"01 single-round score point checks", criterion_point_checks},
        {"02 hand traces match the reference evaluator", criterion_hand_traces},
        {"03 range and safety properties over 1e5 random steps", criterion_range_safety},
        {"04 downward fluctuation counts double", criterion_asymmetric_punishment},
        {"05 betrayal drops trust far below the running average", criterion_betrayal_vs_average},
        {"06 playbook attacker: victim trust low, reputation high", criterion_playbook_separation},
        {"07 trust out-predicts reputation on heterogeneous agents",
         criterion_predictive_direction},
        {"08 statistics match brute-force references", criterion_statistics_oracles},
        {"09 zero-transaction update semantics", criterion_zero_transaction},
        {"10 constant per-update cost and state size", criterion_constant_cost},
        {"11 determinism and disk round-trip", criterion_determinism_roundtrip},
        {"12 schedule fairness across 1000 seeds", criterion_schedule_constraints},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::printf("[FAIL] %s (exception: %s)\n", c.name, e.what());
            ++failures;
            continue;
        }
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", c.name);
        if (!ok) ++failures;
    }
    return failures;
}
