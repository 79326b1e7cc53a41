#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <vector>

#include "trustsim/agents.hpp"
#include "trustsim/analysis.hpp"
#include "trustsim/csv_io.hpp"
#include "trustsim/errors.hpp"
#include "trustsim/game.hpp"
#include "trustsim/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trustsim;

namespace {

struct CommonOpts {
    std::string params_path;
    std::string out_dir = ".";
    std::string format = "csv";
    int endowment = 10;
    int multiplier = 3;
};

TrustParams load_params(const std::string& path) {
    if (path.empty()) return TrustParams{};
    return parse_trust_params(path);
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

int run_simulate(const CommonOpts& common, std::uint64_t seed, const std::string& roster_path,
                 const std::string& condition, int rounds_per_pair,
                 const std::string& session_id) {
    GameConfig config;
    config.endowment = common.endowment;
    config.multiplier = common.multiplier;
    config.rounds_per_pair = rounds_per_pair;
    config.condition = condition_from_string(condition);
    config.rng_seed = seed;
    config.trust_params = load_params(common.params_path);
    config.session_id = session_id;

    const auto roster = parse_roster(roster_path);
    config.group_size = static_cast<int>(roster.size());
    config.validate();

    std::vector<Agent> agents;
    agents.reserve(roster.size());
    for (const auto& [id, spec] : roster) agents.emplace_back(id, spec, seed);

    const SimulationResult result = run_game(config, agents);

    const std::string cfg_json = game_config_json(config);
    const Provenance prov{seed, config_hash(cfg_json), cfg_json};
    const fs::path out = ensure_out_dir(common.out_dir);
    write_round_log(out / "rounds.csv", result.rounds);
    write_trajectory_csv(out / "trajectory.csv", result.trajectory, prov);

    json meta = {{"seed", seed},
                 {"config_hash", prov.config_hash},
                 {"config", json::parse(cfg_json)}};
    std::ofstream meta_out(out / "run_config.json", std::ios::binary);
    meta_out << meta.dump(2) << "\n";

    std::cout << "wrote " << (out / "rounds.csv").string() << " (" << result.rounds.size()
              << " rounds), " << (out / "trajectory.csv").string() << " ("
              << result.trajectory.size() << " updates)\n";
    return 0;
}

int run_score(const CommonOpts& common, const std::string& in_path) {
    const auto log = parse_round_log(in_path, common.multiplier);
    const TrustParams params = load_params(common.params_path);
    const ScoredLog scored = score_round_log(log, params, common.endowment, common.multiplier);

    json cfg = {{"trust_params", json::parse(trust_params_json(params))},
                {"endowment", common.endowment},
                {"multiplier", common.multiplier},
                {"input", fs::path(in_path).filename().string()}};
    const std::string cfg_json = cfg.dump();
    const Provenance prov{0, config_hash(cfg_json), cfg_json};

    const fs::path out = ensure_out_dir(common.out_dir);
    write_trajectory_csv(out / "trajectory.csv", scored.trajectory, prov);
    std::cout << "wrote " << (out / "trajectory.csv").string() << " ("
              << scored.trajectory.size() << " updates)\n";
    return 0;
}

json measures_json(const std::vector<DependentMeasures>& measures) {
    json arr = json::array();
    for (const auto& m : measures) {
        json entry = {{"participant_id", m.participant_id},
                      {"condition", to_string(m.condition)},
                      {"sender_rounds", m.sender_rounds},
                      {"receiver_rounds", m.receiver_rounds},
                      {"avg_send_proportion_as_sender", m.avg_send_proportion_as_sender},
                      {"zero_send_rate_as_sender", m.zero_send_rate_as_sender}};
        if (m.avg_send_proportion_as_receiver) {
            entry["avg_send_proportion_as_receiver"] = *m.avg_send_proportion_as_receiver;
        }
        if (m.zero_return_rate_as_receiver) {
            entry["zero_return_rate_as_receiver"] = *m.zero_return_rate_as_receiver;
        }
        arr.push_back(std::move(entry));
    }
    return arr;
}

// Paired t CIs of the simple condition against each other condition present,
// yoked by participant, plus Welch t between the per-participant averages.
json condition_contrasts(const std::vector<DependentMeasures>& measures) {
    std::map<Condition, std::map<std::string, const DependentMeasures*>> by_condition;
    for (const auto& m : measures) by_condition[m.condition][m.participant_id] = &m;

    json contrasts = json::array();
    const auto simple_it = by_condition.find(Condition::simple);
    if (simple_it == by_condition.end()) return contrasts;

    for (const auto& [cond, participants] : by_condition) {
        if (cond == Condition::simple) continue;
        for (const Role role : {Role::sender, Role::receiver}) {
            std::vector<double> simple_vals, other_vals;
            for (const auto& [pid, m] : simple_it->second) {
                const auto other = participants.find(pid);
                if (other == participants.end()) continue;
                std::optional<double> a, b;
                if (role == Role::sender) {
                    a = m->avg_send_proportion_as_sender;
                    b = other->second->avg_send_proportion_as_sender;
                } else {
                    a = m->avg_send_proportion_as_receiver;
                    b = other->second->avg_send_proportion_as_receiver;
                }
                if (a && b) {
                    simple_vals.push_back(*a);
                    other_vals.push_back(*b);
                }
            }
            if (simple_vals.size() < 2) continue;
            const PairedTInterval ci = paired_t_ci(simple_vals, other_vals);
            const WelchResult w = welch_t(simple_vals, other_vals);
            contrasts.push_back({{"comparison", std::string("simple_vs_") + to_string(cond)},
                                 {"role", to_string(role)},
                                 {"n", simple_vals.size()},
                                 {"mean_diff", ci.mean_diff},
                                 {"ci_lo", ci.lo},
                                 {"ci_hi", ci.hi},
                                 {"df", ci.df},
                                 {"degenerate", ci.degenerate},
                                 {"welch_t", w.t},
                                 {"welch_df", w.df}});
        }
    }
    return contrasts;
}

int run_analyze(const CommonOpts& common, const std::string& in_path) {
    const auto log = parse_round_log(in_path, common.multiplier);
    const auto measures = dependent_measures(log, common.endowment, common.multiplier);

    json zero_rates = json::array();
    for (const Condition cond : {Condition::simple, Condition::identity, Condition::score,
                                 Condition::combined}) {
        for (const Role role : {Role::sender, Role::receiver}) {
            const auto rate = zero_send_rate(log, cond, role);
            if (rate) {
                zero_rates.push_back({{"condition", to_string(cond)},
                                      {"role", to_string(role)},
                                      {"rate", *rate}});
            }
        }
    }

    json doc = {{"input", fs::path(in_path).filename().string()},
                {"measures", measures_json(measures)},
                {"zero_rates", zero_rates},
                {"condition_contrasts", condition_contrasts(measures)}};

    const fs::path out = ensure_out_dir(common.out_dir);
    std::ofstream json_out(out / "analysis.json", std::ios::binary);
    json_out << doc.dump(2) << "\n";

    if (common.format == "csv") {
        std::ofstream csv(out / "analysis.csv", std::ios::binary);
        csv << "participant_id,condition,sender_rounds,receiver_rounds,"
               "avg_send_proportion_as_sender,avg_send_proportion_as_receiver,"
               "zero_send_rate_as_sender,zero_return_rate_as_receiver\n";
        for (const auto& m : measures) {
            csv << m.participant_id << ',' << to_string(m.condition) << ',' << m.sender_rounds
                << ',' << m.receiver_rounds << ','
                << format_double(m.avg_send_proportion_as_sender) << ','
                << (m.avg_send_proportion_as_receiver
                        ? format_double(*m.avg_send_proportion_as_receiver)
                        : std::string())
                << ',' << format_double(m.zero_send_rate_as_sender) << ','
                << (m.zero_return_rate_as_receiver
                        ? format_double(*m.zero_return_rate_as_receiver)
                        : std::string())
                << "\n";
        }
    }
    std::cout << "wrote " << (out / "analysis.json").string() << "\n";
    return 0;
}

int run_compare(const CommonOpts& common, const std::string& in_path, int start_round) {
    const auto log = parse_round_log(in_path, common.multiplier);
    const TrustParams params = load_params(common.params_path);
    const ComparisonReport report = predictive_comparison(
        log, params, start_round, common.endowment, common.multiplier,
        fs::path(in_path).stem().string());

    json cfg = {{"trust_params", json::parse(trust_params_json(params))},
                {"endowment", common.endowment},
                {"multiplier", common.multiplier},
                {"start_round", start_round},
                {"input", fs::path(in_path).filename().string()}};
    const std::string cfg_json = cfg.dump();
    const Provenance prov{0, config_hash(cfg_json), cfg_json};

    const fs::path out = ensure_out_dir(common.out_dir);
    if (common.format == "json") {
        write_comparison_json(out / "comparison.json", report, prov);
        std::cout << "wrote " << (out / "comparison.json").string() << "\n";
    } else {
        write_comparison_csv(out / "comparison.csv", report, prov);
        std::cout << "wrote " << (out / "comparison.csv").string() << "\n";
    }
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pairwise trust metric, trust game simulator and analysis pipeline"};
    app.require_subcommand(1);

    CommonOpts common;
    std::uint64_t seed = 0;
    std::string roster_path, in_path;
    std::string condition = "simple";
    std::string session_id = "s1";
    int rounds_per_pair = 5;
    int start_round = 4;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--params", common.params_path, "trust params JSON file");
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--endowment", common.endowment, "sender endowment per round");
        cmd->add_option("--multiplier", common.multiplier, "transfer multiplier");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run a seeded game and export logs");
    simulate->add_option("--seed", seed, "rng seed");
    simulate->add_option("--roster", roster_path, "strategy roster JSON")->required();
    simulate->add_option("--condition", condition, "visibility condition")
        ->check(CLI::IsMember({"simple", "identity", "score", "combined"}));
    simulate->add_option("--rounds-per-pair", rounds_per_pair, "meetings per pair");
    simulate->add_option("--session-id", session_id, "session identifier");
    add_common(simulate);

    CLI::App* score = app.add_subcommand("score", "trust/reputation trajectories for a round log");
    score->add_option("--in", in_path, "round log CSV")->required();
    add_common(score);

    CLI::App* analyze = app.add_subcommand("analyze", "dependent measures and condition tests");
    analyze->add_option("--in", in_path, "round log CSV")->required();
    add_common(analyze);

    CLI::App* compare = app.add_subcommand("compare", "trust vs reputation predictive comparison");
    compare->add_option("--in", in_path, "round log CSV")->required();
    compare->add_option("--start-round", start_round, "first regressed round");
    add_common(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) {
            return run_simulate(common, seed, roster_path, condition, rounds_per_pair, session_id);
        }
        if (score->parsed()) return run_score(common, in_path);
        if (analyze->parsed()) return run_analyze(common, in_path);
        if (compare->parsed()) return run_compare(common, in_path, start_round);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
