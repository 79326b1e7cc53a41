#include "trustsim/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trustsim/errors.hpp"

namespace trustsim {

using nlohmann::json;

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

int parse_int_field(const std::string& value, std::size_t line, std::size_t column,
                    const char* name) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw DataError("line " + std::to_string(line) + ", column " + std::to_string(column)
                        + ": '" + value + "' is not an integer (" + name + ")");
    }
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

constexpr const char* kRoundLogHeader =
    "session_id,game_condition,round,sender_id,receiver_id,amount_sent,amount_returned";

void write_provenance(std::ofstream& out, const Provenance& p) {
    out << "# seed=" << p.seed << "\n";
    out << "# config_hash=" << p.config_hash << "\n";
    if (!p.config_json.empty()) out << "# config=" << p.config_json << "\n";
}

json fit_to_json(const OlsFit& fit) {
    auto stars = [](double t, int df) {
        const double p = student_t_p_value(t, df);
        if (p < 0.001) return "***";
        if (p < 0.01) return "**";
        if (p < 0.05) return "*";
        return "";
    };
    json coeffs = json::array();
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
        coeffs.push_back({{"estimate", fit.coefficients[j]},
                          {"std_error", fit.std_errors[j]},
                          {"t_value", fit.t_values[j]},
                          {"p_stars", stars(fit.t_values[j], fit.df_residual)}});
    }
    return {{"coefficients", coeffs},
            {"r_squared", fit.r_squared},
            {"adj_r_squared", fit.adj_r_squared},
            {"f_stat", fit.f_stat},
            {"df_residual", fit.df_residual},
            {"n", fit.n}};
}

}  // namespace

std::vector<RoundRecord> parse_round_log(const std::filesystem::path& path, int multiplier) {
    auto in = open_input(path);
    std::vector<RoundRecord> log;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            std::string normalized = line;
            if (!normalized.empty() && normalized.back() == '\r') normalized.pop_back();
            if (normalized != kRoundLogHeader) {
                throw DataError("line " + std::to_string(line_no)
                                + ": unexpected header, want '" + kRoundLogHeader + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 7) {
            throw DataError("line " + std::to_string(line_no) + ": expected 7 fields, got "
                            + std::to_string(fields.size()));
        }
        RoundRecord r;
        r.session_id = fields[0];
        try {
            r.game_condition = condition_from_string(fields[1]);
        } catch (const DataError&) {
            throw DataError("line " + std::to_string(line_no)
                            + ", column 2: unknown game condition '" + fields[1] + "'");
        }
        r.round_index = parse_int_field(fields[2], line_no, 3, "round");
        r.sender_id = fields[3];
        r.receiver_id = fields[4];
        r.amount_sent = parse_int_field(fields[5], line_no, 6, "amount_sent");
        r.amount_returned = parse_int_field(fields[6], line_no, 7, "amount_returned");

        if (r.round_index < 1) {
            throw DataError("line " + std::to_string(line_no) + ": round must be >= 1");
        }
        if (r.amount_sent < 0) {
            throw ProtocolError("line " + std::to_string(line_no) + ": negative amount_sent");
        }
        if (r.amount_returned < 0 || r.amount_returned > multiplier * r.amount_sent) {
            throw ProtocolError("line " + std::to_string(line_no) + ": amount_returned "
                                + fields[6] + " exceeds multiplier * amount_sent ("
                                + std::to_string(multiplier * r.amount_sent) + ")");
        }
        r.sender_payoff = r.amount_returned - r.amount_sent;
        r.receiver_payoff = multiplier * r.amount_sent - r.amount_returned;
        r.is_zero_transaction = r.amount_sent == 0;
        log.push_back(std::move(r));
    }
    if (!header_seen) throw DataError("'" + path.string() + "': missing header line");
    return log;
}

void write_round_log(const std::filesystem::path& path, const std::vector<RoundRecord>& log) {
    auto out = open_output(path);
    out << kRoundLogHeader << "\n";
    for (const RoundRecord& r : log) {
        out << r.session_id << ',' << to_string(r.game_condition) << ',' << r.round_index << ','
            << r.sender_id << ',' << r.receiver_id << ',' << r.amount_sent << ','
            << r.amount_returned << "\n";
    }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryRow>& rows, const Provenance& provenance) {
    auto out = open_output(path);
    write_provenance(out, provenance);
    out << "round,observer_id,partner_id,send_proportion,current_trust,aggregate_trust,"
           "trend_factor,atf,change_rate,trust_value,reputation_value\n";
    for (const TrajectoryRow& row : rows) {
        out << row.round << ',' << row.observer_id << ',' << row.partner_id << ','
            << format_double(row.trace.send_proportion) << ','
            << format_double(row.trace.current_trust) << ','
            << format_double(row.trace.aggregate_trust) << ','
            << format_double(row.trace.trend_factor) << ','
            << format_double(row.stored_atf) << ','
            << format_double(row.trace.change_rate) << ','
            << format_double(row.trace.trust_value) << ','
            << format_double(row.reputation_value) << "\n";
    }
}

void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report,
                          const Provenance& provenance) {
    auto out = open_output(path);
    write_provenance(out, provenance);
    out << "dataset,round,role,df,t_trust,adj_r2_trust,t_reputation,adj_r2_reputation\n";
    for (const RegressionRow& row : report.rows) {
        out << row.dataset << ',' << row.round << ',' << to_string(row.role) << ',' << row.df
            << ',' << format_double(row.t_trust) << ',' << format_double(row.adj_r2_trust) << ','
            << format_double(row.t_reputation) << ',' << format_double(row.adj_r2_reputation)
            << "\n";
    }
}

std::vector<RegressionRow> parse_comparison_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<RegressionRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 8) {
            throw DataError("line " + std::to_string(line_no) + ": expected 8 fields");
        }
        RegressionRow row;
        row.dataset = fields[0];
        row.round = parse_int_field(fields[1], line_no, 2, "round");
        row.role = fields[2] == "sender" ? Role::sender : Role::receiver;
        row.df = parse_int_field(fields[3], line_no, 4, "df");
        row.t_trust = std::stod(fields[4]);
        row.adj_r2_trust = std::stod(fields[5]);
        row.t_reputation = std::stod(fields[6]);
        row.adj_r2_reputation = std::stod(fields[7]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_comparison_json(const std::filesystem::path& path, const ComparisonReport& report,
                           const Provenance& provenance) {
    json doc;
    doc["seed"] = provenance.seed;
    doc["config_hash"] = provenance.config_hash;
    if (!provenance.config_json.empty()) {
        doc["config"] = json::parse(provenance.config_json);
    }
    doc["start_round"] = report.start_round;
    doc["intercept_included"] = true;
    doc["warnings"] = report.warnings;
    doc["rows"] = json::array();
    for (const RegressionRow& row : report.rows) {
        doc["rows"].push_back({{"dataset", row.dataset},
                               {"round", row.round},
                               {"role", to_string(row.role)},
                               {"df", row.df},
                               {"n", row.n},
                               {"t_trust", row.t_trust},
                               {"adj_r2_trust", row.adj_r2_trust},
                               {"t_reputation", row.t_reputation},
                               {"adj_r2_reputation", row.adj_r2_reputation},
                               {"trust_model", fit_to_json(row.trust_fit)},
                               {"reputation_model", fit_to_json(row.reputation_fit)}});
    }
    auto out = open_output(path);
    out << doc.dump(2) << "\n";
}

std::vector<std::pair<std::string, StrategySpec>> parse_roster(const std::filesystem::path& path) {
    auto in = open_input(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("roster '" + path.string() + "': invalid JSON: " + e.what());
    }
    if (!doc.is_array()) throw DataError("roster must be a JSON array of agent entries");

    std::vector<std::pair<std::string, StrategySpec>> roster;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& entry = doc[i];
        const std::string where = "roster entry " + std::to_string(i);
        if (!entry.is_object() || !entry.contains("agent_id") || !entry.contains("kind")) {
            throw DataError(where + ": need fields 'agent_id' and 'kind'");
        }
        StrategySpec spec;
        spec.kind = strategy_kind_from_string(entry["kind"].get<std::string>());
        const json params = entry.value("params", json::object());
        try {
            spec.fraction = params.value("f", spec.fraction);
            spec.gain = params.value("gain", spec.gain);
            spec.fallback = params.value("fallback", spec.fallback);
            spec.period = params.value("period", spec.period);
            spec.betray_after = params.value("k", spec.betray_after);
            spec.good_fraction = params.value("good_f", spec.good_fraction);
            spec.lo = params.value("lo", spec.lo);
            spec.hi = params.value("hi", spec.hi);
            if (params.contains("victims")) {
                for (const auto& v : params["victims"]) {
                    spec.victims.insert(v.get<std::string>());
                }
            }
        } catch (const json::exception& e) {
            throw DataError(where + ": bad params: " + e.what());
        }
        try {
            spec.validate();
        } catch (const DataError& e) {
            throw DataError(where + " ('" + entry["agent_id"].get<std::string>() + "'): "
                            + e.what());
        }
        roster.emplace_back(entry["agent_id"].get<std::string>(), std::move(spec));
    }
    return roster;
}

TrustParams parse_trust_params(const std::filesystem::path& path) {
    auto in = open_input(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("params '" + path.string() + "': invalid JSON: " + e.what());
    }
    TrustParams p;
    try {
        p.smoothing = doc.value("smoothing", p.smoothing);
        p.alpha_floor = doc.value("alpha_floor", p.alpha_floor);
        p.trend_step = doc.value("trend_step", p.trend_step);
        p.trend_deadband = doc.value("trend_deadband", p.trend_deadband);
        p.max_atf = doc.value("max_atf", p.max_atf);
        p.initial_trust = doc.value("initial_trust", p.initial_trust);
    } catch (const json::exception& e) {
        throw DataError("params '" + path.string() + "': " + e.what());
    }
    try {
        p.validate();
    } catch (const ConfigError& e) {
        throw DataError("params '" + path.string() + "': " + e.what());
    }
    return p;
}

std::string trust_params_json(const TrustParams& p) {
    json doc = {{"smoothing", p.smoothing},
                {"alpha_floor", p.alpha_floor},
                {"trend_step", p.trend_step},
                {"trend_deadband", p.trend_deadband},
                {"max_atf", p.max_atf},
                {"initial_trust", p.initial_trust}};
    return doc.dump();
}

std::string game_config_json(const GameConfig& c) {
    json doc = {{"endowment", c.endowment},
                {"multiplier", c.multiplier},
                {"group_size", c.group_size},
                {"rounds_per_pair", c.rounds_per_pair},
                {"condition", to_string(c.condition)},
                {"rng_seed", c.rng_seed},
                {"session_id", c.session_id},
                {"trust_params", json::parse(trust_params_json(c.trust_params))}};
    return doc.dump();
}

std::string config_hash(const std::string& config_json) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config_json) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace trustsim
