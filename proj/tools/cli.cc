// Copyright 2026 The dfsmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dfsmem/noise.h"
#include "dfsmem/protocol.h"
#include "dfsmem/trials.h"
#include "json.hpp"

namespace dfsmem::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kCliNormTolerance = 1e-3;

const std::vector<std::pair<Command, std::string>> &command_names() {
    static const std::vector<std::pair<Command, std::string>> names{
        {Command::Entangle, "entangle"},         {Command::Teleport, "teleport"},
        {Command::Read, "read"},                 {Command::RemoteTransfer, "remote-transfer"},
        {Command::CurvesFig4a, "curves-fig4a"},  {Command::CurvesFig4b, "curves-fig4b"},
        {Command::BsmStats, "bsm-stats"},        {Command::OracleCheck, "oracle-check"},
    };
    return names;
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string &field, const std::string &text) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw ConfigError(field, "cannot parse number '" + text + "'");
    }
    if (used != text.size()) {
        throw ConfigError(field, "cannot parse number '" + text + "'");
    }
    return v;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string &field, const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(field, trim(item)));
    }
    if (out.empty()) {
        throw ConfigError(field, "empty list");
    }
    return out;
}

std::string format_list(const std::vector<double> &xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        out += (i ? "," : "") + num(xs[i]);
    }
    return out;
}

// key=value lines become "--key value" pairs; underscores map to dashes.
std::vector<std::string> load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open '" + path + "'");
    }
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config", path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config" || key == "command") {
            throw ConfigError(key, "not allowed in a config file");
        }
        args.push_back("--" + key);
        args.push_back(trim(line.substr(eq + 1)));
    }
    return args;
}

void require(bool ok, const char *field, const std::string &message) {
    if (!ok) {
        throw ConfigError(field, message);
    }
}

bool unit(double x) {
    return x >= 0.0 && x <= 1.0;
}

void validate(const CliConfig &c) {
    require(c.pc > 0.0 && c.pc < 0.5, "pc", "must lie in (0, 0.5)");
    require(unit(c.chi), "chi", "must lie in [0, 1]");
    require(unit(c.eta_d), "eta-d", "must lie in [0, 1]");
    require(unit(c.p_dc), "p-dc", "must lie in [0, 1]");
    require(c.L0 >= 0.0, "L0", "must be >= 0");
    require(c.L_att > 0.0, "L-att", "must be > 0");
    require(c.f_p > 0.0, "f-p", "must be > 0");
    double norm = std::norm(c.alpha) + std::norm(c.beta);
    require(std::isfinite(norm) && std::abs(norm - 1.0) <= kCliNormTolerance, "beta",
            "|alpha|^2 + |beta|^2 = " + num(norm) + ", expected 1");
    require(c.trials >= 1, "trials", "must be >= 1");
    require(c.threads >= 1 && c.threads <= 256, "threads", "must lie in [1, 256]");
    require(c.truncation >= 2 && c.truncation <= 8, "truncation", "must lie in [2, 8]");
    require(c.n_max >= 1 && c.n_max <= 3, "n-max", "must lie in [1, 3]");
    require(unit(c.retrieval), "retrieval", "must lie in [0, 1]");
    require(c.eta_prime > 0.0 && c.eta_prime <= 1.0, "eta-prime", "must lie in (0, 1]");
    require(c.t_min > 0.0, "t-min", "must be > 0");
    require(c.t_max > c.t_min, "t-max", "must exceed t-min");
    require(c.points >= 2, "points", "must be >= 2");
    require(c.mark_t >= 0.0, "mark-t", "must be >= 0 (0 disables)");
    require(!c.t_values.empty() && std::all_of(c.t_values.begin(), c.t_values.end(),
                                               [](double t) {
                                                   return t > 0.0;
                                               }),
            "t-values", "every T must be > 0");
    require(c.eta_min > 0.0 && c.eta_min <= 1.0, "eta-min", "must lie in (0, 1]");
    require(c.eta_max >= c.eta_min && c.eta_max <= 1.0, "eta-max", "must lie in [eta-min, 1]");
    require(c.protocol == "write" || c.protocol == "remote", "protocol", "must be write or remote");
    require(c.tolerance_sigmas > 0.0, "tolerance-sigmas", "must be > 0");
    require(!c.oracle_eta_d || unit(*c.oracle_eta_d), "oracle-eta-d", "must lie in [0, 1]");
}

std::pair<Complex, Complex> normalized_qubit(const CliConfig &c) {
    double n = std::sqrt(std::norm(c.alpha) + std::norm(c.beta));
    return {c.alpha / n, c.beta / n};
}

NoiseParams noise_of(const CliConfig &c) {
    NoiseParams n;
    n.pc = c.pc;
    n.chi = c.chi;
    n.eta_d = c.eta_d;
    n.p_dc = c.p_dc;
    n.L0 = c.L0;
    n.L_att = c.L_att;
    n.f_p = c.f_p;
    return n;
}

RunConfig run_config_of(const CliConfig &c) {
    auto [a, b] = normalized_qubit(c);
    RunConfig r;
    r.trial_count = c.trials;
    r.master_seed = c.seed;
    r.pc = c.pc;
    r.alpha = a;
    r.beta = b;
    r.noise = noise_of(c);
    r.threads = c.threads;
    r.n_max = c.n_max;
    return r;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(lo + (hi - lo) * i / (n - 1));
    }
    out.back() = hi;
    return out;
}

std::string scalar_text(const Json &v) {
    if (v.is_number_float()) {
        return num(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void flatten(const Json &j, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            flatten(*it, key, out);
        } else {
            out.emplace_back(key, scalar_text(*it));
        }
    }
}

// Header plus one row from a flat or nested JSON object.
std::string object_csv(const Json &j) {
    std::vector<std::pair<std::string, std::string>> cells;
    flatten(j, "", cells);
    std::string head, row;
    for (size_t i = 0; i < cells.size(); ++i) {
        head += (i ? "," : "") + cells[i].first;
        row += (i ? "," : "") + cells[i].second;
    }
    return head + "\n" + row + "\n";
}

// Header from the first object's keys, one row per object.
std::string table_csv(const Json &rows, const std::vector<std::string> &columns) {
    std::string out;
    for (size_t i = 0; i < columns.size(); ++i) {
        out += (i ? "," : "") + columns[i];
    }
    out += "\n";
    for (const auto &r : rows) {
        for (size_t i = 0; i < columns.size(); ++i) {
            out += (i ? "," : "") + scalar_text(r.at(columns[i]));
        }
        out += "\n";
    }
    return out;
}

struct Artifact {
    std::string body;
    std::string summary;
    bool failed = false;
};

Json report_json(const FidelityReport &r) {
    Json j;
    j["p0"] = r.p0;
    j["p1"] = r.p1;
    j["po"] = r.po;
    j["eta_prime"] = r.eta_prime;
    j["T_seconds"] = r.T_seconds;
    j["F"] = r.F;
    j["delta_F"] = r.delta_F;
    j["herald_probability"] = r.herald_probability;
    j["memory_F"] = r.memory_F;
    j["analytic"] = {{"p0", r.analytic.p0},
                     {"p1", r.analytic.p1},
                     {"po", r.analytic.po},
                     {"T_seconds", r.analytic.T_seconds},
                     {"delta_F", r.analytic.delta_F}};
    return j;
}

Artifact do_entangle(const CliConfig &c, Format f) {
    auto [a, b] = normalized_qubit(c);
    auto r = end_to_end_fidelity(c.pc, noise_of(c), a, b);
    auto j = report_json(r);
    std::ostringstream s;
    s << "entangle: F=" << num(r.F) << " delta_F=" << num(r.delta_F) << " T=" << num(r.T_seconds) << " s";
    return {f == Format::Json ? j.dump(2) + "\n" : object_csv(j), s.str()};
}

std::string stats_summary(const std::string &name, const RunStats &st) {
    std::ostringstream s;
    s << name << ": success_rate=" << num(st.success_rate) << " F=" << num(st.mean_conditional_fidelity)
      << " T=" << num(st.empirical_T_seconds) << " s";
    return s.str();
}

Artifact stats_artifact(const std::string &name, const CliConfig &c, Format f, const RunResult &res) {
    if (!c.trials_csv.empty()) {
        std::ofstream out(c.trials_csv, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + c.trials_csv);
        }
        write_trials_csv(out, res);
    }
    std::string json = res.stats.to_json();
    return {f == Format::Json ? json : object_csv(Json::parse(json)), stats_summary(name, res.stats)};
}

Artifact do_teleport(const CliConfig &c, Format f) {
    return stats_artifact("teleport", c, f, run_write_trials_detailed(run_config_of(c)));
}

Artifact do_remote(const CliConfig &c, Format f) {
    auto [a, b] = normalized_qubit(c);
    auto exact = remote_transfer(a, b, RemoteLayout::build(std::max(3, c.truncation)));
    auto art = stats_artifact("remote-transfer", c, f, run_remote_trials_detailed(run_config_of(c)));
    art.summary += " exact_success=" + num(exact.success_probability);
    return art;
}

// Single-excitation write followed by read-out for every Bell outcome.
Artifact do_read(const CliConfig &c, Format f) {
    auto [a, b] = normalized_qubit(c);
    auto layout = MemoryLayout::build(c.truncation);
    auto heralded = generate_entanglement(c.pc, layout, 1);
    auto measured = bsm(encode_spatial(heralded.state, a, b, layout), layout);
    auto target = readout_target(a, b, c.truncation);

    Json rows = Json::array();
    double mean_f = 0;
    double total = 0;
    for (const auto &br : detector_branches(measured.state, layout)) {
        TrialRecord rec;
        rec.clicks = clicks_of(br.photons);
        rec.outcome = classify(rec.clicks);
        rec.success = rec.outcome.kind != BellKind::Failure;
        if (!rec.success) {
            continue;
        }
        rec.mark = pauli_mark(rec.outcome);
        rec.atomic_state = br.atomic;
        double fid = fidelity_mixed(read_memory(rec, c.retrieval), target);
        rows.push_back({{"outcome", dfsmem::to_string(rec.outcome.kind)},
                        {"clicks", dfsmem::to_string(rec.clicks)},
                        {"mark", dfsmem::to_string(rec.mark)},
                        {"probability", br.probability},
                        {"fidelity", fid}});
        mean_f += br.probability * fid;
        total += br.probability;
    }
    mean_f = total > 0 ? mean_f / total : 0.0;
    std::string body;
    if (f == Format::Json) {
        Json j;
        j["outcomes"] = rows;
        j["mean_fidelity"] = mean_f;
        body = j.dump(2) + "\n";
    } else {
        body = table_csv(rows, {"outcome", "clicks", "mark", "probability", "fidelity"});
    }
    return {body, "read: mean_fidelity=" + num(mean_f) + " retrieval=" + num(c.retrieval)};
}

Artifact do_bsm_stats(const CliConfig &c, Format f) {
    auto [a, b] = normalized_qubit(c);
    auto layout = MemoryLayout::build(c.truncation);
    auto heralded = generate_entanglement(c.pc, layout, 1);
    auto measured = bsm(encode_spatial(heralded.state, a, b, layout), layout);
    Json rows = Json::array();
    std::string summary = "bsm-stats:";
    for (const auto &[pattern, p] : measured.detector_probabilities) {
        PhotonPattern photons{pattern[0], pattern[1], pattern[2], pattern[3]};
        auto clicks = clicks_of(photons);
        auto kind = dfsmem::to_string(classify(clicks).kind);
        std::string pat = std::to_string(pattern[0]) + std::to_string(pattern[1]) + std::to_string(pattern[2]) +
                          std::to_string(pattern[3]);
        rows.push_back({{"pattern", pat}, {"outcome", kind}, {"probability", p}});
        summary += " " + kind + "=" + num(p);
    }
    std::string body = f == Format::Json ? Json{{"patterns", rows}}.dump(2) + "\n"
                                         : table_csv(rows, {"pattern", "outcome", "probability"});
    return {body, summary};
}

Artifact do_fig4a(const CliConfig &c, Format f) {
    auto grid = linspace(c.t_min, c.t_max, c.points);
    if (c.mark_t > 0 && std::find(grid.begin(), grid.end(), c.mark_t) == grid.end()) {
        grid.insert(std::upper_bound(grid.begin(), grid.end(), c.mark_t), c.mark_t);
    }
    auto curve = fidelity_vs_T(c.eta_prime, c.f_p, grid);
    Json rows = Json::array();
    for (const auto &[t, fid] : curve) {
        rows.push_back({{"T_seconds", t}, {"F", fid}});
    }
    std::string summary = "curves-fig4a: " + std::to_string(curve.size()) + " rows";
    if (c.mark_t > 0) {
        std::array<double, 1> mark{c.mark_t};
        summary += " F(" + num(c.mark_t) + ")=" + num(fidelity_vs_T(c.eta_prime, c.f_p, mark)[0].second);
    }
    return {f == Format::Json ? rows.dump(2) + "\n" : table_csv(rows, {"T_seconds", "F"}), summary};
}

Artifact do_fig4b(const CliConfig &c, Format f) {
    auto etas = linspace(c.eta_min, c.eta_max, c.points);
    Json rows = Json::array();
    for (double t : c.t_values) {
        for (const auto &[eta, df] : dF_vs_eta(t, c.f_p, etas)) {
            rows.push_back({{"eta_prime", eta}, {"delta_F", df}, {"T_seconds", t}});
        }
    }
    std::string summary = "curves-fig4b: " + std::to_string(rows.size()) + " rows over " +
                          std::to_string(c.t_values.size()) + " preparation times";
    return {f == Format::Json ? rows.dump(2) + "\n" : table_csv(rows, {"eta_prime", "delta_F", "T_seconds"}),
            summary};
}

Artifact do_oracle(const CliConfig &c, Format f) {
    std::optional<NoiseParams> analytic;
    if (c.oracle_eta_d) {
        analytic = noise_of(c);
        analytic->eta_d = *c.oracle_eta_d;
    }
    auto protocol = c.protocol == "remote" ? TrialProtocol::Remote : TrialProtocol::Write;
    auto rep = oracle_check(run_config_of(c), c.tolerance_sigmas, protocol, analytic);
    std::string body;
    if (f == Format::Json) {
        body = rep.to_json();
    } else {
        Json rows = Json::array();
        for (const auto &e : rep.entries) {
            rows.push_back({{"name", e.name},
                            {"empirical", e.empirical},
                            {"standard_error", e.standard_error},
                            {"exact", e.exact},
                            {"deviation_sigmas", e.deviation_sigmas},
                            {"flagged", e.flagged}});
        }
        body = table_csv(rows, {"name", "empirical", "standard_error", "exact", "deviation_sigmas", "flagged"});
    }
    size_t flagged = std::count_if(rep.entries.begin(), rep.entries.end(), [](const OracleEntry &e) {
        return e.flagged;
    });
    std::string status = rep.insufficient_data ? "insufficient data" : (rep.passed() ? "pass" : "flagged");
    return {body,
            "oracle-check: " + status + " (" + std::to_string(flagged) + " of " +
                std::to_string(rep.entries.size()) + " flagged at " + num(c.tolerance_sigmas) + " sigma)",
            !rep.passed()};
}

}  // namespace

std::string to_string(Command c) {
    for (const auto &[cmd, name] : command_names()) {
        if (cmd == c) {
            return name;
        }
    }
    return "?";
}

std::string to_string(Format f) {
    return f == Format::Csv ? "csv" : "json";
}

Format CliConfig::effective_format() const {
    if (format) {
        return *format;
    }
    return command == Command::CurvesFig4a || command == Command::CurvesFig4b ? Format::Csv : Format::Json;
}

std::string CliConfig::effective_output() const {
    if (!output.empty()) {
        return output;
    }
    return "dfs_sim_" + to_string(command) + "." + to_string(effective_format());
}

ConfigError::ConfigError(std::string field, const std::string &message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {
}

Complex parse_complex(const std::string &text) {
    auto at = text.find('@');
    if (at != std::string::npos) {
        double amp = parse_double("complex", trim(text.substr(0, at)));
        double deg = parse_double("complex", trim(text.substr(at + 1)));
        return std::polar(amp, deg * std::numbers::pi / 180.0);
    }
    auto comma = text.find(',');
    if (comma == std::string::npos) {
        return {parse_double("complex", trim(text)), 0.0};
    }
    return {parse_double("complex", trim(text.substr(0, comma))),
            parse_double("complex", trim(text.substr(comma + 1)))};
}

std::string format_complex(Complex z) {
    return num(z.real()) + "," + num(z.imag());
}

CliConfig parse_config(const std::vector<std::string> &args) {
    std::vector<std::string> all;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            auto file = load_config_file(args[i + 1]);
            all.insert(all.end(), file.begin(), file.end());
        } else if (args[i].rfind("--config=", 0) == 0) {
            auto file = load_config_file(args[i].substr(9));
            all.insert(all.end(), file.begin(), file.end());
        }
    }
    all.insert(all.end(), args.begin(), args.end());

    CliConfig c;
    CLI::App app{"Decoherence-free quantum memory simulator", "dfs_sim"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string command, alpha, beta, t_values, format, config_path, oracle_eta_d, seed;
    std::vector<std::string> command_choices;
    for (const auto &[cmd, name] : command_names()) {
        command_choices.push_back(name);
    }
    app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(command_choices));
    app.add_option("--config", config_path, "Flat key=value file loaded before the flags");
    app.add_option("--pc", c.pc, "Excitation probability per pump pulse");
    app.add_option("--alpha", alpha, "Amplitude of |0>: re,im or amp@deg");
    app.add_option("--beta", beta, "Amplitude of |1>: re,im or amp@deg");
    app.add_option("--chi", c.chi, "Collection efficiency");
    app.add_option("--eta-d", c.eta_d, "Detector quantum efficiency");
    app.add_option("--p-dc", c.p_dc, "Dark-click probability per pulse window");
    app.add_option("--L0", c.L0, "Communication distance");
    app.add_option("--L-att", c.L_att, "Channel attenuation length");
    app.add_option("--f-p", c.f_p, "Raman pulse repetition rate in Hz");
    app.add_option("--trials", c.trials, "Monte Carlo trial count");
    app.add_option("--seed", seed, "Master seed (default: DFS_SIM_SEED or 0)");
    app.add_option("--threads", c.threads, "Worker threads for trials");
    app.add_option("--truncation", c.truncation, "Fock truncation d for exact commands");
    app.add_option("--n-max", c.n_max, "Highest source excitation order in trials");
    app.add_option("--retrieval", c.retrieval, "Read-out retrieval efficiency");
    app.add_option("--eta-prime", c.eta_prime, "Overall efficiency for curves-fig4a");
    app.add_option("--t-min", c.t_min, "Smallest preparation time in seconds");
    app.add_option("--t-max", c.t_max, "Largest preparation time in seconds");
    app.add_option("--points", c.points, "Grid points per curve");
    app.add_option("--mark-t", c.mark_t, "Extra preparation time row for curves-fig4a (0 disables)");
    app.add_option("--t-values", t_values, "Comma list of preparation times for curves-fig4b");
    app.add_option("--eta-min", c.eta_min, "Smallest eta' for curves-fig4b");
    app.add_option("--eta-max", c.eta_max, "Largest eta' for curves-fig4b");
    app.add_option("--protocol", c.protocol, "oracle-check protocol: write or remote");
    app.add_option("--tolerance-sigmas", c.tolerance_sigmas, "oracle-check tolerance in standard errors");
    app.add_option("--oracle-eta-d", oracle_eta_d, "Replace eta_d on the exact side of oracle-check");
    app.add_option("--output,-o", c.output, "Output file");
    app.add_option("--format", format, "csv or json");
    app.add_option("--trials-csv", c.trials_csv, "Also stream per-trial records to this CSV file");

    std::vector<std::string> reversed(all.rbegin(), all.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success &) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError &e) {
        std::string msg = e.what();
        std::string field = "arguments";
        auto dash = msg.find("--");
        if (dash != std::string::npos) {
            auto end = msg.find_first_of(" :'\"", dash);
            field = msg.substr(dash + 2, end == std::string::npos ? std::string::npos : end - dash - 2);
        }
        throw ConfigError(field, msg);
    }

    for (const auto &[cmd, name] : command_names()) {
        if (name == command) {
            c.command = cmd;
        }
    }
    if (!alpha.empty()) {
        try {
            c.alpha = parse_complex(alpha);
        } catch (const ConfigError &e) {
            throw ConfigError("alpha", e.what());
        }
    }
    if (!beta.empty()) {
        try {
            c.beta = parse_complex(beta);
        } catch (const ConfigError &e) {
            throw ConfigError("beta", e.what());
        }
    }
    if (!t_values.empty()) {
        c.t_values = parse_list("t-values", t_values);
    }
    if (!oracle_eta_d.empty()) {
        c.oracle_eta_d = parse_double("oracle-eta-d", oracle_eta_d);
    }
    if (!format.empty()) {
        if (format == "csv") {
            c.format = Format::Csv;
        } else if (format == "json") {
            c.format = Format::Json;
        } else {
            throw ConfigError("format", "must be csv or json");
        }
    }
    if (seed.empty()) {
        if (const char *env = std::getenv("DFS_SIM_SEED")) {
            seed = env;
        }
    }
    if (!seed.empty()) {
        try {
            size_t used = 0;
            c.seed = std::stoull(seed, &used, 0);
            if (used != seed.size() || seed[0] == '-') {
                throw std::invalid_argument("trailing");
            }
        } catch (const std::exception &) {
            throw ConfigError("seed", "cannot parse unsigned 64-bit seed '" + seed + "'");
        }
    }
    validate(c);
    return c;
}

std::vector<std::string> render(const CliConfig &c) {
    std::vector<std::string> a{to_string(c.command)};
    auto put = [&](const char *flag, const std::string &value) {
        a.push_back(flag);
        a.push_back(value);
    };
    put("--pc", num(c.pc));
    put("--alpha", format_complex(c.alpha));
    put("--beta", format_complex(c.beta));
    put("--chi", num(c.chi));
    put("--eta-d", num(c.eta_d));
    put("--p-dc", num(c.p_dc));
    put("--L0", num(c.L0));
    put("--L-att", num(c.L_att));
    put("--f-p", num(c.f_p));
    put("--trials", std::to_string(c.trials));
    put("--seed", std::to_string(c.seed));
    put("--threads", std::to_string(c.threads));
    put("--truncation", std::to_string(c.truncation));
    put("--n-max", std::to_string(c.n_max));
    put("--retrieval", num(c.retrieval));
    put("--eta-prime", num(c.eta_prime));
    put("--t-min", num(c.t_min));
    put("--t-max", num(c.t_max));
    put("--points", std::to_string(c.points));
    put("--mark-t", num(c.mark_t));
    put("--t-values", format_list(c.t_values));
    put("--eta-min", num(c.eta_min));
    put("--eta-max", num(c.eta_max));
    put("--protocol", c.protocol);
    put("--tolerance-sigmas", num(c.tolerance_sigmas));
    if (c.oracle_eta_d) {
        put("--oracle-eta-d", num(*c.oracle_eta_d));
    }
    if (!c.output.empty()) {
        put("--output", c.output);
    }
    if (c.format) {
        put("--format", to_string(*c.format));
    }
    if (!c.trials_csv.empty()) {
        put("--trials-csv", c.trials_csv);
    }
    return a;
}

int run(const CliConfig &cfg, std::ostream &out, std::ostream &err) {
    try {
        validate(cfg);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    Artifact art;
    Format f = cfg.effective_format();
    try {
        switch (cfg.command) {
            case Command::Entangle:
                art = do_entangle(cfg, f);
                break;
            case Command::Teleport:
                art = do_teleport(cfg, f);
                break;
            case Command::Read:
                art = do_read(cfg, f);
                break;
            case Command::RemoteTransfer:
                art = do_remote(cfg, f);
                break;
            case Command::CurvesFig4a:
                art = do_fig4a(cfg, f);
                break;
            case Command::CurvesFig4b:
                art = do_fig4b(cfg, f);
                break;
            case Command::BsmStats:
                art = do_bsm_stats(cfg, f);
                break;
            case Command::OracleCheck:
                art = do_oracle(cfg, f);
                break;
        }
    } catch (const std::exception &e) {
        err << "simulation failure: " << e.what() << "\n";
        return 1;
    }

    auto path = cfg.effective_output();
    std::ofstream file(path, std::ios::binary);
    file << art.body;
    file.close();
    if (!file) {
        err << "simulation failure: cannot write " << path << "\n";
        return 1;
    }
    out << art.summary << " -> " << path << "\n";
    return art.failed ? 1 : 0;
}

int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CliConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const HelpRequested &h) {
        out << h.what();
        return 0;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    return run(cfg, out, err);
}

}  // namespace dfsmem::cli
