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

#include "dfsmem/trials.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace dfsmem {

namespace {

constexpr std::array<const char *, 4> kWriteNames{"PsiPlus", "PsiMinus", "PhiPlus", "PhiMinus"};
constexpr std::array<const char *, 4> kRemoteNames{"D1D3", "D1D4", "D2D3", "D2D4"};
constexpr double kExactSlack = 1e-9;

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// The sampled experiment: photon-count branches of one attempt, the mark-
// corrected fidelity of every branch under every accepted outcome, and the
// rule mapping a click pattern to an outcome index.
struct Experiment {
    TrialProtocol protocol;
    std::vector<std::string> names;
    PatternSampler sampler;
    std::vector<std::array<double, 4>> fidelity;
    DetectorBank bank;
    std::int64_t round_cap;
    double f_p;

    int outcome_of(const ClickPattern &c) const {
        if (protocol == TrialProtocol::Write) {
            auto o = classify(c);
            return o.kind == BellKind::Failure ? -1 : static_cast<int>(o.kind);
        }
        if (!remote_success(c)) {
            return -1;
        }
        return (c[0] ? 0 : 2) + (c[2] ? 0 : 1);
    }

    ClickPattern outcome_clicks(int k) const {
        ClickPattern c{};
        if (protocol == TrialProtocol::Write) {
            c[k] = true;
        } else {
            c[k < 2 ? 0 : 1] = true;
            c[k % 2 == 0 ? 2 : 3] = true;
        }
        return c;
    }

    PauliMark mark_of(int k) const {
        auto c = outcome_clicks(k);
        return protocol == TrialProtocol::Write ? pauli_mark(classify(c)) : remote_phase_mark(c);
    }
};

PatternSampler sampler_of(const std::vector<PhotonBranch> &branches) {
    std::vector<PhotonPattern> patterns;
    std::vector<double> probs;
    for (const auto &b : branches) {
        patterns.push_back(b.photons);
        probs.push_back(b.probability);
    }
    return PatternSampler(std::move(patterns), std::move(probs));
}

Experiment make_experiment(const RunConfig &cfg, TrialProtocol protocol) {
    cfg.validate();
    NoiseParams noise = cfg.noise;
    noise.pc = cfg.pc;

    std::vector<PhotonBranch> branches;
    std::function<PureState()> target;
    LogicalQubitMap map;
    if (protocol == TrialProtocol::Write) {
        auto layout = MemoryLayout::build(std::max(3, 2 * cfg.n_max + 1));
        auto encoded = encode_spatial(pre_herald_state(cfg.pc, cfg.n_max, layout), cfg.alpha, cfg.beta, layout);
        branches = detector_branches(bsm(encoded, layout).state, layout);
        map = layout.logical_map();
        target = [=] {
            return logical_state(layout.logical_map(), layout.atomic_registry, cfg.alpha, cfg.beta);
        };
    } else {
        auto layout = RemoteLayout::build(3);
        branches = remote_transfer(cfg.alpha, cfg.beta, layout).photon_branches;
        map = layout.r_map();
        target = [=] {
            return logical_state(layout.r_map(), layout.r_registry, cfg.alpha, cfg.beta);
        };
    }

    Experiment e{
        .protocol = protocol,
        .names = {},
        .sampler = sampler_of(branches),
        .fidelity = {},
        .bank = detectors_for(noise),
        .round_cap = protocol == TrialProtocol::Write ? cfg.round_cap : 1,
        .f_p = noise.f_p,
    };
    const auto &names = protocol == TrialProtocol::Write ? kWriteNames : kRemoteNames;
    e.names.assign(names.begin(), names.end());

    auto t = target();
    for (const auto &b : branches) {
        std::array<double, 4> row{};
        for (int k = 0; k < 4; ++k) {
            row[k] = fidelity_mixed(apply_logical_pauli(*b.atomic, e.mark_of(k), map), t);
        }
        e.fidelity.push_back(row);
    }
    return e;
}

TrialOutcome run_one(const Experiment &e, std::uint64_t seed) {
    Rng rng(seed);
    TrialOutcome out;
    while (out.rounds < e.round_cap) {
        ++out.rounds;
        size_t b = e.sampler.sample(rng);
        int k = e.outcome_of(detect(e.sampler.patterns()[b], e.bank, rng));
        if (k >= 0) {
            out.outcome = k;
            out.fidelity = e.fidelity[b][k];
            break;
        }
    }
    return out;
}

std::vector<TrialOutcome> run_all(const Experiment &e, const RunConfig &cfg) {
    const auto n = static_cast<size_t>(cfg.trial_count);
    std::vector<TrialOutcome> trials(n);
    auto work = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            trials[i] = run_one(e, trial_seed(cfg.master_seed, i));
        }
    };
    size_t workers = std::min<size_t>(std::max(cfg.threads, 1), n);
    if (workers <= 1) {
        work(0, n);
        return trials;
    }
    std::vector<std::thread> pool;
    size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        size_t begin = w * chunk;
        size_t end = std::min(n, begin + chunk);
        if (begin < end) {
            pool.emplace_back(work, begin, end);
        }
    }
    for (auto &t : pool) {
        t.join();
    }
    return trials;
}

struct Moments {
    double n = 0;
    double sum = 0;
    double sum_sq = 0;

    void add(double x) {
        n += 1;
        sum += x;
        sum_sq += x * x;
    }
    double mean() const {
        return n > 0 ? sum / n : 0.0;
    }
    // Sample standard deviation over sqrt(n).
    double se() const {
        if (n < 2) {
            return 0.0;
        }
        double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1));
        return std::sqrt(var / n);
    }
};

RunStats aggregate(const Experiment &e, const RunConfig &cfg, const std::vector<TrialOutcome> &trials) {
    RunStats s;
    s.protocol = e.protocol == TrialProtocol::Write ? "write" : "remote";
    s.master_seed = cfg.master_seed;
    s.trial_count = static_cast<std::int64_t>(trials.size());

    Moments success, rounds, fidelity;
    std::vector<Moments> freq(e.names.size());
    for (const auto &t : trials) {
        bool ok = t.outcome >= 0;
        success.add(ok ? 1.0 : 0.0);
        if (!ok) {
            if (e.protocol == TrialProtocol::Write) {
                ++s.censored;
            }
            continue;
        }
        ++s.successes;
        rounds.add(static_cast<double>(t.rounds));
        fidelity.add(t.fidelity);
        for (size_t k = 0; k < freq.size(); ++k) {
            freq[k].add(t.outcome == static_cast<int>(k) ? 1.0 : 0.0);
        }
    }
    s.success_rate = success.mean();
    s.success_rate_se = success.se();
    s.mean_rounds = rounds.mean();
    s.mean_rounds_se = rounds.se();
    s.empirical_T_seconds = s.mean_rounds / e.f_p;
    s.empirical_T_seconds_se = s.mean_rounds_se / e.f_p;
    for (size_t k = 0; k < freq.size(); ++k) {
        s.outcome_frequencies[e.names[k]] = freq[k].mean();
        s.outcome_frequencies_se[e.names[k]] = freq[k].se();
    }
    s.mean_conditional_fidelity = fidelity.mean();
    s.mean_conditional_fidelity_se = fidelity.se();
    return s;
}

RunResult run_detailed(const RunConfig &cfg, TrialProtocol protocol) {
    auto e = make_experiment(cfg, protocol);
    RunResult r;
    r.trials = run_all(e, cfg);
    r.stats = aggregate(e, cfg, r.trials);
    r.outcome_names = e.names;
    return r;
}

std::vector<PhotonPattern> patterns_of(const PatternProbabilities &probs) {
    std::vector<PhotonPattern> out;
    for (const auto &[occ, p] : probs) {
        if (occ.size() != 4) {
            throw std::invalid_argument("PatternSampler: patterns must cover four detectors");
        }
        out.push_back({occ[0], occ[1], occ[2], occ[3]});
    }
    return out;
}

std::vector<double> probabilities_of(const PatternProbabilities &probs) {
    std::vector<double> out;
    for (const auto &[occ, p] : probs) {
        out.push_back(p);
    }
    return out;
}

nlohmann::ordered_json stats_json(const RunStats &s) {
    nlohmann::ordered_json j;
    j["protocol"] = s.protocol;
    j["master_seed"] = s.master_seed;
    j["trial_count"] = s.trial_count;
    j["successes"] = s.successes;
    j["censored"] = s.censored;
    j["success_rate"] = s.success_rate;
    j["success_rate_se"] = s.success_rate_se;
    j["mean_rounds"] = s.mean_rounds;
    j["mean_rounds_se"] = s.mean_rounds_se;
    j["empirical_T_seconds"] = s.empirical_T_seconds;
    j["empirical_T_seconds_se"] = s.empirical_T_seconds_se;
    j["outcome_frequencies"] = s.outcome_frequencies;
    j["outcome_frequencies_se"] = s.outcome_frequencies_se;
    j["mean_conditional_fidelity"] = s.mean_conditional_fidelity;
    j["mean_conditional_fidelity_se"] = s.mean_conditional_fidelity_se;
    return j;
}

}  // namespace

double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

DetectorBank detectors_for(const NoiseParams &noise) {
    DetectorSpec spec{noise.eta_prime(), noise.p_dc};
    return {spec, spec, spec, spec};
}

PatternSampler::PatternSampler(const PatternProbabilities &probs)
    : PatternSampler(patterns_of(probs), probabilities_of(probs)) {
}

PatternSampler::PatternSampler(std::vector<PhotonPattern> patterns, std::vector<double> probabilities)
    : patterns_(std::move(patterns)), probabilities_(std::move(probabilities)) {
    if (patterns_.size() != probabilities_.size() || patterns_.empty()) {
        throw std::invalid_argument("PatternSampler: need one probability per pattern");
    }
    double acc = 0;
    for (double p : probabilities_) {
        if (p < 0) {
            throw std::invalid_argument("PatternSampler: negative probability");
        }
        acc += p;
        cdf_.push_back(acc);
    }
    if (std::abs(acc - 1.0) > 1e-9) {
        throw std::invalid_argument("PatternSampler: probabilities sum to " + std::to_string(acc) + ", not 1");
    }
}

size_t PatternSampler::sample(Rng &rng) const {
    double u = uniform01(rng) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

ClickPattern detect(const PhotonPattern &photons, const DetectorBank &bank, Rng &rng) {
    ClickPattern clicks{};
    for (size_t i = 0; i < 4; ++i) {
        bool click = false;
        for (int n = 0; n < photons[i]; ++n) {
            // Keep drawing even after a hit so the stream does not depend on order.
            click = (uniform01(rng) < bank[i].survival) || click;
        }
        if (bank[i].dark_prob > 0) {
            click = (uniform01(rng) < bank[i].dark_prob) || click;
        }
        clicks[i] = click;
    }
    return clicks;
}

ClickPattern sample_detectors(const PatternProbabilities &probs, const DetectorBank &bank, Rng &rng) {
    PatternSampler sampler(probs);
    return detect(sampler.patterns()[sampler.sample(rng)], bank, rng);
}

double click_probability(const PhotonPattern &photons, const ClickPattern &clicks, const DetectorBank &bank) {
    double p = 1.0;
    for (size_t i = 0; i < 4; ++i) {
        double silent = std::pow(1.0 - bank[i].survival, photons[i]) * (1.0 - bank[i].dark_prob);
        p *= clicks[i] ? 1.0 - silent : silent;
    }
    return p;
}

void RunConfig::validate() const {
    if (trial_count < 1) {
        throw std::invalid_argument("trial_count must be >= 1");
    }
    if (round_cap < 1) {
        throw std::invalid_argument("round_cap must be >= 1");
    }
    if (threads < 1) {
        throw std::invalid_argument("threads must be >= 1");
    }
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be >= 1");
    }
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9) {
        throw std::invalid_argument("|alpha|^2 + |beta|^2 must be 1");
    }
    NoiseParams n = noise;
    n.pc = pc;
    n.validate();
}

std::string RunStats::to_json() const {
    return stats_json(*this).dump(2) + "\n";
}

RunResult run_write_trials_detailed(const RunConfig &cfg) {
    return run_detailed(cfg, TrialProtocol::Write);
}

RunStats run_write_trials(const RunConfig &cfg) {
    return run_write_trials_detailed(cfg).stats;
}

RunResult run_remote_trials_detailed(const RunConfig &cfg) {
    return run_detailed(cfg, TrialProtocol::Remote);
}

RunStats run_remote_trials(const RunConfig &cfg) {
    return run_remote_trials_detailed(cfg).stats;
}

void write_trials_csv(std::ostream &out, const RunResult &result) {
    out << "index,rounds,outcome,fidelity\n";
    char buf[64];
    for (size_t i = 0; i < result.trials.size(); ++i) {
        const auto &t = result.trials[i];
        std::string name = t.outcome >= 0 ? result.outcome_names[t.outcome] : "none";
        std::snprintf(buf, sizeof buf, "%.17g", t.fidelity);
        out << i << ',' << t.rounds << ',' << name << ',' << buf << '\n';
    }
}

bool OracleReport::passed() const {
    return std::none_of(entries.begin(), entries.end(), [](const OracleEntry &e) {
        return e.flagged;
    });
}

std::string OracleReport::to_json() const {
    nlohmann::ordered_json j;
    j["status"] = insufficient_data ? "insufficient data" : (passed() ? "pass" : "flagged");
    j["tolerance_sigmas"] = tolerance_sigmas;
    auto arr = nlohmann::ordered_json::array();
    for (const auto &e : entries) {
        nlohmann::ordered_json row;
        row["name"] = e.name;
        row["empirical"] = e.empirical;
        row["standard_error"] = e.standard_error;
        row["exact"] = e.exact;
        row["deviation_sigmas"] = e.deviation_sigmas;
        row["flagged"] = e.flagged;
        arr.push_back(row);
    }
    j["entries"] = arr;
    j["stats"] = stats_json(stats);
    return j.dump(2) + "\n";
}

OracleReport oracle_check(const RunConfig &cfg, double tolerance_sigmas, TrialProtocol protocol,
                          const std::optional<NoiseParams> &analytic_noise) {
    OracleReport report;
    report.tolerance_sigmas = tolerance_sigmas;
    if (cfg.trial_count < 1) {
        report.insufficient_data = true;
        return report;
    }
    auto e = make_experiment(cfg, protocol);
    report.stats = aggregate(e, cfg, run_all(e, cfg));
    const auto &s = report.stats;
    if (s.successes == 0) {
        report.insufficient_data = true;
        return report;
    }

    DetectorBank bank = e.bank;
    if (analytic_noise) {
        NoiseParams n = *analytic_noise;
        n.pc = cfg.pc;
        bank = detectors_for(n);
    }
    std::array<double, 4> p_outcome{};
    double weighted_f = 0;
    const auto &pats = e.sampler.patterns();
    const auto &probs = e.sampler.probabilities();
    for (size_t b = 0; b < pats.size(); ++b) {
        for (int k = 0; k < 4; ++k) {
            double p = probs[b] * click_probability(pats[b], e.outcome_clicks(k), bank);
            p_outcome[k] += p;
            weighted_f += p * e.fidelity[b][k];
        }
    }
    double q = p_outcome[0] + p_outcome[1] + p_outcome[2] + p_outcome[3];

    auto add = [&](std::string name, double emp, double se, double exact) {
        OracleEntry entry{std::move(name), emp, se, exact, 0.0, false};
        double diff = std::abs(emp - exact);
        entry.deviation_sigmas = se > 0 ? diff / se : 0.0;
        entry.flagged = diff > tolerance_sigmas * se + kExactSlack;
        report.entries.push_back(std::move(entry));
    };
    if (protocol == TrialProtocol::Write) {
        // Geometric round count truncated at the cap, conditioned on success.
        const double cap = static_cast<double>(cfg.round_cap);
        const double miss_all = std::exp(cap * std::log1p(-q));
        const double exact_success = -std::expm1(cap * std::log1p(-q));
        add("success_rate", s.success_rate, s.success_rate_se, exact_success);
        add("mean_rounds", s.mean_rounds, s.mean_rounds_se, 1.0 / q - cap * miss_all / exact_success);
    } else {
        add("success_rate", s.success_rate, s.success_rate_se, q);
    }
    for (int k = 0; k < 4; ++k) {
        const auto &name = e.names[k];
        add("outcome_frequencies." + name, s.outcome_frequencies.at(name), s.outcome_frequencies_se.at(name),
            p_outcome[k] / q);
    }
    add("mean_conditional_fidelity", s.mean_conditional_fidelity, s.mean_conditional_fidelity_se, weighted_f / q);
    return report;
}

}  // namespace dfsmem
