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

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"

using namespace dfsmem;

namespace {

PatternProbabilities single(const Occupation &pattern) {
    return {{pattern, 1.0}};
}

double frequency_se(double p, double n) {
    return std::sqrt(p * (1 - p) / n);
}

RunConfig ideal_write(std::int64_t trials, std::uint64_t seed) {
    RunConfig cfg;
    cfg.trial_count = trials;
    cfg.master_seed = seed;
    cfg.pc = 0.01;
    cfg.alpha = Complex(0.6, 0.0);
    cfg.beta = Complex(0.0, 0.8);
    return cfg;
}

}  // namespace

TEST(trials_rng, uniform_and_seed) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        double u = uniform01(rng);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_NE(trial_seed(0, 0), trial_seed(0, 1));
    EXPECT_NE(trial_seed(0, 0), trial_seed(1, 0));
    EXPECT_EQ(trial_seed(7, 3), trial_seed(7, 3));
}

TEST(trials_detect, no_thinning_reproduces_pattern) {
    DetectorBank bank{};
    Rng rng(2);
    std::vector<Occupation> patterns{{1, 0, 0, 0}, {0, 2, 0, 1}, {0, 0, 0, 0}, {1, 1, 1, 1}};
    for (const auto &p : patterns) {
        for (int t = 0; t < 100; ++t) {
            auto clicks = sample_detectors(single(p), bank, rng);
            for (size_t i = 0; i < 4; ++i) {
                EXPECT_EQ(clicks[i], p[i] > 0);
            }
        }
    }
}

TEST(trials_detect, survival_thins_single_photons) {
    DetectorBank bank{};
    for (auto &d : bank) {
        d.survival = 1.0 / 3.0;
    }
    Rng rng(3);
    const int n = 100000;
    int hits = 0;
    for (int t = 0; t < n; ++t) {
        hits += sample_detectors(single({0, 0, 1, 0}), bank, rng)[2];
    }
    double p = 1.0 / 3.0;
    EXPECT_NEAR(hits / double(n), p, 3 * frequency_se(p, n));
}

TEST(trials_detect, dark_clicks) {
    DetectorBank bank{};
    for (auto &d : bank) {
        d.dark_prob = 1e-5;
    }
    Rng rng(4);
    const int n = 10000000;
    std::array<int, 4> hits{};
    for (int t = 0; t < n; ++t) {
        auto c = sample_detectors(single({0, 0, 0, 0}), bank, rng);
        for (size_t i = 0; i < 4; ++i) {
            hits[i] += c[i];
        }
    }
    for (size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(hits[i] / double(n), 1e-5, 3 * frequency_se(1e-5, n)) << i;
    }
}

TEST(trials_detect, thinning_matches_click_probability) {
    DetectorBank bank{};
    bank[0] = {0.4, 0.0};
    bank[1] = {0.7, 0.01};
    bank[2] = {1.0, 0.2};
    bank[3] = {0.0, 0.0};
    PhotonPattern photons{2, 1, 0, 3};
    Rng rng(5);
    const int n = 100000;
    std::array<int, 4> hits{};
    for (int t = 0; t < n; ++t) {
        auto c = detect(photons, bank, rng);
        for (size_t i = 0; i < 4; ++i) {
            hits[i] += c[i];
        }
    }
    for (size_t i = 0; i < 4; ++i) {
        ClickPattern only{};
        only[i] = true;
        // Marginal: photons survive independently, dark clicks OR in.
        double silent = std::pow(1 - bank[i].survival, photons[i]) * (1 - bank[i].dark_prob);
        double p = 1 - silent;
        EXPECT_NEAR(hits[i] / double(n), p, 3 * frequency_se(p, n) + 1e-12) << i;
    }
    ClickPattern c{true, true, false, false};
    double expect = (1 - 0.36) * (1 - 0.3 * 0.99) * 0.8 * 1.0;
    EXPECT_NEAR(click_probability(photons, c, bank), expect, 1e-15);
}

TEST(trials_detect, sampler_rejects_bad_sum) {
    PatternProbabilities probs{{{1, 0, 0, 0}, 0.5}, {{0, 1, 0, 0}, 0.4}};
    EXPECT_THROW(PatternSampler{probs}, std::invalid_argument);
    PatternProbabilities wide{{{1, 0, 0}, 1.0}};
    EXPECT_THROW(PatternSampler{wide}, std::invalid_argument);
    DetectorBank bank{};
    Rng rng(6);
    EXPECT_THROW(sample_detectors(probs, bank, rng), std::invalid_argument);
}

TEST(trials_detect, sampler_follows_born_weights) {
    PatternProbabilities probs{{{1, 0, 0, 0}, 0.2}, {{0, 1, 0, 0}, 0.5}, {{0, 0, 1, 0}, 0.3}};
    PatternSampler s(probs);
    Rng rng(7);
    const int n = 100000;
    std::vector<int> counts(s.patterns().size());
    for (int t = 0; t < n; ++t) {
        ++counts[s.sample(rng)];
    }
    for (size_t i = 0; i < counts.size(); ++i) {
        double p = s.probabilities()[i];
        EXPECT_NEAR(counts[i] / double(n), p, 3 * frequency_se(p, n));
    }
}

TEST(trials_write, outcome_frequencies_and_time) {
    auto stats = run_write_trials(ideal_write(100000, 42));
    EXPECT_EQ(stats.successes, 100000);
    EXPECT_EQ(stats.censored, 0);
    double total = 0;
    for (const auto &[name, f] : stats.outcome_frequencies) {
        EXPECT_NEAR(f, 0.25, 3 * stats.outcome_frequencies_se.at(name)) << name;
        total += f;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    NoiseParams n;
    n.pc = 0.01;
    double analytic_T = preparation_time(p1_analytic(n), n.f_p);
    EXPECT_NEAR(stats.empirical_T_seconds / analytic_T, 1.0, 0.02);
    EXPECT_NEAR(stats.empirical_T_seconds, stats.mean_rounds / n.f_p, 1e-18);
    EXPECT_GT(stats.mean_conditional_fidelity, 0.98);
}

TEST(trials_write, deterministic_and_thread_independent) {
    auto cfg = ideal_write(20000, 9);
    auto a = run_write_trials_detailed(cfg);
    auto b = run_write_trials_detailed(cfg);
    cfg.threads = 8;
    auto c = run_write_trials_detailed(cfg);
    EXPECT_EQ(a.stats, b.stats);
    EXPECT_EQ(a.stats, c.stats);
    EXPECT_EQ(a.stats.to_json(), c.stats.to_json());
    std::ostringstream sa, sc;
    write_trials_csv(sa, a);
    write_trials_csv(sc, c);
    EXPECT_EQ(sa.str(), sc.str());
    cfg.master_seed = 10;
    EXPECT_NE(run_write_trials(cfg).mean_rounds, a.stats.mean_rounds);
}

TEST(trials_write, censoring_is_reported) {
    auto cfg = ideal_write(20000, 11);
    cfg.round_cap = 1;
    auto stats = run_write_trials(cfg);
    EXPECT_GT(stats.censored, 0);
    EXPECT_EQ(stats.successes + stats.censored, stats.trial_count);
    auto report = oracle_check(cfg, 3.0);
    EXPECT_TRUE(report.passed()) << report.to_json();
}

TEST(trials_write, rejects_bad_config) {
    auto cfg = ideal_write(0, 1);
    EXPECT_THROW(run_write_trials(cfg), std::invalid_argument);
    cfg = ideal_write(10, 1);
    cfg.beta = 1.0;
    EXPECT_THROW(run_write_trials(cfg), std::invalid_argument);
}

TEST(trials_remote, ideal) {
    RunConfig cfg;
    cfg.trial_count = 100000;
    cfg.master_seed = 3;
    cfg.alpha = Complex(0.6, 0.0);
    cfg.beta = Complex(0.0, 0.8);
    auto s = run_remote_trials(cfg);
    EXPECT_NEAR(s.success_rate, 0.5, 3 * frequency_se(0.5, 100000));
    EXPECT_NEAR(s.mean_conditional_fidelity, 1.0, 1e-10);
    EXPECT_DOUBLE_EQ(s.mean_rounds, 1.0);
}

TEST(trials_remote, survival_squares) {
    RunConfig cfg;
    cfg.trial_count = 100000;
    cfg.master_seed = 4;
    cfg.noise.chi = 0.5;
    auto s = run_remote_trials(cfg);
    double p = 0.5 * 0.25;
    EXPECT_NEAR(s.success_rate, p, 3 * frequency_se(p, 100000));
    EXPECT_NEAR(s.mean_conditional_fidelity, 1.0, 1e-10);
}

TEST(trials_oracle, ideal_passes) {
    auto report = oracle_check(ideal_write(100000, 5), 3.0);
    EXPECT_FALSE(report.insufficient_data);
    EXPECT_TRUE(report.passed()) << report.to_json();
    bool saw_outcomes = false;
    for (const auto &e : report.entries) {
        if (e.name.starts_with("outcome_frequencies.")) {
            saw_outcomes = true;
            EXPECT_NEAR(e.exact, 0.25, 1e-12) << e.name;
        }
    }
    EXPECT_TRUE(saw_outcomes);
}

TEST(trials_oracle, remote_passes) {
    RunConfig cfg;
    cfg.trial_count = 100000;
    cfg.master_seed = 6;
    cfg.noise.chi = 0.5;
    auto report = oracle_check(cfg, 3.0, TrialProtocol::Remote);
    EXPECT_TRUE(report.passed()) << report.to_json();
    EXPECT_NEAR(report.entries.front().exact, 0.125, 1e-12);
}

TEST(trials_oracle, misspecified_efficiency_is_flagged) {
    auto cfg = ideal_write(100000, 7);
    NoiseParams wrong;
    wrong.eta_d = 0.8;
    auto report = oracle_check(cfg, 3.0, TrialProtocol::Write, wrong);
    EXPECT_FALSE(report.passed());
}

TEST(trials_oracle, zero_trials) {
    auto cfg = ideal_write(0, 8);
    auto report = oracle_check(cfg, 3.0);
    EXPECT_TRUE(report.insufficient_data);
    EXPECT_TRUE(report.entries.empty());
    for (const auto &e : report.entries) {
        EXPECT_FALSE(e.flagged);
    }
}

TEST(trials_stats, json_keys) {
    auto s = run_write_trials(ideal_write(100, 1));
    auto j = s.to_json();
    for (const char *key : {"success_rate", "mean_rounds", "empirical_T_seconds", "outcome_frequencies",
                            "mean_conditional_fidelity", "success_rate_se", "mean_rounds_se"}) {
        EXPECT_NE(j.find(std::string("\"") + key + "\""), std::string::npos) << key;
    }
}
