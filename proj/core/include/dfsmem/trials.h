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

#ifndef DFSMEM_TRIALS_H
#define DFSMEM_TRIALS_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dfsmem/fock.h"
#include "dfsmem/noise.h"
#include "dfsmem/protocol.h"

namespace dfsmem {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng &rng);

/// Seed of trial `index`: splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

/// Non-number-resolving detector with per-photon survival and a dark-click
/// probability per pulse window.
struct DetectorSpec {
    double survival = 1.0;
    double dark_prob = 0.0;
};

using DetectorBank = std::array<DetectorSpec, 4>;

/// Detector bank for a set of noise parameters: survival chi*eta_d*exp(-L0/L_att)
/// and dark probability p_dc on every channel.
DetectorBank detectors_for(const NoiseParams &noise);

/// Inverse-CDF sampler over a fixed list of photon patterns.
class PatternSampler {
   public:
    /// Throws if the probabilities do not sum to 1 within 1e-9.
    explicit PatternSampler(const PatternProbabilities &probs);
    PatternSampler(std::vector<PhotonPattern> patterns, std::vector<double> probabilities);

    size_t sample(Rng &rng) const;
    const std::vector<PhotonPattern> &patterns() const {
        return patterns_;
    }
    const std::vector<double> &probabilities() const {
        return probabilities_;
    }

   private:
    std::vector<PhotonPattern> patterns_;
    std::vector<double> probabilities_;
    std::vector<double> cdf_;
};

/// Bernoulli-thins each photon, ORs in independent dark clicks, and collapses
/// counts to clicks.
ClickPattern detect(const PhotonPattern &photons, const DetectorBank &bank, Rng &rng);

/// Samples a photon pattern by the Born rule and passes it through `detect`.
ClickPattern sample_detectors(const PatternProbabilities &probs, const DetectorBank &bank, Rng &rng);

/// Exact probability of `clicks` given `photons` for the same detector model.
double click_probability(const PhotonPattern &photons, const ClickPattern &clicks, const DetectorBank &bank);

struct RunConfig {
    std::int64_t trial_count = 1000;
    std::uint64_t master_seed = 0;
    double pc = 0.01;
    Complex alpha = 1.0;
    Complex beta = 0.0;
    NoiseParams noise;
    int threads = 1;
    std::int64_t round_cap = 10'000'000;
    int n_max = 2;

    void validate() const;
};

/// One trial. `outcome` indexes the outcome names of the run (-1 if the trial
/// was censored or failed).
struct TrialOutcome {
    std::int64_t rounds = 0;
    int outcome = -1;
    double fidelity = 0;
};

struct RunStats {
    std::string protocol;
    std::uint64_t master_seed = 0;
    std::int64_t trial_count = 0;
    std::int64_t successes = 0;
    std::int64_t censored = 0;
    double success_rate = 0;
    double success_rate_se = 0;
    double mean_rounds = 0;
    double mean_rounds_se = 0;
    double empirical_T_seconds = 0;
    double empirical_T_seconds_se = 0;
    /// Over successful trials, keyed by outcome name.
    std::map<std::string, double> outcome_frequencies;
    std::map<std::string, double> outcome_frequencies_se;
    double mean_conditional_fidelity = 0;
    double mean_conditional_fidelity_se = 0;

    std::string to_json() const;
    bool operator==(const RunStats &) const = default;
};

struct RunResult {
    RunStats stats;
    std::vector<TrialOutcome> trials;
    std::vector<std::string> outcome_names;
};

/// Heralded memory write. Each round samples the analyzer photon counts of one
/// Raman pump attempt, applies the detector model, and accepts exactly one click.
RunResult run_write_trials_detailed(const RunConfig &cfg);
RunStats run_write_trials(const RunConfig &cfg);

/// Single-shot two-pair remote transfer with coincidence heralding.
RunResult run_remote_trials_detailed(const RunConfig &cfg);
RunStats run_remote_trials(const RunConfig &cfg);

/// index,rounds,outcome,fidelity with one row per trial.
void write_trials_csv(std::ostream &out, const RunResult &result);

enum class TrialProtocol { Write, Remote };

struct OracleEntry {
    std::string name;
    double empirical = 0;
    double standard_error = 0;
    double exact = 0;
    double deviation_sigmas = 0;
    bool flagged = false;
};

struct OracleReport {
    bool insufficient_data = false;
    double tolerance_sigmas = 3;
    std::vector<OracleEntry> entries;
    RunStats stats;

    bool passed() const;
    std::string to_json() const;
};

/// Runs the trials and compares each reported frequency, the mean round count
/// and the mean fidelity with their exact values. `analytic_noise` replaces the
/// noise model on the exact side only.
OracleReport oracle_check(const RunConfig &cfg, double tolerance_sigmas, TrialProtocol protocol = TrialProtocol::Write,
                          const std::optional<NoiseParams> &analytic_noise = std::nullopt);

}  // namespace dfsmem

#endif
