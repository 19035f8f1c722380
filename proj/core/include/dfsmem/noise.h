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

#ifndef DFSMEM_NOISE_H
#define DFSMEM_NOISE_H

#include <span>
#include <utility>
#include <vector>

#include "dfsmem/fock.h"

namespace dfsmem {

/// Imperfection knobs. Lengths share one unit; f_p is in Hz; p_dc is the
/// dark-count probability per pulse window (dark rate / f_p).
struct NoiseParams {
    double pc = 0.01;
    double chi = 1.0;
    double eta_d = 1.0;
    double p_dc = 0.0;
    double L0 = 0.0;
    double L_att = 22.0;
    double f_p = 1e7;

    void validate() const;
    double channel_transmission() const;
    /// eta' = chi * eta_d * exp(-L0 / L_att).
    double eta_prime() const;
};

struct FidelityReport {
    double p0 = 0;
    double p1 = 0;
    double po = 0;
    double eta_prime = 0;
    double T_seconds = 0;
    double F = 0;
    double delta_F = 0;
    /// Per-round herald probability of the density pipeline.
    double herald_probability = 0;
    /// Average fidelity of the stored qubit after teleportation and marking,
    /// over single-click Bell outcomes.
    double memory_F = 0;

    struct Analytic {
        double p0 = 0;
        double p1 = 0;
        double po = 0;
        double T_seconds = 0;
        double delta_F = 0;
    } analytic;
};

double p1_analytic(const NoiseParams &n);
double p0_analytic(const NoiseParams &n);
double po_analytic(const NoiseParams &n, int excitations);
double preparation_time(double p1, double f_p);

/// Returns (T, F) with F = 1 - 1/(2 eta' f_p T), clamped to [0, 1].
std::vector<std::pair<double, double>> fidelity_vs_T(double eta_prime, double f_p, std::span<const double> T_values);
/// Returns (eta', dF) with dF = 1/(2 eta' f_p T).
std::vector<std::pair<double, double>> dF_vs_eta(double T, double f_p, std::span<const double> eta_values);

/// p0 |vac><vac| + p1 |ideal><ideal| + sum_k w_k |psi_k><psi_k|.
MixedState build_mixed_state(double p0, double p1, const std::vector<std::pair<double, PureState>> &po_components,
                             const PureState &ideal, const PureState &vac);

/// Beam-splitter loss on one mode: couples it to a fresh vacuum mode with
/// transmissivity sqrt(survival) and traces that mode out.
MixedState apply_loss(const PureState &state, const ModeLabel &mode, double survival);
MixedState apply_loss(const MixedState &state, const ModeLabel &mode, double survival);

/// Density-matrix pipeline: two Raman sources with n_max=2, the Step A
/// optics, loss eta' on the fiber port and a threshold herald with dark
/// counts. Reports the heralded atom-photon fidelity against the ideal
/// entangled state alongside the analytic estimates.
FidelityReport end_to_end_fidelity(double pc, const NoiseParams &noise, Complex alpha, Complex beta);

}  // namespace dfsmem

#endif
