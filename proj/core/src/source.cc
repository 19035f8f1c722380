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

#include "dfsmem/source.h"

#include <cmath>

#include "dfsmem/noise.h"
#include "dfsmem/optics.h"

namespace dfsmem {

void SourceParams::validate() const {
    if (!(pc >= 0.0 && pc < 0.5)) {
        throw std::invalid_argument("pc must lie in [0, 0.5)");
    }
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be >= 1");
    }
}

double pc_from_physical(const PumpPhysical &p) {
    for (double v : {p.g_c, p.N, p.L, p.Omega, p.t_p, p.c}) {
        if (!(v > 0)) {
            throw std::invalid_argument("pump parameters must be positive");
        }
    }
    if (!(std::abs(p.Delta) > 0)) {
        throw std::invalid_argument("detuning must be nonzero");
    }
    return 4.0 * p.g_c * p.g_c * p.N * p.L / p.c * (p.Omega * p.Omega) / (p.Delta * p.Delta) * p.t_p;
}

PureState raman_pair_state(const SourceParams &params, const ModeLabel &atomic, const ModeLabel &photon,
                           const RegistryPtr &registry) {
    params.validate();
    if (params.n_max >= registry->truncation()) {
        throw std::invalid_argument("n_max must be below the truncation d");
    }
    size_t ma = registry->index_of(atomic);
    size_t mp = registry->index_of(photon);
    std::vector<PureState::Entry> entries;
    double amp = 1.0;
    const double ratio = std::sqrt(params.pc);
    for (int n = 0; n <= params.n_max; ++n) {
        BasisIndex idx = static_cast<BasisIndex>(n) * (registry->stride(ma) + registry->stride(mp));
        entries.emplace_back(idx, amp);
        amp *= ratio;
    }
    return PureState(registry, std::move(entries)).normalized();
}

PureState dualrail_emit(double pc, const ModeLabel &atomic0, const ModeLabel &atomic1, const ModeLabel &photon_l,
                        const ModeLabel &photon_r, const RegistryPtr &registry, bool heralded) {
    if (!(pc >= 0.0 && pc < 0.5)) {
        throw std::invalid_argument("pc must lie in [0, 0.5)");
    }
    auto vac = vacuum(registry);
    // (S_0^+ a_L^+ + S_1^+ a_R^+)/sqrt2 |vac>, then QWP: R -> H, L -> V.
    auto branch0 = apply_creation(apply_creation(vac, atomic0), photon_l);
    auto branch1 = apply_creation(apply_creation(vac, atomic1), photon_r);
    auto emitted = (branch0 + branch1).scaled(1.0 / std::sqrt(2.0));

    // One QWP per distinct spatial path.
    std::vector<ModeLabel> paths{photon_l};
    if (photon_r.path != photon_l.path || photon_r.subsystem != photon_l.subsystem) {
        paths.push_back(photon_r);
    }
    for (const auto &path : paths) {
        auto element = qwp(path.with_polarization(Polarization::Rcirc), path.with_polarization(Polarization::Lcirc),
                           path.with_polarization(Polarization::H), path.with_polarization(Polarization::V));
        emitted = apply_unitary(emitted, element);
    }
    if (heralded) {
        return emitted;
    }
    return vac.scaled(std::sqrt(1.0 - pc)) + emitted.scaled(std::sqrt(pc));
}

MixedState retrieve(const PureState &state, const ModeLabel &atomic, const ModeLabel &anti_stokes,
                    double efficiency) {
    return retrieve(MixedState::pure(state), atomic, anti_stokes, efficiency);
}

MixedState retrieve(const MixedState &state, const ModeLabel &atomic, const ModeLabel &anti_stokes,
                    double efficiency) {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw std::invalid_argument("retrieval efficiency must lie in [0, 1]");
    }
    const auto &reg = *state.registry();
    size_t out = reg.index_of(anti_stokes);
    for (const auto &c : state.components()) {
        for (const auto &[idx, amp] : c.state.entries()) {
            if (reg.occupation(idx, out) != 0) {
                throw std::invalid_argument("retrieve: anti-Stokes mode " + anti_stokes.str() + " is not vacuum");
            }
        }
    }
    auto converted = apply_unitary(state, mode_swap(atomic, anti_stokes));
    return apply_loss(converted, anti_stokes, efficiency);
}

}  // namespace dfsmem
