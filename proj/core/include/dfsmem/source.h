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

#ifndef DFSMEM_SOURCE_H
#define DFSMEM_SOURCE_H

#include "dfsmem/fock.h"

namespace dfsmem {

/// Raman pair source. pc is the single spin-flip excitation probability per
/// pump pulse; n_max is the highest kept excitation order.
struct SourceParams {
    double pc = 0.01;
    int n_max = 2;

    void validate() const;
};

/// Off-resonant pump parameters, all in one caller-chosen unit system.
struct PumpPhysical {
    double g_c;
    double N;
    double L;
    double Omega;
    double Delta;
    double t_p;
    double c;
};

/// 4 g_c^2 N L / c * |Omega|^2 / Delta^2 * t_p.
double pc_from_physical(const PumpPhysical &p);

/// Number-correlated pair state sum_n pc^(n/2) |n>_atomic |n>_photon for
/// n = 0..n_max, normalized. Other modes of the registry are vacuum.
PureState raman_pair_state(const SourceParams &params, const ModeLabel &atomic, const ModeLabel &photon,
                           const RegistryPtr &registry);

/// Single-ensemble dual-rail emission. photon_l and photon_r are the L- and
/// R-circular emission modes; the built-in QWP moves them onto the V and H
/// copies of the same paths, which must also be registered. Heralded output is
/// (|V> S_0^+ + |H> S_1^+)/sqrt2 |vac>; unheralded output adds the
/// sqrt(1-pc) vacuum amplitude in front of sqrt(pc) times that.
PureState dualrail_emit(double pc, const ModeLabel &atomic0, const ModeLabel &atomic1, const ModeLabel &photon_l,
                        const ModeLabel &photon_r, const RegistryPtr &registry, bool heralded = true);

/// Converts the atomic excitation into the (vacuum) anti-Stokes mode, then
/// applies a loss channel with the given survival probability to it.
MixedState retrieve(const PureState &state, const ModeLabel &atomic, const ModeLabel &anti_stokes,
                    double efficiency);
MixedState retrieve(const MixedState &state, const ModeLabel &atomic, const ModeLabel &anti_stokes,
                    double efficiency);

}  // namespace dfsmem

#endif
