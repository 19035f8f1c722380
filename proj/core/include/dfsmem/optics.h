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

#ifndef DFSMEM_OPTICS_H
#define DFSMEM_OPTICS_H

#include <span>

#include "dfsmem/fock.h"

namespace dfsmem {

/// Quarter-wave plate as a relabeling: R-circular -> H, L-circular -> V.
/// The four modes must be distinct; the element swaps each pair.
OpticalElement qwp(const ModeLabel &in_rcirc, const ModeLabel &in_lcirc, const ModeLabel &out_h,
                   const ModeLabel &out_v);

/// Polarizing beam splitter. H is transmitted (in1 -> out1, in2 -> out2) and
/// V is reflected (in1 -> out2, in2 -> out1). All matrix elements are +1.
OpticalElement pbs(const ModeLabel &in1_h, const ModeLabel &in1_v, const ModeLabel &in2_h, const ModeLabel &in2_v,
                   const ModeLabel &out1_h, const ModeLabel &out1_v, const ModeLabel &out2_h,
                   const ModeLabel &out2_v);

/// Half-wave plate: H -> (H+V)/sqrt2, V -> (H-V)/sqrt2.
OpticalElement hwp(const ModeLabel &mode_h, const ModeLabel &mode_v);

/// H <-> V swap.
OpticalElement pol_rotator(const ModeLabel &mode_h, const ModeLabel &mode_v);

/// Polarization-independent Mach-Zehnder: in -> alpha*out_a + beta*out_b,
/// completed with (-conj(beta), conj(alpha)) on the auxiliary port. The
/// element acts on both the H and V copies of the given photonic paths.
/// When in_mode and out_a name the same path the element is two-port.
OpticalElement mz_split(const ModeLabel &in_mode, const ModeLabel &out_a, const ModeLabel &out_b, Complex alpha,
                        Complex beta);

/// Balanced beam splitter, single-particle matrix [[1,1],[1,-1]]/sqrt2.
OpticalElement bs50(const ModeLabel &mode_1, const ModeLabel &mode_2);

/// Exchanges the contents of two modes.
OpticalElement mode_swap(const ModeLabel &a, const ModeLabel &b);

/// Diagonal phases exp(i*phases[k]) on the listed modes.
OpticalElement phase_shift(std::span<const ModeLabel> modes, std::span<const double> phases);

}  // namespace dfsmem

#endif
