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

#ifndef DFSMEM_PROTOCOL_H
#define DFSMEM_PROTOCOL_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfsmem/fock.h"

namespace dfsmem {

using ClickPattern = std::array<bool, 4>;
using PhotonPattern = std::array<int, 4>;

enum class BellKind { PsiPlus, PsiMinus, PhiPlus, PhiMinus, Failure };

struct BellOutcome {
    BellKind kind = BellKind::Failure;
    /// Raw click pattern on D1..D4 that produced this outcome.
    ClickPattern clicks{};

    bool operator==(const BellOutcome &) const = default;
};

/// Classical correction record. ZX means X then Z, equal to -iY up to phase.
enum class PauliMark { I, Z, X, ZX };

std::string to_string(BellKind kind);
std::string to_string(PauliMark mark);
std::string to_string(const ClickPattern &clicks);

/// Dual-rail logical qubit on two modes: |0> = (0 in first, 1 in second),
/// |1> = (1 in first, 0 in second).
struct LogicalQubitMap {
    ModeLabel first;
    ModeLabel second;
};

/// Every mode used by the write path: Raman sources, Step A optics, the
/// Mach-Zehnder encoder and the polarization-spatial Bell analyzer.
struct MemoryLayout {
    RegistryPtr registry;
    RegistryPtr atomic_registry;

    ModeLabel s_l;
    ModeLabel s_r;
    /// R-circular Stokes emission modes of the two ensembles.
    ModeLabel stokes_l;
    ModeLabel stokes_r;
    /// PBS output coupled into the fiber; also arm a of the interferometer.
    ModeLabel arm_a_h;
    ModeLabel arm_a_v;
    ModeLabel dump_h;
    ModeLabel dump_v;
    ModeLabel arm_b_h;
    ModeLabel arm_b_v;
    /// D1..D4 after the analyzer; D1/D2 see the Psi port, D3/D4 the Phi port.
    std::array<ModeLabel, 4> detectors;

    static MemoryLayout build(int truncation = 3);
    int truncation() const {
        return registry->truncation();
    }
    /// |0>_a = S_L empty, S_R excited; |1>_a = S_L excited, S_R empty.
    LogicalQubitMap logical_map() const {
        return {s_l, s_r};
    }
    std::vector<ModeLabel> photonic_modes() const;
};

/// Modes of the read-out stage: anti-Stokes retrieval modes recombined on a PBS.
struct ReadoutLayout {
    RegistryPtr registry;
    RegistryPtr output_registry;
    ModeLabel s_l;
    ModeLabel s_r;
    ModeLabel anti_stokes_l;
    ModeLabel anti_stokes_r;
    ModeLabel out_h;
    ModeLabel out_v;
    ModeLabel out2_h;
    ModeLabel out2_v;

    static ReadoutLayout build(int truncation = 3);
    /// |0> = V, |1> = H on the output port.
    LogicalQubitMap output_map() const {
        return {out_h, out_v};
    }
};

/// Two-pair remote transfer: input pair I, resource pairs L and R, and the
/// four detector ports behind the two balanced splitters.
struct RemoteLayout {
    RegistryPtr registry;
    RegistryPtr r_registry;
    ModeLabel i1, i2, l1, l2, r1, r2;
    std::array<ModeLabel, 4> detectors;

    static RemoteLayout build(int truncation = 3);
    LogicalQubitMap input_map() const {
        return {i1, i2};
    }
    LogicalQubitMap r_map() const {
        return {r1, r2};
    }
};

/// alpha|0> + beta|1> on the map's modes; other modes vacuum.
PureState logical_state(const LogicalQubitMap &map, const RegistryPtr &registry, Complex alpha, Complex beta);

/// Equal phase exp(i theta) on both rails of a logical qubit.
OpticalElement collective_dephasing(const LogicalQubitMap &map, double theta);

// ---- Step A ---------------------------------------------------------------

std::vector<OpticalElement> entanglement_elements(const MemoryLayout &layout);

/// Both Raman sources with equal pc, before any optics.
PureState source_state(double pc, int n_max, const MemoryLayout &layout);

/// Source state propagated through the Step A optics, before heralding.
PureState pre_herald_state(double pc, int n_max, const MemoryLayout &layout);

/// (S_L^+ |H> + S_R^+ |V>)/sqrt2 on the fiber port.
PureState ideal_entangled_state(const MemoryLayout &layout);

struct EntanglementResult {
    PureState state;
    double herald_probability;
};

/// Projects the Step A output onto exactly one photon across the PBS outputs.
EntanglementResult generate_entanglement(double pc, const MemoryLayout &layout, int n_max = 2);

// ---- Steps B and C --------------------------------------------------------

OpticalElement encoder_element(const MemoryLayout &layout, Complex alpha, Complex beta);
PureState encode_spatial(const PureState &state, Complex alpha, Complex beta, const MemoryLayout &layout);

std::vector<OpticalElement> bsm_elements(const MemoryLayout &layout);

/// Single photon Bell state on (arm a, arm b) x (H, V); atoms in vacuum.
PureState bell_state(BellKind kind, const MemoryLayout &layout);

struct BsmResult {
    PureState state;
    /// Born probabilities of the photon counts on D1..D4.
    PatternProbabilities detector_probabilities;
};

BsmResult bsm(const PureState &state, const MemoryLayout &layout);

/// Exactly one click on D1..D4 selects Psi+, Psi-, Phi+, Phi-; anything else fails.
BellOutcome classify(const ClickPattern &clicks);
PauliMark pauli_mark(const BellOutcome &outcome);
ClickPattern clicks_of(const PhotonPattern &photons);

// ---- Step D ---------------------------------------------------------------

PureState apply_logical_pauli(const PureState &state, PauliMark mark, const LogicalQubitMap &map);
MixedState apply_logical_pauli(const MixedState &state, PauliMark mark, const LogicalQubitMap &map);

/// One detector photon-count pattern after the analyzer with the conditional
/// state of the atomic pair.
struct PhotonBranch {
    PhotonPattern photons{};
    double probability = 0;
    std::optional<MixedState> atomic;
};

std::vector<PhotonBranch> detector_branches(const PureState &post_bsm, const MemoryLayout &layout);

struct TrialRecord {
    std::int64_t rounds_until_herald = 1;
    ClickPattern clicks{};
    BellOutcome outcome;
    PauliMark mark = PauliMark::I;
    std::optional<MixedState> atomic_state;
    bool success = false;
};

/// Heralded write of alpha|a> + beta|b>. The branch is chosen by inverse-CDF
/// on `u` in [0,1) over the exact detector-pattern distribution.
TrialRecord write_memory(Complex alpha, Complex beta, double pc, const MemoryLayout &layout, double u);

/// Retrieves the stored qubit into the read-out port and applies the mark.
/// Returns the state of (out H, out V).
MixedState read_memory(const TrialRecord &record, double retrieval_efficiency);

/// alpha|V> + beta|H> on the read-out registry.
PureState readout_target(Complex alpha, Complex beta, int truncation = 3);

// ---- Remote transfer --------------------------------------------------------

std::vector<OpticalElement> remote_elements(const RemoteLayout &layout);

/// (alpha S_I2^+ + beta S_I1^+)(S_L1^+ S_R2^+ + S_L2^+ S_R1^+)/sqrt2 |vac>.
PureState remote_initial_state(Complex alpha, Complex beta, const RemoteLayout &layout);

struct RemoteClickClass {
    ClickPattern clicks{};
    double probability = 0;
    bool success = false;
    PauliMark phase_mark = PauliMark::I;
    /// Conditional state of pair R (on the R registry).
    std::optional<MixedState> r_state;
};

struct RemoteTransferResult {
    double success_probability = 0;
    double total_probability = 0;
    std::vector<RemoteClickClass> classes;
    std::vector<PhotonBranch> photon_branches;
};

/// One click in D1 or D2 and one click in D3 or D4.
bool remote_success(const ClickPattern &clicks);
/// Z for D1D4 and D2D3, I for D1D3 and D2D4.
PauliMark remote_phase_mark(const ClickPattern &clicks);

RemoteTransferResult remote_transfer(Complex alpha, Complex beta, const RemoteLayout &layout);

}  // namespace dfsmem

#endif
