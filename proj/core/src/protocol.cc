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

#include "dfsmem/protocol.h"

#include <cmath>
#include <numbers>

#include "dfsmem/optics.h"
#include "dfsmem/source.h"

namespace dfsmem {

namespace {

ModeLabel photon(Polarization p, const char *path) {
    return ModeLabel::photon(p, path);
}

PureState apply_all(PureState state, const std::vector<OpticalElement> &elements) {
    for (const auto &e : elements) {
        state = apply_unitary(state, e);
    }
    return state;
}

void check_qubit(Complex alpha, Complex beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9) {
        throw std::invalid_argument("|alpha|^2 + |beta|^2 must be 1 within 1e-9");
    }
}

// Conditional states of `keep` for every photon-count pattern on `detectors`.
std::vector<PhotonBranch> branches_on(const PureState &state, const std::array<ModeLabel, 4> &detectors,
                                      std::span<const ModeLabel> keep) {
    std::vector<PhotonBranch> out;
    for (const auto &[pattern, branch] : split_by_pattern(state, detectors)) {
        PhotonBranch b;
        for (size_t i = 0; i < 4; ++i) {
            b.photons[i] = pattern[i];
        }
        b.probability = branch.norm_squared();
        if (b.probability > 0) {
            b.atomic = partial_trace(branch, keep);
            out.push_back(std::move(b));
        }
    }
    return out;
}

}  // namespace

std::string to_string(BellKind kind) {
    switch (kind) {
        case BellKind::PsiPlus:
            return "PsiPlus";
        case BellKind::PsiMinus:
            return "PsiMinus";
        case BellKind::PhiPlus:
            return "PhiPlus";
        case BellKind::PhiMinus:
            return "PhiMinus";
        case BellKind::Failure:
            return "Failure";
    }
    return "?";
}

std::string to_string(PauliMark mark) {
    switch (mark) {
        case PauliMark::I:
            return "I";
        case PauliMark::Z:
            return "Z";
        case PauliMark::X:
            return "X";
        case PauliMark::ZX:
            return "ZX";
    }
    return "?";
}

std::string to_string(const ClickPattern &clicks) {
    std::string out;
    for (size_t i = 0; i < clicks.size(); ++i) {
        if (clicks[i]) {
            out += "D" + std::to_string(i + 1);
        }
    }
    return out.empty() ? "none" : out;
}

MemoryLayout MemoryLayout::build(int truncation) {
    MemoryLayout l{
        .registry = nullptr,
        .atomic_registry = nullptr,
        .s_l = ModeLabel::atomic("S_L"),
        .s_r = ModeLabel::atomic("S_R"),
        .stokes_l = photon(Polarization::Rcirc, "stokes_L"),
        .stokes_r = photon(Polarization::Rcirc, "stokes_R"),
        .arm_a_h = photon(Polarization::H, "a"),
        .arm_a_v = photon(Polarization::V, "a"),
        .dump_h = photon(Polarization::H, "dump"),
        .dump_v = photon(Polarization::V, "dump"),
        .arm_b_h = photon(Polarization::H, "b"),
        .arm_b_v = photon(Polarization::V, "b"),
        .detectors = {photon(Polarization::H, "psi"), photon(Polarization::V, "psi"), photon(Polarization::H, "phi"),
                      photon(Polarization::V, "phi")},
    };
    std::vector<ModeLabel> labels{l.s_l, l.s_r};
    for (const auto &src : {l.stokes_l, l.stokes_r}) {
        for (auto p : {Polarization::Rcirc, Polarization::Lcirc, Polarization::H, Polarization::V}) {
            labels.push_back(src.with_polarization(p));
        }
    }
    for (const auto &m : {l.arm_a_h, l.arm_a_v, l.dump_h, l.dump_v, l.arm_b_h, l.arm_b_v}) {
        labels.push_back(m);
    }
    for (const auto &m : l.detectors) {
        labels.push_back(m);
    }
    l.registry = register_modes(std::move(labels), truncation);
    l.atomic_registry = register_modes({l.s_l, l.s_r}, truncation);
    return l;
}

std::vector<ModeLabel> MemoryLayout::photonic_modes() const {
    std::vector<ModeLabel> out;
    for (const auto &m : registry->labels()) {
        if (m.kind == ModeKind::Photonic) {
            out.push_back(m);
        }
    }
    return out;
}

ReadoutLayout ReadoutLayout::build(int truncation) {
    ReadoutLayout l{
        .registry = nullptr,
        .output_registry = nullptr,
        .s_l = ModeLabel::atomic("S_L"),
        .s_r = ModeLabel::atomic("S_R"),
        .anti_stokes_l = photon(Polarization::H, "anti_stokes_L"),
        .anti_stokes_r = photon(Polarization::V, "anti_stokes_R"),
        .out_h = photon(Polarization::H, "out"),
        .out_v = photon(Polarization::V, "out"),
        .out2_h = photon(Polarization::H, "out2"),
        .out2_v = photon(Polarization::V, "out2"),
    };
    l.registry = register_modes({l.s_l, l.s_r, l.anti_stokes_l, l.anti_stokes_l.with_polarization(Polarization::V),
                                 l.anti_stokes_r.with_polarization(Polarization::H), l.anti_stokes_r, l.out_h,
                                 l.out_v, l.out2_h, l.out2_v},
                                truncation);
    l.output_registry = register_modes({l.out_h, l.out_v}, truncation);
    return l;
}

RemoteLayout RemoteLayout::build(int truncation) {
    RemoteLayout l{
        .registry = nullptr,
        .r_registry = nullptr,
        .i1 = ModeLabel::atomic("I1"),
        .i2 = ModeLabel::atomic("I2"),
        .l1 = ModeLabel::atomic("L1"),
        .l2 = ModeLabel::atomic("L2"),
        .r1 = ModeLabel::atomic("R1"),
        .r2 = ModeLabel::atomic("R2"),
        .detectors = {photon(Polarization::H, "p1"), photon(Polarization::H, "p2"), photon(Polarization::H, "p3"),
                      photon(Polarization::H, "p4")},
    };
    std::vector<ModeLabel> labels{l.i1, l.i2, l.l1, l.l2, l.r1, l.r2};
    labels.insert(labels.end(), l.detectors.begin(), l.detectors.end());
    l.registry = register_modes(std::move(labels), truncation);
    l.r_registry = register_modes({l.r1, l.r2}, truncation);
    return l;
}

PureState logical_state(const LogicalQubitMap &map, const RegistryPtr &registry, Complex alpha, Complex beta) {
    const auto &reg = *registry;
    BasisIndex zero = reg.stride(reg.index_of(map.second));
    BasisIndex one = reg.stride(reg.index_of(map.first));
    return PureState(registry, {{zero, alpha}, {one, beta}});
}

OpticalElement collective_dephasing(const LogicalQubitMap &map, double theta) {
    std::array<ModeLabel, 2> modes{map.first, map.second};
    std::array<double, 2> phases{theta, theta};
    return phase_shift(modes, phases);
}

std::vector<OpticalElement> entanglement_elements(const MemoryLayout &l) {
    auto qwp_on = [](const ModeLabel &src) {
        return qwp(src.with_polarization(Polarization::Rcirc), src.with_polarization(Polarization::Lcirc),
                   src.with_polarization(Polarization::H), src.with_polarization(Polarization::V));
    };
    const auto lh = l.stokes_l.with_polarization(Polarization::H);
    const auto lv = l.stokes_l.with_polarization(Polarization::V);
    const auto rh = l.stokes_r.with_polarization(Polarization::H);
    const auto rv = l.stokes_r.with_polarization(Polarization::V);
    return {
        qwp_on(l.stokes_l),
        qwp_on(l.stokes_r),
        pol_rotator(rh, rv),
        pbs(lh, lv, rh, rv, l.arm_a_h, l.arm_a_v, l.dump_h, l.dump_v),
    };
}

PureState source_state(double pc, int n_max, const MemoryLayout &layout) {
    SourceParams params{pc, n_max};
    auto left = raman_pair_state(params, layout.s_l, layout.stokes_l, layout.registry);
    auto right = raman_pair_state(params, layout.s_r, layout.stokes_r, layout.registry);
    return combine_disjoint(left, right);
}

PureState pre_herald_state(double pc, int n_max, const MemoryLayout &layout) {
    return apply_all(source_state(pc, n_max, layout), entanglement_elements(layout));
}

PureState ideal_entangled_state(const MemoryLayout &layout) {
    auto vac = vacuum(layout.registry);
    auto h = apply_creation(apply_creation(vac, layout.s_l), layout.arm_a_h);
    auto v = apply_creation(apply_creation(vac, layout.s_r), layout.arm_a_v);
    return (h + v).scaled(1.0 / std::sqrt(2.0));
}

EntanglementResult generate_entanglement(double pc, const MemoryLayout &layout, int n_max) {
    if (!(pc >= 0.0 && pc < 0.5)) {
        throw std::invalid_argument("generate_entanglement: pc must lie in [0, 0.5)");
    }
    auto state = pre_herald_state(pc, n_max, layout);
    const auto &reg = *layout.registry;
    std::vector<size_t> photonic;
    for (const auto &m : layout.photonic_modes()) {
        photonic.push_back(reg.index_of(m));
    }
    std::vector<PureState::Entry> kept;
    for (const auto &e : state.entries()) {
        int photons = 0;
        for (auto m : photonic) {
            photons += reg.occupation(e.first, m);
        }
        if (photons == 1) {
            kept.push_back(e);
        }
    }
    PureState heralded(layout.registry, std::move(kept));
    double p = heralded.norm_squared();
    if (p == 0) {
        return {std::move(heralded), 0.0};
    }
    return {heralded.normalized(), p};
}

OpticalElement encoder_element(const MemoryLayout &layout, Complex alpha, Complex beta) {
    return mz_split(layout.arm_a_h, layout.arm_a_h, layout.arm_b_h, alpha, beta);
}

PureState encode_spatial(const PureState &state, Complex alpha, Complex beta, const MemoryLayout &layout) {
    check_qubit(alpha, beta);
    const auto &reg = *state.registry();
    size_t bh = reg.index_of(layout.arm_b_h);
    size_t bv = reg.index_of(layout.arm_b_v);
    for (const auto &e : state.entries()) {
        if (reg.occupation(e.first, bh) != 0 || reg.occupation(e.first, bv) != 0) {
            throw std::invalid_argument("encode_spatial: arm b must start in vacuum");
        }
    }
    return apply_unitary(state, encoder_element(layout, alpha, beta));
}

std::vector<OpticalElement> bsm_elements(const MemoryLayout &l) {
    const auto &d = l.detectors;
    // PBS1 sends Psi-type inputs (H b, V a) to the psi port and Phi-type
    // inputs (H a, V b) to the phi port.
    return {
        pbs(l.arm_a_h, l.arm_a_v, l.arm_b_h, l.arm_b_v, d[2], d[3], d[0], d[1]),
        hwp(d[0], d[1]),
        hwp(d[2], d[3]),
    };
}

PureState bell_state(BellKind kind, const MemoryLayout &layout) {
    auto vac = vacuum(layout.registry);
    auto make = [&](const ModeLabel &x, const ModeLabel &y, double sign) {
        return (apply_creation(vac, x) + apply_creation(vac, y).scaled(sign)).scaled(1.0 / std::sqrt(2.0));
    };
    switch (kind) {
        case BellKind::PsiPlus:
            return make(layout.arm_b_h, layout.arm_a_v, 1.0);
        case BellKind::PsiMinus:
            return make(layout.arm_b_h, layout.arm_a_v, -1.0);
        case BellKind::PhiPlus:
            return make(layout.arm_a_h, layout.arm_b_v, 1.0);
        case BellKind::PhiMinus:
            return make(layout.arm_a_h, layout.arm_b_v, -1.0);
        case BellKind::Failure:
            break;
    }
    throw std::invalid_argument("bell_state: Failure is not a Bell state");
}

BsmResult bsm(const PureState &state, const MemoryLayout &layout) {
    auto out = apply_all(state, bsm_elements(layout));
    auto probs = born_probabilities(out, layout.detectors);
    return {std::move(out), std::move(probs)};
}

BellOutcome classify(const ClickPattern &clicks) {
    int count = 0;
    size_t which = 0;
    for (size_t i = 0; i < clicks.size(); ++i) {
        if (clicks[i]) {
            ++count;
            which = i;
        }
    }
    if (count != 1) {
        return {BellKind::Failure, clicks};
    }
    static constexpr std::array<BellKind, 4> kinds{BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus,
                                                   BellKind::PhiMinus};
    return {kinds[which], clicks};
}

PauliMark pauli_mark(const BellOutcome &outcome) {
    switch (outcome.kind) {
        case BellKind::PsiPlus:
            return PauliMark::I;
        case BellKind::PsiMinus:
            return PauliMark::Z;
        case BellKind::PhiPlus:
            return PauliMark::X;
        case BellKind::PhiMinus:
            return PauliMark::ZX;
        case BellKind::Failure:
            break;
    }
    throw std::invalid_argument("pauli_mark: no correction for a failed Bell measurement (" +
                                to_string(outcome.clicks) + ")");
}

ClickPattern clicks_of(const PhotonPattern &photons) {
    ClickPattern c{};
    for (size_t i = 0; i < 4; ++i) {
        c[i] = photons[i] > 0;
    }
    return c;
}

PureState apply_logical_pauli(const PureState &state, PauliMark mark, const LogicalQubitMap &map) {
    std::array<ModeLabel, 1> first{map.first};
    std::array<double, 1> pi{std::numbers::pi};
    auto x = mode_swap(map.first, map.second);
    auto z = phase_shift(first, pi);
    switch (mark) {
        case PauliMark::I:
            return state;
        case PauliMark::Z:
            return apply_unitary(state, z);
        case PauliMark::X:
            return apply_unitary(state, x);
        case PauliMark::ZX:
            return apply_unitary(apply_unitary(state, x), z);
    }
    return state;
}

MixedState apply_logical_pauli(const MixedState &state, PauliMark mark, const LogicalQubitMap &map) {
    std::vector<MixedComponent> comps;
    for (const auto &c : state.components()) {
        comps.push_back({c.weight, apply_logical_pauli(c.state, mark, map)});
    }
    return MixedState(std::move(comps));
}

std::vector<PhotonBranch> detector_branches(const PureState &post_bsm, const MemoryLayout &layout) {
    std::array<ModeLabel, 2> atoms{layout.s_l, layout.s_r};
    return branches_on(post_bsm, layout.detectors, atoms);
}

TrialRecord write_memory(Complex alpha, Complex beta, double pc, const MemoryLayout &layout, double u) {
    check_qubit(alpha, beta);
    auto heralded = generate_entanglement(pc, layout);
    if (heralded.herald_probability == 0) {
        throw std::domain_error("write_memory: herald probability is zero");
    }
    auto encoded = encode_spatial(heralded.state, alpha, beta, layout);
    auto measured = bsm(encoded, layout);
    auto branches = detector_branches(measured.state, layout);

    double total = 0;
    for (const auto &b : branches) {
        total += b.probability;
    }
    double target = u * total;
    const PhotonBranch *chosen = &branches.back();
    double acc = 0;
    for (const auto &b : branches) {
        acc += b.probability;
        if (target < acc) {
            chosen = &b;
            break;
        }
    }

    TrialRecord record;
    record.clicks = clicks_of(chosen->photons);
    record.outcome = classify(record.clicks);
    record.success = record.outcome.kind != BellKind::Failure;
    if (record.success) {
        record.mark = pauli_mark(record.outcome);
        record.atomic_state = chosen->atomic;
    }
    return record;
}

MixedState read_memory(const TrialRecord &record, double retrieval_efficiency) {
    if (!record.success || !record.atomic_state) {
        throw std::invalid_argument("read_memory: record holds no stored qubit (" +
                                    to_string(record.outcome.clicks) + ")");
    }
    auto layout = ReadoutLayout::build(record.atomic_state->registry()->truncation());
    auto state = embed(*record.atomic_state, layout.registry);
    state = retrieve(state, layout.s_l, layout.anti_stokes_l, retrieval_efficiency);
    state = retrieve(state, layout.s_r, layout.anti_stokes_r, retrieval_efficiency);
    state = apply_unitary(state, pbs(layout.anti_stokes_l, layout.anti_stokes_l.with_polarization(Polarization::V),
                                     layout.anti_stokes_r.with_polarization(Polarization::H), layout.anti_stokes_r,
                                     layout.out_h, layout.out_v, layout.out2_h, layout.out2_v));
    state = apply_logical_pauli(state, record.mark, layout.output_map());
    std::array<ModeLabel, 2> out{layout.out_h, layout.out_v};
    return partial_trace(state, out);
}

PureState readout_target(Complex alpha, Complex beta, int truncation) {
    auto layout = ReadoutLayout::build(truncation);
    return logical_state(layout.output_map(), layout.output_registry, alpha, beta);
}

std::vector<OpticalElement> remote_elements(const RemoteLayout &l) {
    const auto &d = l.detectors;
    return {
        mode_swap(l.i1, d[0]), mode_swap(l.l1, d[1]), mode_swap(l.i2, d[2]),
        mode_swap(l.l2, d[3]), bs50(d[0], d[1]),      bs50(d[2], d[3]),
    };
}

PureState remote_initial_state(Complex alpha, Complex beta, const RemoteLayout &l) {
    check_qubit(alpha, beta);
    auto vac = vacuum(l.registry);
    auto input = apply_creation(vac, l.i2).scaled(alpha) + apply_creation(vac, l.i1).scaled(beta);
    auto resource =
        (apply_creation(apply_creation(vac, l.l1), l.r2) + apply_creation(apply_creation(vac, l.l2), l.r1))
            .scaled(1.0 / std::sqrt(2.0));
    return combine_disjoint(input, resource);
}

bool remote_success(const ClickPattern &c) {
    return (c[0] != c[1]) && (c[2] != c[3]);
}

PauliMark remote_phase_mark(const ClickPattern &c) {
    if (!remote_success(c)) {
        throw std::invalid_argument("remote_phase_mark: not a coincidence pattern");
    }
    // D1D4 and D2D3 carry the relative minus sign.
    return c[0] == c[3] ? PauliMark::Z : PauliMark::I;
}

RemoteTransferResult remote_transfer(Complex alpha, Complex beta, const RemoteLayout &layout) {
    auto state = apply_all(remote_initial_state(alpha, beta, layout), remote_elements(layout));
    std::array<ModeLabel, 2> r{layout.r1, layout.r2};

    RemoteTransferResult result;
    result.photon_branches = branches_on(state, layout.detectors, r);

    std::map<ClickPattern, std::vector<std::pair<double, MixedState>>> by_clicks;
    for (const auto &b : result.photon_branches) {
        by_clicks[clicks_of(b.photons)].emplace_back(b.probability, *b.atomic);
        result.total_probability += b.probability;
    }
    for (const auto &[clicks, parts] : by_clicks) {
        RemoteClickClass cls;
        cls.clicks = clicks;
        for (const auto &p : parts) {
            cls.probability += p.first;
        }
        cls.success = remote_success(clicks);
        if (cls.success) {
            cls.phase_mark = remote_phase_mark(clicks);
            result.success_probability += cls.probability;
        }
        cls.r_state = mix(parts);
        result.classes.push_back(std::move(cls));
    }
    return result;
}

}  // namespace dfsmem
