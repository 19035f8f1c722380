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

#include "gtest/gtest.h"
#include "support/dense_oracle.h"

using namespace dfsmem;

namespace {

PumpPhysical unity() {
    return {1, 1, 1, 1, 1, 1, 1};
}

struct PairModes {
    ModeLabel atom = ModeLabel::atomic("S");
    ModeLabel photon = ModeLabel::photon(Polarization::H, "stokes");
    RegistryPtr reg = register_modes({atom, photon}, 4);
};

struct DualRailModes {
    ModeLabel s0 = ModeLabel::atomic("S0");
    ModeLabel s1 = ModeLabel::atomic("S1");
    ModeLabel l = ModeLabel::photon(Polarization::Lcirc, "e");
    ModeLabel r = ModeLabel::photon(Polarization::Rcirc, "e");
    ModeLabel h = ModeLabel::photon(Polarization::H, "e");
    ModeLabel v = ModeLabel::photon(Polarization::V, "e");
    RegistryPtr reg = register_modes({s0, s1, l, r, h, v}, 3);

    PureState emit(double pc, bool heralded = true) const {
        return dualrail_emit(pc, s0, s1, l, r, reg, heralded);
    }
    PureState excite(const ModeLabel &a, const ModeLabel &b) const {
        return apply_creation(apply_creation(vacuum(reg), a), b);
    }
};

}  // namespace

TEST(source_pump, unity_inputs) {
    EXPECT_DOUBLE_EQ(pc_from_physical(unity()), 4.0);
}

TEST(source_pump, linear_in_pulse_duration) {
    auto p = unity();
    p.g_c = 0.3;
    p.Delta = 7;
    double base = pc_from_physical(p);
    p.t_p *= 2;
    EXPECT_NEAR(pc_from_physical(p), 2 * base, 1e-15);
}

TEST(source_pump, inverse_square_in_detuning) {
    auto p = unity();
    p.Omega = 0.2;
    p.Delta = 3;
    double base = pc_from_physical(p);
    p.Delta *= 2;
    EXPECT_NEAR(pc_from_physical(p), base / 4, 1e-15);
}

TEST(source_pump, rejects_nonpositive) {
    auto p = unity();
    p.N = 0;
    EXPECT_THROW(pc_from_physical(p), std::invalid_argument);
    p = unity();
    p.Delta = 0;
    EXPECT_THROW(pc_from_physical(p), std::invalid_argument);
}

TEST(source_pair, zero_pc_is_vacuum) {
    PairModes m;
    auto s = raman_pair_state({0.0, 2}, m.atom, m.photon, m.reg);
    EXPECT_LT(oracle::max_amplitude_diff(s, vacuum(m.reg)), 1e-15);
}

TEST(source_pair, amplitudes) {
    PairModes m;
    auto s = raman_pair_state({0.01, 2}, m.atom, m.photon, m.reg);
    double norm = std::sqrt(1 + 0.01 + 0.0001);
    for (int n = 0; n <= 2; ++n) {
        std::array<int, 2> occ{n, n};
        EXPECT_NEAR(std::abs(s.amplitude(occ) * norm - std::pow(0.1, n)), 0.0, 1e-15) << n;
    }
    EXPECT_EQ(s.nonzero_count(), 3u);
}

TEST(source_pair, emission_probability) {
    PairModes m;
    for (double pc : {1e-3, 0.01, 0.2, 0.49}) {
        auto s = raman_pair_state({pc, 2}, m.atom, m.photon, m.reg);
        auto [vac, w0] = project_occupation(s, m.photon, 0);
        EXPECT_NEAR(1 - w0, (pc + pc * pc) / (1 + pc + pc * pc), 1e-14) << pc;
    }
}

TEST(source_pair, number_correlation_and_ratio) {
    PairModes m;
    for (double pc : {0.01, 0.3}) {
        auto s = raman_pair_state({pc, 3}, m.atom, m.photon, m.reg);
        for (const auto &[idx, amp] : s.entries()) {
            EXPECT_EQ(m.reg->occupation(idx, 0), m.reg->occupation(idx, 1));
        }
        for (int n = 0; n < 3; ++n) {
            std::array<int, 2> a{n, n}, b{n + 1, n + 1};
            EXPECT_NEAR(std::abs(s.amplitude(b) / s.amplitude(a)), std::sqrt(pc), 1e-14);
        }
    }
}

TEST(source_pair, truncation_limits) {
    PairModes m;
    EXPECT_THROW(raman_pair_state({0.01, 4}, m.atom, m.photon, m.reg), std::invalid_argument);
    EXPECT_THROW(raman_pair_state({0.01, 0}, m.atom, m.photon, m.reg), std::invalid_argument);
    EXPECT_THROW(raman_pair_state({0.6, 2}, m.atom, m.photon, m.reg), std::invalid_argument);
}

TEST(source_dualrail, heralded_amplitudes) {
    DualRailModes m;
    auto s = m.emit(0.01);
    double h = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(inner(m.excite(m.s0, m.v), s) - h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner(m.excite(m.s1, m.h), s) - h), 0.0, 1e-15);
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
    EXPECT_EQ(s.nonzero_count(), 2u);
}

TEST(source_dualrail, matches_logical_form) {
    DualRailModes m;
    // |0>_a on S0, |1>_a on S1: (|H>|1>_a + |V>|0>_a)/sqrt2.
    auto target = (m.excite(m.h, m.s1) + m.excite(m.v, m.s0)).scaled(1 / std::sqrt(2.0));
    EXPECT_NEAR(fidelity_pure(m.emit(0.2), target), 1.0, 1e-14);
}

TEST(source_dualrail, maximally_entangled) {
    DualRailModes m;
    auto s = m.emit(0.01);
    std::array<ModeLabel, 2> atoms{m.s0, m.s1};
    auto probs = born_probabilities(s, atoms);
    EXPECT_NEAR(probs.at(Occupation{1, 0}), 0.5, 1e-15);
    EXPECT_NEAR(probs.at(Occupation{0, 1}), 0.5, 1e-15);
}

TEST(source_dualrail, unheralded_vacuum_weight) {
    DualRailModes m;
    double pc = 0.04;
    auto s = m.emit(pc, false);
    EXPECT_NEAR(std::abs(inner(vacuum(m.reg), s)), std::sqrt(1 - pc), 1e-15);
    EXPECT_NEAR(s.norm(), 1.0, 1e-14);
    EXPECT_NEAR(fidelity_pure(s, m.emit(pc)), pc, 1e-14);
}

TEST(source_dualrail, separate_paths) {
    auto s0 = ModeLabel::atomic("S0"), s1 = ModeLabel::atomic("S1");
    auto l = ModeLabel::photon(Polarization::Lcirc, "x");
    auto r = ModeLabel::photon(Polarization::Rcirc, "y");
    std::vector<ModeLabel> labels{s0, s1};
    for (const auto &p : {l, r}) {
        for (auto pol : {Polarization::Lcirc, Polarization::Rcirc, Polarization::H, Polarization::V}) {
            labels.push_back(p.with_polarization(pol));
        }
    }
    auto reg = register_modes(labels, 3);
    auto s = dualrail_emit(0.01, s0, s1, l, r, reg);
    auto v = apply_creation(apply_creation(vacuum(reg), s0), l.with_polarization(Polarization::V));
    auto h = apply_creation(apply_creation(vacuum(reg), s1), r.with_polarization(Polarization::H));
    EXPECT_NEAR(fidelity_pure(s, (v + h).scaled(1 / std::sqrt(2.0))), 1.0, 1e-14);
}

TEST(source_retrieve, unit_efficiency) {
    auto a = ModeLabel::atomic("S"), p = ModeLabel::photon(Polarization::H, "as");
    auto reg = register_modes({a, p}, 3);
    auto out = retrieve(apply_creation(vacuum(reg), a), a, p, 1.0);
    EXPECT_NEAR(fidelity_mixed(out, apply_creation(vacuum(reg), p)), 1.0, 1e-15);
}

TEST(source_retrieve, half_efficiency) {
    auto a = ModeLabel::atomic("S"), p = ModeLabel::photon(Polarization::H, "as");
    auto reg = register_modes({a, p}, 3);
    auto out = retrieve(apply_creation(vacuum(reg), a), a, p, 0.5);
    EXPECT_NEAR(fidelity_mixed(out, apply_creation(vacuum(reg), p)), 0.5, 1e-15);
    EXPECT_NEAR(fidelity_mixed(out, vacuum(reg)), 0.5, 1e-15);
}

TEST(source_retrieve, vacuum_unchanged) {
    auto a = ModeLabel::atomic("S"), p = ModeLabel::photon(Polarization::H, "as");
    auto reg = register_modes({a, p}, 3);
    for (double eta : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR(fidelity_mixed(retrieve(vacuum(reg), a, p, eta), vacuum(reg)), 1.0, 1e-15);
    }
}

TEST(source_retrieve, rejects_occupied_output) {
    auto a = ModeLabel::atomic("S"), p = ModeLabel::photon(Polarization::H, "as");
    auto reg = register_modes({a, p}, 3);
    EXPECT_THROW(retrieve(apply_creation(vacuum(reg), p), a, p, 1.0), std::invalid_argument);
    EXPECT_THROW(retrieve(vacuum(reg), a, p, 1.5), std::invalid_argument);
}
