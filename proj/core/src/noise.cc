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

#include "dfsmem/noise.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "dfsmem/protocol.h"

namespace dfsmem {

namespace {

ModeLabel fresh_loss_mode(const ModeRegistry &reg, const ModeLabel &mode) {
    std::string base = "loss:" + (mode.kind == ModeKind::Photonic ? *mode.path : mode.subsystem);
    auto pol = mode.polarization.value_or(Polarization::H);
    ModeLabel label = ModeLabel::photon(pol, base, "loss");
    for (int k = 1; reg.contains(label); ++k) {
        label = ModeLabel::photon(pol, base + "#" + std::to_string(k), "loss");
    }
    return label;
}

// Polarization-blind threshold herald on `port`: splits by the total photon
// number there, so coherence between modes of the port survives. Any photon
// clicks; vacuum clicks with p_dc. Returns unnormalized (weight, state) pairs.
std::vector<std::pair<double, PureState>> herald_on(const MixedState &state, std::span<const ModeLabel> port,
                                                    double p_dc) {
    std::vector<std::pair<double, PureState>> out;
    for (const auto &c : state.components()) {
        const auto &reg = *c.state.registry();
        std::vector<size_t> idx;
        for (const auto &m : port) {
            idx.push_back(reg.index_of(m));
        }
        std::map<int, std::vector<PureState::Entry>> by_total;
        for (const auto &e : c.state.entries()) {
            int photons = 0;
            for (auto i : idx) {
                photons += reg.occupation(e.first, i);
            }
            by_total[photons].push_back(e);
        }
        for (auto &[photons, entries] : by_total) {
            PureState branch(c.state.registry(), std::move(entries));
            double click = photons > 0 ? 1.0 : p_dc;
            double w = c.weight * branch.norm_squared() * click;
            if (w > 0) {
                out.emplace_back(w, branch.normalized());
            }
        }
    }
    return out;
}

double memory_fidelity(double pc, double eta_prime, double p_dc, Complex alpha, Complex beta) {
    // Two excitations per source can put four photons on one analyzer mode.
    auto layout = MemoryLayout::build(5);
    auto state = encode_spatial(pre_herald_state(pc, 2, layout), alpha, beta, layout);
    for (const auto &e : bsm_elements(layout)) {
        state = apply_unitary(state, e);
    }
    MixedState lossy = MixedState::pure(state);
    for (const auto &d : layout.detectors) {
        lossy = apply_loss(lossy, d, eta_prime);
    }
    auto target = logical_state(layout.logical_map(), layout.atomic_registry, alpha, beta);
    std::array<ModeLabel, 2> atoms{layout.s_l, layout.s_r};

    double weight = 0;
    double weighted_f = 0;
    for (const auto &c : lossy.components()) {
        for (const auto &[pattern, branch] : split_by_pattern(c.state, layout.detectors)) {
            double q = c.weight * branch.norm_squared();
            if (q == 0) {
                continue;
            }
            auto atomic = partial_trace(branch, atoms);
            for (size_t k = 0; k < 4; ++k) {
                // Exactly detector k clicks.
                double p = 1.0;
                for (size_t i = 0; i < 4; ++i) {
                    double click = pattern[i] > 0 ? 1.0 : p_dc;
                    p *= (i == k) ? click : 1.0 - click;
                }
                if (p == 0) {
                    continue;
                }
                ClickPattern clicks{};
                clicks[k] = true;
                auto corrected = apply_logical_pauli(atomic, pauli_mark(classify(clicks)), layout.logical_map());
                weight += q * p;
                weighted_f += q * p * fidelity_mixed(corrected, target);
            }
        }
    }
    return weight > 0 ? weighted_f / weight : 0.0;
}

}  // namespace

void NoiseParams::validate() const {
    auto unit = [](double v) {
        return v >= 0.0 && v <= 1.0;
    };
    if (!(pc > 0.0 && pc < 0.5)) {
        throw std::invalid_argument("pc must lie in (0, 0.5)");
    }
    if (!unit(chi)) {
        throw std::invalid_argument("chi must lie in [0, 1]");
    }
    if (!unit(eta_d)) {
        throw std::invalid_argument("eta_d must lie in [0, 1]");
    }
    if (!unit(p_dc)) {
        throw std::invalid_argument("p_dc must lie in [0, 1]");
    }
    if (!(L0 >= 0.0)) {
        throw std::invalid_argument("L0 must be >= 0");
    }
    if (!(L_att > 0.0)) {
        throw std::invalid_argument("L_att must be > 0");
    }
    if (!(f_p > 0.0)) {
        throw std::invalid_argument("f_p must be > 0");
    }
}

double NoiseParams::channel_transmission() const {
    return std::exp(-L0 / L_att);
}

double NoiseParams::eta_prime() const {
    return chi * eta_d * channel_transmission();
}

double p1_analytic(const NoiseParams &n) {
    return 2.0 * n.pc * n.chi * n.eta_d * n.channel_transmission();
}

double p0_analytic(const NoiseParams &n) {
    double denom = n.pc * n.eta_prime();
    if (!(denom > 0)) {
        throw std::domain_error("p0_analytic: pc * eta' must be positive");
    }
    return n.p_dc / denom;
}

double po_analytic(const NoiseParams &n, int excitations) {
    if (excitations < 1) {
        throw std::invalid_argument("po_analytic: excitations must be >= 1");
    }
    return std::pow(n.pc, excitations) * n.chi * (1.0 - n.eta_d) * n.channel_transmission();
}

double preparation_time(double p1, double f_p) {
    if (!(p1 > 0) || !(f_p > 0)) {
        throw std::domain_error("preparation_time: p1 and f_p must be positive");
    }
    return 1.0 / (p1 * f_p);
}

std::vector<std::pair<double, double>> fidelity_vs_T(double eta_prime, double f_p, std::span<const double> T_values) {
    if (!(eta_prime > 0) || !(f_p > 0)) {
        throw std::invalid_argument("fidelity_vs_T: eta' and f_p must be positive");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(T_values.size());
    for (double T : T_values) {
        if (!(T > 0)) {
            throw std::invalid_argument("fidelity_vs_T: T must be positive");
        }
        double pc = 1.0 / (2.0 * eta_prime * f_p * T);
        out.emplace_back(T, std::clamp(1.0 - pc, 0.0, 1.0));
    }
    return out;
}

std::vector<std::pair<double, double>> dF_vs_eta(double T, double f_p, std::span<const double> eta_values) {
    if (!(T > 0) || !(f_p > 0)) {
        throw std::invalid_argument("dF_vs_eta: T and f_p must be positive");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(eta_values.size());
    for (double eta : eta_values) {
        if (!(eta > 0)) {
            throw std::invalid_argument("dF_vs_eta: eta' must be positive");
        }
        out.emplace_back(eta, 1.0 / (2.0 * eta * f_p * T));
    }
    return out;
}

MixedState build_mixed_state(double p0, double p1, const std::vector<std::pair<double, PureState>> &po_components,
                             const PureState &ideal, const PureState &vac) {
    double total = p0 + p1;
    for (const auto &[w, s] : po_components) {
        total += w;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw std::invalid_argument("build_mixed_state: p0 + p1 + sum(po) must equal 1");
    }
    std::vector<MixedComponent> comps;
    if (p0 > 0) {
        comps.push_back({p0, vac.normalized()});
    }
    if (p1 > 0) {
        comps.push_back({p1, ideal.normalized()});
    }
    for (const auto &[w, s] : po_components) {
        if (w > 0) {
            comps.push_back({w, s.normalized()});
        }
    }
    return MixedState(std::move(comps));
}

MixedState apply_loss(const PureState &state, const ModeLabel &mode, double survival) {
    if (!(survival >= 0.0 && survival <= 1.0)) {
        throw std::invalid_argument("apply_loss: survival must lie in [0, 1]");
    }
    const auto &reg = *state.registry();
    reg.index_of(mode);
    auto labels = reg.labels();
    auto loss = fresh_loss_mode(reg, mode);
    labels.push_back(loss);
    auto extended = register_modes(labels, reg.truncation());

    const double t = std::sqrt(survival);
    const double r = std::sqrt(1.0 - survival);
    ComplexMatrix m(2, 2);
    m << t, -r, r, t;
    auto coupled = apply_unitary(embed(state, extended), OpticalElement("loss", {mode, loss}, std::move(m)));
    return partial_trace(coupled, reg.labels());
}

MixedState apply_loss(const MixedState &state, const ModeLabel &mode, double survival) {
    std::vector<MixedComponent> comps;
    for (const auto &c : state.components()) {
        auto reduced = apply_loss(c.state, mode, survival);
        for (const auto &r : reduced.components()) {
            comps.push_back({c.weight * r.weight, r.state});
        }
    }
    return MixedState(std::move(comps));
}

FidelityReport end_to_end_fidelity(double pc, const NoiseParams &noise, Complex alpha, Complex beta) {
    NoiseParams n = noise;
    n.pc = pc;
    n.validate();

    FidelityReport report;
    report.eta_prime = n.eta_prime();

    auto layout = MemoryLayout::build(3);
    MixedState state = MixedState::pure(pre_herald_state(pc, 2, layout));
    state = apply_loss(state, layout.arm_a_h, report.eta_prime);
    state = apply_loss(state, layout.arm_a_v, report.eta_prime);

    std::array<ModeLabel, 2> port{layout.arm_a_h, layout.arm_a_v};
    auto heralded = herald_on(state, port, n.p_dc);
    double herald = 0;
    for (const auto &[w, s] : heralded) {
        herald += w;
    }
    if (!(herald > 0)) {
        throw std::domain_error("end_to_end_fidelity: herald probability is zero");
    }
    std::vector<MixedComponent> comps;
    for (const auto &[w, s] : heralded) {
        comps.push_back({w / herald, s});
    }
    MixedState rho(std::move(comps));

    report.herald_probability = herald;
    report.p1 = fidelity_mixed(rho, ideal_entangled_state(layout));
    report.p0 = fidelity_mixed(rho, vacuum(layout.registry));
    report.po = std::max(0.0, 1.0 - report.p0 - report.p1);
    report.F = report.p1;
    report.delta_F = 1.0 - report.F;
    report.T_seconds = preparation_time(herald, n.f_p);
    report.memory_F = memory_fidelity(pc, report.eta_prime, n.p_dc, alpha, beta);

    report.analytic.p1 = p1_analytic(n);
    report.analytic.p0 = report.eta_prime > 0 ? p0_analytic(n) : 0.0;
    report.analytic.po = po_analytic(n, 2);
    report.analytic.T_seconds = report.analytic.p1 > 0 ? preparation_time(report.analytic.p1, n.f_p) : 0.0;
    report.analytic.delta_F = pc;
    return report;
}

}  // namespace dfsmem
