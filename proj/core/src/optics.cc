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

#include "dfsmem/optics.h"

#include <cmath>

namespace dfsmem {

namespace {

// Element whose single-particle matrix sends mode j to mode image[j].
OpticalElement permutation(std::string name, std::vector<ModeLabel> modes, const std::vector<size_t> &image) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (size_t j = 0; j < image.size(); ++j) {
        m(static_cast<Eigen::Index>(image[j]), static_cast<Eigen::Index>(j)) = 1.0;
    }
    return OpticalElement(std::move(name), std::move(modes), std::move(m));
}

}  // namespace

OpticalElement qwp(const ModeLabel &in_rcirc, const ModeLabel &in_lcirc, const ModeLabel &out_h,
                   const ModeLabel &out_v) {
    return permutation("qwp", {in_rcirc, in_lcirc, out_h, out_v}, {2, 3, 0, 1});
}

OpticalElement pbs(const ModeLabel &in1_h, const ModeLabel &in1_v, const ModeLabel &in2_h, const ModeLabel &in2_v,
                   const ModeLabel &out1_h, const ModeLabel &out1_v, const ModeLabel &out2_h,
                   const ModeLabel &out2_v) {
    // 0:in1H 1:in1V 2:in2H 3:in2V 4:out1H 5:out1V 6:out2H 7:out2V
    return permutation("pbs", {in1_h, in1_v, in2_h, in2_v, out1_h, out1_v, out2_h, out2_v},
                       {4, 7, 6, 5, 0, 3, 2, 1});
}

OpticalElement hwp(const ModeLabel &mode_h, const ModeLabel &mode_v) {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(2, 2);
    m << s, s, s, -s;
    return OpticalElement("hwp", {mode_h, mode_v}, std::move(m));
}

OpticalElement pol_rotator(const ModeLabel &mode_h, const ModeLabel &mode_v) {
    return permutation("rotator", {mode_h, mode_v}, {1, 0});
}

OpticalElement mz_split(const ModeLabel &in_mode, const ModeLabel &out_a, const ModeLabel &out_b, Complex alpha,
                        Complex beta) {
    double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > 1e-9) {
        throw std::invalid_argument("mz_split: |alpha|^2 + |beta|^2 must be 1 within 1e-9");
    }
    double n = std::sqrt(n2);
    alpha /= n;
    beta /= n;

    bool two_port = in_mode.path == out_a.path && in_mode.subsystem == out_a.subsystem;
    const size_t ports = two_port ? 2 : 3;
    ComplexMatrix block = ComplexMatrix::Zero(static_cast<Eigen::Index>(ports), static_cast<Eigen::Index>(ports));
    if (two_port) {
        // basis (a, b)
        block << alpha, -std::conj(beta), beta, std::conj(alpha);
    } else {
        // basis (in, a, b): in -> alpha a + beta b, b -> -conj(beta) a + conj(alpha) b, a -> in
        block(1, 0) = alpha;
        block(2, 0) = beta;
        block(0, 1) = 1.0;
        block(1, 2) = -std::conj(beta);
        block(2, 2) = std::conj(alpha);
    }

    std::vector<ModeLabel> modes;
    for (auto pol : {Polarization::H, Polarization::V}) {
        if (!two_port) {
            modes.push_back(in_mode.with_polarization(pol));
        }
        modes.push_back(out_a.with_polarization(pol));
        modes.push_back(out_b.with_polarization(pol));
    }
    const auto p = static_cast<Eigen::Index>(ports);
    ComplexMatrix m = ComplexMatrix::Zero(2 * p, 2 * p);
    m.topLeftCorner(p, p) = block;
    m.bottomRightCorner(p, p) = block;
    return OpticalElement("mz_split", std::move(modes), std::move(m));
}

OpticalElement bs50(const ModeLabel &mode_1, const ModeLabel &mode_2) {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(2, 2);
    m << s, s, s, -s;
    return OpticalElement("bs50", {mode_1, mode_2}, std::move(m));
}

OpticalElement mode_swap(const ModeLabel &a, const ModeLabel &b) {
    return permutation("swap", {a, b}, {1, 0});
}

OpticalElement phase_shift(std::span<const ModeLabel> modes, std::span<const double> phases) {
    if (modes.size() != phases.size()) {
        throw std::invalid_argument("phase_shift: one phase per mode");
    }
    const auto n = static_cast<Eigen::Index>(modes.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = std::polar(1.0, phases[static_cast<size_t>(i)]);
    }
    return OpticalElement("phase", std::vector<ModeLabel>(modes.begin(), modes.end()), std::move(m));
}

}  // namespace dfsmem
