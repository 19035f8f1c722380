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

#include "dfsmem/fock.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dfsmem {

namespace {

void require_same_registry(const RegistryPtr &a, const RegistryPtr &b, const char *op) {
    if (!same_registry(a, b)) {
        throw std::invalid_argument(std::string(op) + ": states live on different mode registries");
    }
}

std::vector<PureState::Entry> canonicalize(std::vector<PureState::Entry> entries, double drop_below) {
    std::sort(entries.begin(), entries.end(), [](const auto &x, const auto &y) {
        return x.first < y.first;
    });
    std::vector<PureState::Entry> out;
    out.reserve(entries.size());
    for (const auto &e : entries) {
        if (!out.empty() && out.back().first == e.first) {
            out.back().second += e.second;
        } else {
            out.push_back(e);
        }
    }
    std::erase_if(out, [&](const auto &e) {
        return std::abs(e.second) <= drop_below;
    });
    return out;
}

PureState from_map(const RegistryPtr &registry, const std::map<BasisIndex, Complex> &amps, double drop_below) {
    std::vector<PureState::Entry> entries;
    entries.reserve(amps.size());
    for (const auto &[k, v] : amps) {
        if (std::abs(v) > drop_below) {
            entries.emplace_back(k, v);
        }
    }
    return PureState(registry, std::move(entries));
}

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

std::vector<size_t> resolve_modes(const ModeRegistry &registry, std::span<const ModeLabel> modes) {
    std::vector<size_t> out;
    out.reserve(modes.size());
    for (const auto &m : modes) {
        out.push_back(registry.index_of(m));
    }
    return out;
}

}  // namespace

std::string to_string(Polarization p) {
    switch (p) {
        case Polarization::H:
            return "H";
        case Polarization::V:
            return "V";
        case Polarization::Lcirc:
            return "L";
        case Polarization::Rcirc:
            return "R";
    }
    return "?";
}

ModeLabel ModeLabel::atomic(std::string subsystem) {
    return ModeLabel{std::move(subsystem), ModeKind::AtomicCollective, std::nullopt, std::nullopt};
}

ModeLabel ModeLabel::photon(Polarization polarization, std::string path, std::string subsystem) {
    return ModeLabel{std::move(subsystem), ModeKind::Photonic, polarization, std::move(path)};
}

ModeLabel ModeLabel::with_polarization(Polarization p) const {
    if (kind != ModeKind::Photonic) {
        throw std::invalid_argument("with_polarization on non-photonic mode " + str());
    }
    ModeLabel copy = *this;
    copy.polarization = p;
    return copy;
}

std::string ModeLabel::str() const {
    if (kind == ModeKind::AtomicCollective) {
        return subsystem;
    }
    std::string out = subsystem + "[" + (polarization ? to_string(*polarization) : "?");
    out += "@" + path.value_or("?") + "]";
    return out;
}

TruncationOverflow::TruncationOverflow(const std::string &what, double lost_probability)
    : std::runtime_error(what), lost_probability_(lost_probability) {
}

ModeRegistry::ModeRegistry(std::vector<ModeLabel> labels, int truncation)
    : labels_(std::move(labels)), truncation_(truncation), dimension_(1) {
    if (truncation_ < 2) {
        throw std::invalid_argument("truncation must be >= 2, got " + std::to_string(truncation_));
    }
    for (size_t i = 0; i < labels_.size(); ++i) {
        const auto &l = labels_[i];
        bool photonic = l.kind == ModeKind::Photonic;
        if (photonic != l.polarization.has_value() || photonic != l.path.has_value()) {
            throw std::invalid_argument(
                "mode " + l.str() + ": photonic labels need polarization and path, atomic labels neither");
        }
        for (size_t j = 0; j < i; ++j) {
            if (labels_[j] == l) {
                throw std::invalid_argument("duplicate mode label " + l.str());
            }
        }
    }
    strides_.reserve(labels_.size());
    const auto d = static_cast<BasisIndex>(truncation_);
    for (size_t i = 0; i < labels_.size(); ++i) {
        strides_.push_back(dimension_);
        if (dimension_ > std::numeric_limits<BasisIndex>::max() / d) {
            throw std::invalid_argument("basis dimension overflows 64-bit index");
        }
        dimension_ *= d;
    }
}

std::optional<size_t> ModeRegistry::find(const ModeLabel &label) const {
    for (size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

size_t ModeRegistry::index_of(const ModeLabel &label) const {
    auto i = find(label);
    if (!i) {
        throw std::invalid_argument("mode " + label.str() + " is not registered");
    }
    return *i;
}

BasisIndex ModeRegistry::encode(std::span<const int> occupation) const {
    if (occupation.size() != labels_.size()) {
        throw std::invalid_argument("occupation vector length does not match mode count");
    }
    BasisIndex index = 0;
    for (size_t i = 0; i < occupation.size(); ++i) {
        if (occupation[i] < 0 || occupation[i] >= truncation_) {
            throw std::invalid_argument(
                "occupation " + std::to_string(occupation[i]) + " on " + labels_[i].str() + " outside truncation");
        }
        index += static_cast<BasisIndex>(occupation[i]) * strides_[i];
    }
    return index;
}

Occupation ModeRegistry::decode(BasisIndex index) const {
    Occupation occ(labels_.size());
    const auto d = static_cast<BasisIndex>(truncation_);
    for (size_t i = 0; i < labels_.size(); ++i) {
        occ[i] = static_cast<int>(index % d);
        index /= d;
    }
    return occ;
}

RegistryPtr register_modes(std::vector<ModeLabel> labels, int truncation) {
    return std::make_shared<const ModeRegistry>(std::move(labels), truncation);
}

bool same_registry(const RegistryPtr &a, const RegistryPtr &b) {
    return a == b || (a && b && *a == *b);
}

PureState::PureState(RegistryPtr registry) : registry_(std::move(registry)) {
    if (!registry_) {
        throw std::invalid_argument("PureState needs a registry");
    }
}

PureState::PureState(RegistryPtr registry, std::vector<Entry> entries) : PureState(std::move(registry)) {
    for (const auto &e : entries) {
        if (e.first >= registry_->dimension()) {
            throw std::invalid_argument("basis index outside registry dimension");
        }
    }
    entries_ = canonicalize(std::move(entries), 0.0);
}

Complex PureState::amplitude(std::span<const int> occupation) const {
    return amplitude_at(registry_->encode(occupation));
}

Complex PureState::amplitude_at(BasisIndex index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index, [](const Entry &e, BasisIndex k) {
        return e.first < k;
    });
    if (it != entries_.end() && it->first == index) {
        return it->second;
    }
    return 0.0;
}

double PureState::norm_squared() const {
    double total = 0;
    for (const auto &e : entries_) {
        total += std::norm(e.second);
    }
    return total;
}

double PureState::norm() const {
    return std::sqrt(norm_squared());
}

PureState PureState::normalized() const {
    double n = norm();
    if (n == 0) {
        throw std::domain_error("cannot normalize the zero state");
    }
    return scaled(1.0 / n);
}

PureState PureState::scaled(Complex factor) const {
    std::vector<Entry> out(entries_.begin(), entries_.end());
    for (auto &e : out) {
        e.second *= factor;
    }
    return PureState(registry_, std::move(out));
}

PureState PureState::operator+(const PureState &other) const {
    require_same_registry(registry_, other.registry_, "operator+");
    std::vector<Entry> out(entries_.begin(), entries_.end());
    out.insert(out.end(), other.entries_.begin(), other.entries_.end());
    return PureState(registry_, std::move(out));
}

PureState PureState::operator-(const PureState &other) const {
    return *this + other.scaled(-1.0);
}

MixedState::MixedState(std::vector<MixedComponent> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw std::invalid_argument("MixedState needs at least one component");
    }
    double total = 0;
    for (const auto &c : components_) {
        require_same_registry(components_.front().state.registry(), c.state.registry(), "MixedState");
        if (c.weight < 0 || c.weight > 1 + kNormTolerance) {
            throw std::invalid_argument("MixedState weight outside [0,1]");
        }
        if (std::abs(c.state.norm_squared() - 1.0) > kNormTolerance) {
            throw std::invalid_argument("MixedState component is not normalized");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "MixedState weights sum to " << total << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
}

MixedState MixedState::pure(const PureState &state) {
    return MixedState({MixedComponent{1.0, state.normalized()}});
}

MixedState MixedState::from_branches(const std::vector<PureState> &branches) {
    double total = total_weight(branches);
    if (total <= 0) {
        throw std::domain_error("all branches are zero; no state to build");
    }
    std::vector<MixedComponent> comps;
    for (const auto &b : branches) {
        double w = b.norm_squared();
        if (w > 0) {
            comps.push_back({w / total, b.scaled(1.0 / std::sqrt(w))});
        }
    }
    return MixedState(std::move(comps));
}

double MixedState::weight_sum() const {
    double total = 0;
    for (const auto &c : components_) {
        total += c.weight;
    }
    return total;
}

MixedState mix(const std::vector<std::pair<double, MixedState>> &parts) {
    double total = 0;
    for (const auto &[w, m] : parts) {
        total += w;
    }
    if (!(total > 0)) {
        throw std::domain_error("mix: total weight is zero");
    }
    std::vector<MixedComponent> comps;
    for (const auto &[w, m] : parts) {
        if (w <= 0) {
            continue;
        }
        for (const auto &c : m.components()) {
            comps.push_back({w / total * c.weight, c.state});
        }
    }
    return MixedState(std::move(comps));
}

double total_weight(const std::vector<PureState> &branches) {
    double total = 0;
    for (const auto &b : branches) {
        total += b.norm_squared();
    }
    return total;
}

OpticalElement::OpticalElement(std::string name, std::vector<ModeLabel> modes, ComplexMatrix matrix)
    : name_(std::move(name)), modes_(std::move(modes)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(modes_.size());
    if (n == 0 || matrix_.rows() != n || matrix_.cols() != n) {
        throw std::invalid_argument(name_ + ": matrix size must match the acted mode count");
    }
    for (size_t i = 0; i < modes_.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            if (modes_[i] == modes_[j]) {
                throw std::invalid_argument(name_ + ": mode collision on " + modes_[i].str());
            }
        }
    }
    ComplexMatrix defect = matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(n, n);
    if (defect.cwiseAbs().maxCoeff() > kNormTolerance) {
        throw std::invalid_argument(name_ + ": single-particle matrix is not unitary");
    }
}

PureState vacuum(const RegistryPtr &registry) {
    return PureState(registry, {{0, Complex(1.0)}});
}

PureState basis_state(const RegistryPtr &registry, std::span<const int> occupation) {
    return PureState(registry, {{registry->encode(occupation), Complex(1.0)}});
}

PureState apply_creation(const PureState &state, const ModeLabel &mode) {
    const auto &reg = *state.registry();
    size_t m = reg.index_of(mode);
    const int d = reg.truncation();
    std::vector<PureState::Entry> out;
    double lost = 0;
    for (const auto &[idx, amp] : state.entries()) {
        int n = reg.occupation(idx, m);
        Complex a = amp * std::sqrt(static_cast<double>(n + 1));
        if (n + 1 >= d) {
            lost += std::norm(a);
            continue;
        }
        out.emplace_back(idx + reg.stride(m), a);
    }
    if (lost > 0) {
        throw TruncationOverflow("creation on " + mode.str() + " exceeds truncation", lost);
    }
    return PureState(state.registry(), std::move(out));
}

PureState apply_unitary(const PureState &state, const OpticalElement &element) {
    const auto &reg = *state.registry();
    const std::vector<size_t> acted = resolve_modes(reg, element.modes());
    const auto &u = element.matrix();
    const int d = reg.truncation();
    const size_t k = acted.size();

    // Nonzero entries of each column, so permutation-like elements stay cheap.
    std::vector<std::vector<std::pair<size_t, Complex>>> columns(k);
    for (size_t j = 0; j < k; ++j) {
        for (size_t r = 0; r < k; ++r) {
            Complex v = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
            if (v != Complex(0.0)) {
                columns[j].emplace_back(r, v);
            }
        }
    }

    std::map<BasisIndex, Complex> result;
    std::map<std::pair<BasisIndex, Occupation>, Complex> overflow;

    std::vector<size_t> photons;
    Occupation out_occ(k);
    for (const auto &[idx, amp] : state.entries()) {
        photons.clear();
        BasisIndex base = idx;
        double in_factorials = 1;
        for (size_t j = 0; j < k; ++j) {
            int n = reg.occupation(idx, acted[j]);
            base -= static_cast<BasisIndex>(n) * reg.stride(acted[j]);
            in_factorials *= factorial(n);
            for (int p = 0; p < n; ++p) {
                photons.push_back(j);
            }
        }
        if (photons.empty()) {
            result[idx] += amp;
            continue;
        }

        // Expand prod_p (sum_r U(r, j_p) a_r^+) over all output routings.
        std::map<Occupation, Complex> terms;
        std::fill(out_occ.begin(), out_occ.end(), 0);
        auto expand = [&](auto &self, size_t p, Complex coef) -> void {
            if (p == photons.size()) {
                terms[out_occ] += coef;
                return;
            }
            for (const auto &[r, v] : columns[photons[p]]) {
                ++out_occ[r];
                self(self, p + 1, coef * v);
                --out_occ[r];
            }
        };
        expand(expand, 0, amp);

        for (const auto &[occ, coef] : terms) {
            double out_factorials = 1;
            bool fits = true;
            for (size_t r = 0; r < k; ++r) {
                out_factorials *= factorial(occ[r]);
                fits = fits && occ[r] < d;
            }
            Complex value = coef * std::sqrt(out_factorials / in_factorials);
            if (!fits) {
                overflow[{base, occ}] += value;
                continue;
            }
            BasisIndex target = base;
            for (size_t r = 0; r < k; ++r) {
                target += static_cast<BasisIndex>(occ[r]) * reg.stride(acted[r]);
            }
            result[target] += value;
        }
    }

    double lost = 0;
    for (const auto &[key, v] : overflow) {
        if (std::abs(v) > kPruneThreshold) {
            lost += std::norm(v);
        }
    }
    if (lost > 0) {
        std::ostringstream msg;
        msg << element.name() << ": output exceeds truncation d=" << d << " (lost probability " << lost << ")";
        throw TruncationOverflow(msg.str(), lost);
    }
    return from_map(state.registry(), result, kPruneThreshold);
}

MixedState apply_unitary(const MixedState &state, const OpticalElement &element) {
    std::vector<MixedComponent> comps;
    comps.reserve(state.components().size());
    for (const auto &c : state.components()) {
        comps.push_back({c.weight, apply_unitary(c.state, element).normalized()});
    }
    return MixedState(std::move(comps));
}

Complex inner(const PureState &s, const PureState &t) {
    require_same_registry(s.registry(), t.registry(), "inner");
    Complex total = 0;
    auto a = s.entries();
    auto b = t.entries();
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            total += std::conj(b[j].second) * a[i].second;
            ++i;
            ++j;
        }
    }
    return total;
}

double fidelity_pure(const PureState &s, const PureState &t) {
    return std::norm(inner(s, t));
}

double fidelity_mixed(const MixedState &rho, const PureState &t) {
    double total = 0;
    for (const auto &c : rho.components()) {
        total += c.weight * fidelity_pure(c.state, t);
    }
    return total;
}

std::pair<PureState, double> project_occupation(const PureState &state, const ModeLabel &mode, int n) {
    const auto &reg = *state.registry();
    if (n < 0 || n >= reg.truncation()) {
        throw std::invalid_argument("projection occupation outside truncation");
    }
    size_t m = reg.index_of(mode);
    std::vector<PureState::Entry> kept;
    for (const auto &e : state.entries()) {
        if (reg.occupation(e.first, m) == n) {
            kept.push_back(e);
        }
    }
    PureState out(state.registry(), std::move(kept));
    double p = out.norm_squared();
    return {std::move(out), p};
}

PatternProbabilities born_probabilities(const PureState &state, std::span<const ModeLabel> modes) {
    const auto &reg = *state.registry();
    auto idx = resolve_modes(reg, modes);
    PatternProbabilities out;
    Occupation pattern(idx.size());
    for (const auto &[k, amp] : state.entries()) {
        for (size_t i = 0; i < idx.size(); ++i) {
            pattern[i] = reg.occupation(k, idx[i]);
        }
        out[pattern] += std::norm(amp);
    }
    return out;
}

PatternProbabilities born_probabilities(const MixedState &state, std::span<const ModeLabel> modes) {
    PatternProbabilities out;
    for (const auto &c : state.components()) {
        for (const auto &[pattern, p] : born_probabilities(c.state, modes)) {
            out[pattern] += c.weight * p;
        }
    }
    return out;
}

std::map<Occupation, PureState> split_by_pattern(const PureState &state, std::span<const ModeLabel> modes) {
    const auto &reg = *state.registry();
    auto idx = resolve_modes(reg, modes);
    std::map<Occupation, std::vector<PureState::Entry>> groups;
    Occupation pattern(idx.size());
    for (const auto &e : state.entries()) {
        for (size_t i = 0; i < idx.size(); ++i) {
            pattern[i] = reg.occupation(e.first, idx[i]);
        }
        groups[pattern].push_back(e);
    }
    std::map<Occupation, PureState> out;
    for (auto &[p, entries] : groups) {
        out.emplace(p, PureState(state.registry(), std::move(entries)));
    }
    return out;
}

MixedState partial_trace(const PureState &state, std::span<const ModeLabel> keep) {
    const auto &reg = *state.registry();
    auto kept_idx = resolve_modes(reg, keep);
    auto reduced = register_modes(std::vector<ModeLabel>(keep.begin(), keep.end()), reg.truncation());

    std::vector<bool> is_kept(reg.mode_count(), false);
    for (auto i : kept_idx) {
        is_kept[i] = true;
    }

    // Group amplitudes by the occupation of the traced-out modes.
    std::map<BasisIndex, std::vector<PureState::Entry>> groups;
    for (const auto &[k, amp] : state.entries()) {
        BasisIndex traced = k;
        BasisIndex kept = 0;
        for (size_t i = 0; i < kept_idx.size(); ++i) {
            int n = reg.occupation(k, kept_idx[i]);
            traced -= static_cast<BasisIndex>(n) * reg.stride(kept_idx[i]);
            kept += static_cast<BasisIndex>(n) * reduced->stride(i);
        }
        groups[traced].emplace_back(kept, amp);
    }
    std::vector<PureState> branches;
    branches.reserve(groups.size());
    for (auto &[traced, entries] : groups) {
        branches.emplace_back(reduced, std::move(entries));
    }
    return MixedState::from_branches(branches);
}

MixedState partial_trace(const MixedState &state, std::span<const ModeLabel> keep) {
    std::vector<MixedComponent> comps;
    for (const auto &c : state.components()) {
        auto reduced = partial_trace(c.state, keep);
        for (const auto &r : reduced.components()) {
            comps.push_back({c.weight * r.weight, r.state});
        }
    }
    return MixedState(std::move(comps));
}

PureState embed(const PureState &state, const RegistryPtr &target) {
    const auto &src = *state.registry();
    std::vector<size_t> map;
    map.reserve(src.mode_count());
    for (const auto &l : src.labels()) {
        map.push_back(target->index_of(l));
    }
    std::vector<PureState::Entry> out;
    out.reserve(state.nonzero_count());
    for (const auto &[k, amp] : state.entries()) {
        BasisIndex t = 0;
        for (size_t i = 0; i < map.size(); ++i) {
            int n = src.occupation(k, i);
            if (n >= target->truncation()) {
                throw TruncationOverflow("embed: occupation exceeds target truncation", std::norm(amp));
            }
            t += static_cast<BasisIndex>(n) * target->stride(map[i]);
        }
        out.emplace_back(t, amp);
    }
    return PureState(target, std::move(out));
}

MixedState embed(const MixedState &state, const RegistryPtr &target) {
    std::vector<MixedComponent> comps;
    for (const auto &c : state.components()) {
        comps.push_back({c.weight, embed(c.state, target)});
    }
    return MixedState(std::move(comps));
}

PureState combine_disjoint(const PureState &a, const PureState &b) {
    require_same_registry(a.registry(), b.registry(), "combine_disjoint");
    const auto &reg = *a.registry();
    std::vector<PureState::Entry> out;
    out.reserve(a.nonzero_count() * b.nonzero_count());
    for (const auto &[ka, va] : a.entries()) {
        for (const auto &[kb, vb] : b.entries()) {
            for (size_t m = 0; m < reg.mode_count(); ++m) {
                if (reg.occupation(ka, m) != 0 && reg.occupation(kb, m) != 0) {
                    throw std::invalid_argument("combine_disjoint: both states occupy " + reg.label(m).str());
                }
            }
            out.emplace_back(ka + kb, va * vb);
        }
    }
    return PureState(a.registry(), std::move(out));
}

}  // namespace dfsmem
