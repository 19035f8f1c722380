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

#ifndef DFSMEM_FOCK_H
#define DFSMEM_FOCK_H

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dfsmem {

using Complex = std::complex<double>;
using BasisIndex = std::uint64_t;
using Occupation = std::vector<int>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Amplitudes with magnitude below this are dropped after every unitary.
inline constexpr double kPruneThreshold = 1e-15;
/// Tolerance used for normalization and unitarity contracts.
inline constexpr double kNormTolerance = 1e-12;

enum class ModeKind { AtomicCollective, Photonic };
enum class Polarization { H, V, Lcirc, Rcirc };

std::string to_string(Polarization p);

/// Names one bosonic mode. Atomic collective modes carry only a subsystem
/// name; photonic modes additionally carry a polarization and a spatial path.
struct ModeLabel {
    std::string subsystem;
    ModeKind kind = ModeKind::Photonic;
    std::optional<Polarization> polarization;
    std::optional<std::string> path;

    static ModeLabel atomic(std::string subsystem);
    static ModeLabel photon(Polarization polarization, std::string path, std::string subsystem = "photon");

    /// Same spatial mode, different polarization. Only valid on photonic labels.
    ModeLabel with_polarization(Polarization p) const;
    std::string str() const;

    bool operator==(const ModeLabel &other) const = default;
};

/// Thrown when an operation would populate an occupation above d-1.
class TruncationOverflow : public std::runtime_error {
   public:
    TruncationOverflow(const std::string &what, double lost_probability);
    /// Total squared amplitude that would have been clipped.
    double lost_probability() const {
        return lost_probability_;
    }

   private:
    double lost_probability_;
};

/// Fixed, ordered set of modes with a common truncation d (occupations 0..d-1).
/// Basis states are indexed in mixed radix with mode i having stride d^i.
class ModeRegistry {
   public:
    ModeRegistry(std::vector<ModeLabel> labels, int truncation);

    size_t mode_count() const {
        return labels_.size();
    }
    int truncation() const {
        return truncation_;
    }
    BasisIndex dimension() const {
        return dimension_;
    }
    const std::vector<ModeLabel> &labels() const {
        return labels_;
    }
    const ModeLabel &label(size_t mode) const {
        return labels_.at(mode);
    }
    BasisIndex stride(size_t mode) const {
        return strides_[mode];
    }

    std::optional<size_t> find(const ModeLabel &label) const;
    size_t index_of(const ModeLabel &label) const;
    bool contains(const ModeLabel &label) const {
        return find(label).has_value();
    }

    BasisIndex encode(std::span<const int> occupation) const;
    Occupation decode(BasisIndex index) const;
    int occupation(BasisIndex index, size_t mode) const {
        return static_cast<int>((index / strides_[mode]) % static_cast<BasisIndex>(truncation_));
    }

    bool operator==(const ModeRegistry &other) const {
        return truncation_ == other.truncation_ && labels_ == other.labels_;
    }

   private:
    std::vector<ModeLabel> labels_;
    std::vector<BasisIndex> strides_;
    int truncation_;
    BasisIndex dimension_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

RegistryPtr register_modes(std::vector<ModeLabel> labels, int truncation);

/// Sparse amplitude table over a registry's Fock basis. Entries are kept sorted
/// by basis index with no duplicates. Need not be normalized (projections
/// return unnormalized states).
class PureState {
   public:
    using Entry = std::pair<BasisIndex, Complex>;

    explicit PureState(RegistryPtr registry);
    /// Duplicate indices are summed; exact zeros are dropped.
    PureState(RegistryPtr registry, std::vector<Entry> entries);

    const RegistryPtr &registry() const {
        return registry_;
    }
    std::span<const Entry> entries() const {
        return entries_;
    }
    size_t nonzero_count() const {
        return entries_.size();
    }
    bool is_zero() const {
        return entries_.empty();
    }

    Complex amplitude(std::span<const int> occupation) const;
    Complex amplitude_at(BasisIndex index) const;

    double norm_squared() const;
    double norm() const;
    PureState normalized() const;
    PureState scaled(Complex factor) const;

    PureState operator+(const PureState &other) const;
    PureState operator-(const PureState &other) const;

   private:
    RegistryPtr registry_;
    std::vector<Entry> entries_;
};

struct MixedComponent {
    double weight;
    PureState state;
};

/// Weighted ensemble of normalized pure states; weights sum to one.
class MixedState {
   public:
    explicit MixedState(std::vector<MixedComponent> components);

    static MixedState pure(const PureState &state);
    /// Builds an ensemble from unnormalized branches, weighting each by its
    /// squared norm and renormalizing the total. Zero branches are skipped.
    static MixedState from_branches(const std::vector<PureState> &branches);

    const std::vector<MixedComponent> &components() const {
        return components_;
    }
    const RegistryPtr &registry() const {
        return components_.front().state.registry();
    }
    double weight_sum() const;

   private:
    std::vector<MixedComponent> components_;
};

/// Convex combination of ensembles; weights are renormalized to sum to one.
MixedState mix(const std::vector<std::pair<double, MixedState>> &parts);

/// Total squared norm of a set of unnormalized branches.
double total_weight(const std::vector<PureState> &branches);

/// A single-particle unitary over an ordered list of modes. Column j of the
/// matrix is the image of the j-th acted mode: a_j^+ -> sum_k U(k, j) a_k^+.
class OpticalElement {
   public:
    OpticalElement(std::string name, std::vector<ModeLabel> modes, ComplexMatrix matrix);

    const std::string &name() const {
        return name_;
    }
    const std::vector<ModeLabel> &modes() const {
        return modes_;
    }
    const ComplexMatrix &matrix() const {
        return matrix_;
    }

   private:
    std::string name_;
    std::vector<ModeLabel> modes_;
    ComplexMatrix matrix_;
};

PureState vacuum(const RegistryPtr &registry);
PureState basis_state(const RegistryPtr &registry, std::span<const int> occupation);

PureState apply_creation(const PureState &state, const ModeLabel &mode);
PureState apply_unitary(const PureState &state, const OpticalElement &element);
MixedState apply_unitary(const MixedState &state, const OpticalElement &element);

/// <t|s>.
Complex inner(const PureState &s, const PureState &t);
double fidelity_pure(const PureState &s, const PureState &t);
/// <t|rho|t>.
double fidelity_mixed(const MixedState &rho, const PureState &t);

/// Component of the state with exactly n quanta in the mode, left unnormalized,
/// together with its squared norm.
std::pair<PureState, double> project_occupation(const PureState &state, const ModeLabel &mode, int n);

using PatternProbabilities = std::map<Occupation, double>;

/// Joint marginal distribution of the occupations on the listed modes.
PatternProbabilities born_probabilities(const PureState &state, std::span<const ModeLabel> modes);
PatternProbabilities born_probabilities(const MixedState &state, std::span<const ModeLabel> modes);

/// Splits a state into unnormalized branches keyed by the occupation pattern
/// on the listed modes. Branch norms squared are the Born probabilities.
std::map<Occupation, PureState> split_by_pattern(const PureState &state, std::span<const ModeLabel> modes);

/// Reduced state on the kept modes, as an ensemble over the traced-out
/// occupation patterns. The result lives on a fresh registry of the kept labels.
MixedState partial_trace(const PureState &state, std::span<const ModeLabel> keep);
MixedState partial_trace(const MixedState &state, std::span<const ModeLabel> keep);

/// Re-expresses a state on a registry that contains all of its labels; modes
/// absent from the source are vacuum.
PureState embed(const PureState &state, const RegistryPtr &target);
MixedState embed(const MixedState &state, const RegistryPtr &target);

/// Product of two states on the same registry whose occupied modes are disjoint.
PureState combine_disjoint(const PureState &a, const PureState &b);

bool same_registry(const RegistryPtr &a, const RegistryPtr &b);

}  // namespace dfsmem

#endif
