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

#include "dense_oracle.h"

#include <cmath>
#include <map>

namespace dfsmem::oracle {

namespace {

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

std::vector<size_t> acted_indices(const ModeRegistry &reg, const OpticalElement &e) {
    std::vector<size_t> idx;
    for (const auto &m : e.modes()) {
        idx.push_back(reg.index_of(m));
    }
    return idx;
}

// All occupation vectors of length k with entries < d summing to n.
void compositions(int k, int n, int d, Occupation &cur, std::vector<Occupation> &out) {
    if (static_cast<int>(cur.size()) == k) {
        if (n == 0) {
            out.push_back(cur);
        }
        return;
    }
    for (int x = 0; x < d && x <= n; ++x) {
        cur.push_back(x);
        compositions(k, n - x, d, cur, out);
        cur.pop_back();
    }
}

}  // namespace

Complex permanent(const ComplexMatrix &m) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) {
        return 1.0;
    }
    Complex total = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) {
            Complex row = 0;
            for (int j = 0; j < n; ++j) {
                if (mask & (1u << j)) {
                    row += m(i, j);
                }
            }
            prod *= row;
        }
        int bits = __builtin_popcount(mask);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

Complex transition_amplitude(const ComplexMatrix &u, const Occupation &out, const Occupation &in) {
    std::vector<int> rows, cols;
    double norm = 1;
    for (size_t k = 0; k < out.size(); ++k) {
        rows.insert(rows.end(), out[k], static_cast<int>(k));
        norm *= factorial(out[k]);
    }
    for (size_t j = 0; j < in.size(); ++j) {
        cols.insert(cols.end(), in[j], static_cast<int>(j));
        norm *= factorial(in[j]);
    }
    if (rows.size() != cols.size()) {
        return 0.0;
    }
    ComplexMatrix sub(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < cols.size(); ++c) {
            sub(r, c) = u(rows[r], cols[c]);
        }
    }
    return permanent(sub) / std::sqrt(norm);
}

Eigen::VectorXcd to_dense(const PureState &s) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.registry()->dimension()));
    for (const auto &[k, a] : s.entries()) {
        v(static_cast<Eigen::Index>(k)) = a;
    }
    return v;
}

PureState from_dense(const RegistryPtr &registry, const Eigen::VectorXcd &v) {
    std::vector<PureState::Entry> entries;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) != Complex(0.0)) {
            entries.emplace_back(static_cast<BasisIndex>(i), v(i));
        }
    }
    return PureState(registry, std::move(entries));
}

ComplexMatrix dense_lift(const ModeRegistry &reg, const OpticalElement &e) {
    const auto dim = static_cast<Eigen::Index>(reg.dimension());
    auto acted = acted_indices(reg, e);
    std::vector<bool> is_acted(reg.mode_count(), false);
    for (auto i : acted) {
        is_acted[i] = true;
    }
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        auto in = reg.decode(static_cast<BasisIndex>(col));
        for (Eigen::Index row = 0; row < dim; ++row) {
            auto out = reg.decode(static_cast<BasisIndex>(row));
            bool spectators_match = true;
            for (size_t i = 0; i < in.size(); ++i) {
                if (!is_acted[i] && in[i] != out[i]) {
                    spectators_match = false;
                    break;
                }
            }
            if (!spectators_match) {
                continue;
            }
            Occupation in_a, out_a;
            for (auto i : acted) {
                in_a.push_back(in[i]);
                out_a.push_back(out[i]);
            }
            m(row, col) = transition_amplitude(e.matrix(), out_a, in_a);
        }
    }
    return m;
}

PureState dense_apply_full(const PureState &s, const OpticalElement &e) {
    if (s.registry()->dimension() > 4096) {
        throw std::invalid_argument("dense_apply_full: registry too large");
    }
    Eigen::VectorXcd out = dense_lift(*s.registry(), e) * to_dense(s);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (std::abs(out(i)) <= kPruneThreshold) {
            out(i) = 0;
        }
    }
    return from_dense(s.registry(), out);
}

PureState dense_apply_active(const PureState &s, const OpticalElement &e) {
    const auto &reg = *s.registry();
    auto acted = acted_indices(reg, e);
    const int k = static_cast<int>(acted.size());
    std::map<BasisIndex, Complex> acc;
    for (const auto &[key, amp] : s.entries()) {
        auto occ = reg.decode(key);
        Occupation in_a;
        int photons = 0;
        for (auto i : acted) {
            in_a.push_back(occ[i]);
            photons += occ[i];
        }
        std::vector<Occupation> outs;
        Occupation cur;
        compositions(k, photons, reg.truncation(), cur, outs);
        for (const auto &out_a : outs) {
            Complex t = transition_amplitude(e.matrix(), out_a, in_a);
            if (t == Complex(0.0)) {
                continue;
            }
            auto target = occ;
            for (int j = 0; j < k; ++j) {
                target[acted[j]] = out_a[j];
            }
            acc[reg.encode(target)] += t * amp;
        }
    }
    std::vector<PureState::Entry> entries;
    for (const auto &[key, amp] : acc) {
        if (std::abs(amp) > kPruneThreshold) {
            entries.emplace_back(key, amp);
        }
    }
    return PureState(s.registry(), std::move(entries));
}

double max_amplitude_diff(const PureState &a, const PureState &b) {
    double worst = 0;
    for (const auto &[k, v] : a.entries()) {
        worst = std::max(worst, std::abs(v - b.amplitude_at(k)));
    }
    for (const auto &[k, v] : b.entries()) {
        worst = std::max(worst, std::abs(v - a.amplitude_at(k)));
    }
    return worst;
}

ComplexMatrix random_unitary(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ();
    return q;
}

PureState random_state(const RegistryPtr &registry, int max_photons, std::mt19937_64 &rng, int terms) {
    const auto &reg = *registry;
    std::normal_distribution<double> g;
    std::uniform_int_distribution<size_t> mode(0, reg.mode_count() - 1);
    std::uniform_int_distribution<int> count(0, max_photons);
    std::vector<PureState::Entry> entries;
    for (int t = 0; t < terms; ++t) {
        Occupation occ(reg.mode_count(), 0);
        int n = count(rng);
        for (int p = 0; p < n; ++p) {
            size_t m = mode(rng);
            if (occ[m] + 1 < reg.truncation()) {
                ++occ[m];
            }
        }
        entries.emplace_back(reg.encode(occ), Complex(g(rng), g(rng)));
    }
    return PureState(registry, std::move(entries)).normalized();
}

}  // namespace dfsmem::oracle
