// Copyright 2026 The otocqp Authors
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

// model.hpp - the physical objects: Hamiltonians, density operators and
// unitaries carried together with their grouped spectral decompositions.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <numeric>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "otocqp/linalg.hpp"

namespace otocqp {

inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 10;

// ------------------------------ Hamiltonian ---------------------------------

struct Hamiltonian {
    CMatrix matrix;
    std::string label;

    Index dim() const { return matrix.rows(); }
};

inline Hamiltonian make_hamiltonian(CMatrix matrix, std::string label) {
    require_square(matrix, "make_hamiltonian");
    if (!(hermiticity_defect(matrix) < kTolHerm)) {
        throw Error(Errc::NotHermitian, "Hamiltonian '" + label + "' is not Hermitian");
    }
    return Hamiltonian{std::move(matrix), std::move(label)};
}

// 1 (x) ... (x) op (x) ... (x) 1 with `op` acting on `site` of an n-site chain.
inline CMatrix site_operator(int n, int site, const CMatrix& op) {
    if (n < 1 || site < 0 || site >= n) {
        throw Error(Errc::BadSite, "site " + std::to_string(site) + " outside chain of " + std::to_string(n));
    }
    const Index left = Index{1} << site;
    const Index right = Index{1} << (n - site - 1);
    return tensor(tensor(CMatrix::Identity(left, left), op), CMatrix::Identity(right, right));
}

inline void check_chain_dim(int n, std::size_t dim_cap) {
    if (n < 1) throw Error(Errc::InvalidArgument, "chain length must be >= 1");
    if (n >= 62 || (std::size_t{1} << n) > dim_cap) {
        throw Error(Errc::DimensionTooLarge,
                    "2^" + std::to_string(n) + " exceeds the dimension cap " + std::to_string(dim_cap));
    }
}

// Open-boundary transverse-field Ising chain
//   H = -J sum_k Z_k Z_{k+1} - g sum_k X_k - h sum_k Z_k.
inline Hamiltonian build_tfim(int n, double J, double g, double h, std::size_t dim_cap = kDefaultDimCap) {
    check_chain_dim(n, dim_cap);
    const Index dim = Index{1} << n;
    CMatrix H = CMatrix::Zero(dim, dim);
    const CMatrix X = pauli(Axis::X);
    const CMatrix Z = pauli(Axis::Z);
    for (int k = 0; k + 1 < n; ++k) {
        H -= J * site_operator(n, k, Z) * site_operator(n, k + 1, Z);
    }
    for (int k = 0; k < n; ++k) {
        H -= g * site_operator(n, k, X);
        H -= h * site_operator(n, k, Z);
    }
    std::string label = "tfim(n=" + std::to_string(n) + ",J=" + std::to_string(J) +
                        ",g=" + std::to_string(g) + ",h=" + std::to_string(h) + ")";
    return Hamiltonian{std::move(H), std::move(label)};
}

// ------------------------------- Propagator ---------------------------------

struct Propagator {
    CMatrix U;
    double t = 0.0;
    std::string source;

    Index dim() const { return U.rows(); }
};

inline Propagator make_propagator(const HermitianEigen& spectrum, double t, std::string source = {}) {
    return Propagator{mat_exp_unitary(spectrum, t), t, std::move(source)};
}

inline Propagator make_propagator(const Hamiltonian& h, double t) {
    return make_propagator(eig_hermitian(h.matrix), t, h.label);
}

inline Propagator identity_propagator(Index dim) {
    return Propagator{CMatrix::Identity(dim, dim), 0.0, "identity"};
}

// ---------------------------- Density operator ------------------------------

struct DensityOperator {
    CMatrix matrix;
    HermitianEigen eigen;  // p_j ascending, |j> as columns

    Index dim() const { return matrix.rows(); }
};

inline DensityOperator make_density(CMatrix matrix) {
    require_square(matrix, "make_density");
    HermitianEigen eigen = eig_hermitian(matrix);
    const double trace = matrix.trace().real();
    if (std::abs(trace - 1.0) > 1e-10 || std::abs(matrix.trace().imag()) > 1e-10) {
        throw Error(Errc::InvalidState, "density operator trace " + std::to_string(trace) + " != 1");
    }
    if (eigen.eigenvalues.minCoeff() < -1e-10) {
        throw Error(Errc::InvalidState, "density operator has a negative eigenvalue");
    }
    return DensityOperator{std::move(matrix), std::move(eigen)};
}

// The T -> infinity Gibbs state 1/D.
inline DensityOperator maximally_mixed(Index dim) {
    if (dim < 1) throw Error(Errc::InvalidArgument, "maximally_mixed: dimension must be >= 1");
    const double p = 1.0 / static_cast<double>(dim);
    DensityOperator rho;
    rho.matrix = p * CMatrix::Identity(dim, dim);
    rho.eigen.eigenvalues = RVector::Constant(dim, p);
    rho.eigen.eigenvectors = CMatrix::Identity(dim, dim);
    return rho;
}

// exp(-H/T)/Z assembled in the eigenbasis of H.
inline DensityOperator gibbs_state(const HermitianEigen& spectrum, double temperature) {
    if (!(temperature > 0.0)) {
        throw Error(Errc::NonpositiveTemperature, "temperature must be > 0, got " + std::to_string(temperature));
    }
    const Index dim = spectrum.dim();
    const double e0 = spectrum.eigenvalues.minCoeff();
    RVector weights(dim);
    for (Index k = 0; k < dim; ++k) weights(k) = std::exp(-(spectrum.eigenvalues(k) - e0) / temperature);
    weights /= weights.sum();

    DensityOperator rho;
    rho.matrix = spectrum.eigenvectors * weights.cast<Complex>().asDiagonal() * spectrum.eigenvectors.adjoint();
    // Populations descend with energy; store them ascending.
    rho.eigen.eigenvalues = weights.reverse();
    rho.eigen.eigenvectors = spectrum.eigenvectors.rowwise().reverse();
    return rho;
}

inline DensityOperator gibbs_state(const Hamiltonian& h, double temperature) {
    return gibbs_state(eig_hermitian(h.matrix), temperature);
}

// ----------------------------- Eigen unitary --------------------------------

// (eigenvalue group, degeneracy label) of a unitary with grouped spectrum.
struct OutcomeIndex {
    std::size_t group = 0;
    std::size_t degeneracy = 0;

    auto operator<=>(const OutcomeIndex&) const = default;
};

struct EigenGroup {
    Complex eigenvalue;
    std::vector<CVector> members;  // member alpha is members[alpha]
};

// A unitary W = sum_l w_l sum_alpha |w_l, alpha><w_l, alpha| stored together
// with its grouped eigenbasis. Instances are validated on construction and
// immutable afterwards.
class EigenUnitary {
  public:
    static EigenUnitary from_groups(std::vector<EigenGroup> groups, std::vector<double> generator_values = {}) {
        EigenUnitary out;
        out.groups_ = std::move(groups);
        out.generator_values_ = std::move(generator_values);
        out.finalize();
        return out;
    }

    const CMatrix& matrix() const { return matrix_; }
    const std::vector<EigenGroup>& groups() const { return groups_; }
    const std::vector<double>& generator_values() const { return generator_values_; }

    Index dim() const { return matrix_.rows(); }
    std::size_t num_groups() const { return groups_.size(); }
    std::size_t degeneracy(std::size_t group) const { return groups_.at(group).members.size(); }

    // Columns are the eigenvectors in (group, degeneracy) lexicographic order.
    const CMatrix& basis() const { return basis_; }

    std::size_t flat_index(OutcomeIndex idx) const {
        if (idx.group >= groups_.size() || idx.degeneracy >= groups_[idx.group].members.size()) {
            throw Error(Errc::IndexOutOfRange, "outcome (" + std::to_string(idx.group) + "," +
                                                   std::to_string(idx.degeneracy) + ") out of range");
        }
        return offsets_[idx.group] + idx.degeneracy;
    }

    OutcomeIndex outcome(std::size_t flat) const {
        if (flat >= flat_group_.size()) {
            throw Error(Errc::IndexOutOfRange, "flat outcome " + std::to_string(flat) + " out of range");
        }
        const std::size_t g = flat_group_[flat];
        return OutcomeIndex{g, flat - offsets_[g]};
    }

    CVector vector(OutcomeIndex idx) const { return basis_.col(static_cast<Index>(flat_index(idx))); }
    Complex eigenvalue(OutcomeIndex idx) const {
        flat_index(idx);
        return groups_[idx.group].eigenvalue;
    }
    Complex eigenvalue_flat(std::size_t flat) const { return groups_[flat_group_.at(flat)].eigenvalue; }

    CMatrix projector(std::size_t group) const {
        const auto& g = groups_.at(group);
        const Index begin = static_cast<Index>(offsets_[group]);
        const Index count = static_cast<Index>(g.members.size());
        const auto block = basis_.middleCols(begin, count);
        return block * block.adjoint();
    }

    // |sum_vectors |v><v| - 1|_max
    double completeness_defect() const {
        return max_abs(basis_ * basis_.adjoint() - CMatrix::Identity(basis_.rows(), basis_.rows()));
    }

  private:
    EigenUnitary() = default;

    void finalize() {
        if (groups_.empty()) throw Error(Errc::InvalidArgument, "EigenUnitary: no eigenvalue groups");
        Index dim = -1;
        std::size_t total = 0;
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            const auto& grp = groups_[g];
            if (grp.members.empty()) throw Error(Errc::InvalidArgument, "EigenUnitary: empty eigenvalue group");
            if (std::abs(std::abs(grp.eigenvalue) - 1.0) > 1e-10) {
                throw Error(Errc::NotUnitary, "EigenUnitary: eigenvalue off the unit circle");
            }
            for (const auto& v : grp.members) {
                if (dim < 0) dim = v.size();
                require_same_dim(dim, v.size(), "EigenUnitary member");
            }
            total += grp.members.size();
            for (std::size_t h = 0; h < g; ++h) {
                if (std::abs(groups_[h].eigenvalue - grp.eigenvalue) <= kTolEigGroup) {
                    throw Error(Errc::GroupingAmbiguous, "EigenUnitary: two groups share an eigenvalue");
                }
            }
        }
        if (static_cast<Index>(total) != dim) {
            throw Error(Errc::DimensionMismatch, "EigenUnitary: " + std::to_string(total) +
                                                     " eigenvectors for dimension " + std::to_string(dim));
        }
        basis_.resize(dim, dim);
        offsets_.clear();
        flat_group_.clear();
        CVector diag(dim);
        Index col = 0;
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            offsets_.push_back(static_cast<std::size_t>(col));
            for (const auto& v : groups_[g].members) {
                basis_.col(col) = v;
                diag(col) = groups_[g].eigenvalue;
                flat_group_.push_back(g);
                ++col;
            }
        }
        if (!(completeness_defect() < 1e-9)) {
            throw Error(Errc::InvalidArgument, "EigenUnitary: eigenvectors are not an orthonormal basis");
        }
        matrix_ = basis_ * diag.asDiagonal() * basis_.adjoint();
        if (!(unitarity_defect(matrix_) < kTolUnitary)) {
            throw Error(Errc::NotUnitary, "EigenUnitary: reconstructed matrix is not unitary");
        }
    }

    std::vector<EigenGroup> groups_;
    std::vector<double> generator_values_;
    CMatrix matrix_;
    CMatrix basis_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> flat_group_;
};

inline EigenUnitary identity_unitary(Index dim) {
    EigenGroup g{Complex(1.0, 0.0), {}};
    for (Index k = 0; k < dim; ++k) g.members.push_back(CVector::Unit(dim, k));
    return EigenUnitary::from_groups({std::move(g)}, {0.0});
}

// Single-site Pauli on an n-site chain. Group 0 is +1, group 1 is -1; inside
// each group the eigenvectors are ordered by the binary index of the
// remaining sites.
inline EigenUnitary pauli_site(int n, int site, Axis axis, std::size_t dim_cap = kDefaultDimCap) {
    check_chain_dim(n, dim_cap);
    if (site < 0 || site >= n) {
        throw Error(Errc::BadSite, "site " + std::to_string(site) + " outside chain of " + std::to_string(n));
    }
    const double s = 1.0 / std::numbers::sqrt2;
    CVector plus(2), minus(2);
    switch (axis) {
        case Axis::X: plus << s, s; minus << s, -s; break;
        case Axis::Y: plus << s, kI * s; minus << s, -kI * s; break;
        case Axis::Z: plus << 1.0, 0.0; minus << 0.0, 1.0; break;
    }
    const Index dim = Index{1} << n;
    const int rest = n - 1;
    EigenGroup up{Complex(1.0, 0.0), {}};
    EigenGroup down{Complex(-1.0, 0.0), {}};
    for (Index r = 0; r < (Index{1} << rest); ++r) {
        // Split r into the bits above and below `site`.
        const Index low_bits = n - site - 1;
        const Index high = r >> low_bits;
        const Index low = r & ((Index{1} << low_bits) - 1);
        const Index base0 = (high << (low_bits + 1)) | low;
        const Index base1 = base0 | (Index{1} << low_bits);
        CVector u = CVector::Zero(dim), d = CVector::Zero(dim);
        u(base0) = plus(0);
        u(base1) = plus(1);
        d(base0) = minus(0);
        d(base1) = minus(1);
        up.members.push_back(std::move(u));
        down.members.push_back(std::move(d));
    }
    return EigenUnitary::from_groups({std::move(up), std::move(down)});
}

// W = exp(iG), grouped by clustering exp(i lambda) on the unit circle.
inline EigenUnitary eigen_unitary_from_generator(const CMatrix& generator) {
    const HermitianEigen eig = eig_hermitian(generator);
    const Index dim = eig.dim();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> angle(static_cast<std::size_t>(dim));
    for (Index k = 0; k < dim; ++k) angle[k] = std::arg(std::exp(Complex(0.0, eig.eigenvalues(k))));
    std::vector<Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return angle[a] < angle[b]; });

    auto check_gap = [](double gap) {
        if (gap >= kTolEigGroup && gap < 10.0 * kTolEigGroup) {
            throw Error(Errc::GroupingAmbiguous, "eigenphase gap " + std::to_string(gap) +
                                                     " is within 10x of the grouping tolerance");
        }
        return gap < kTolEigGroup;
    };

    std::vector<std::vector<Index>> clusters;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && check_gap(angle[order[i]] - angle[order[i - 1]])) {
            clusters.back().push_back(order[i]);
        } else {
            clusters.push_back({order[i]});
        }
    }
    if (clusters.size() > 1) {
        const double wrap = angle[order.front()] + two_pi - angle[order.back()];
        if (check_gap(wrap)) {
            auto last = std::move(clusters.back());
            clusters.pop_back();
            last.insert(last.end(), clusters.front().begin(), clusters.front().end());
            clusters.front() = std::move(last);
        }
    }

    std::vector<EigenGroup> groups;
    std::vector<double> generator_values;
    for (auto& members : clusters) {
        // Member order follows the generator's ascending eigenvalues.
        std::sort(members.begin(), members.end());
        Complex mean(0.0, 0.0);
        CMatrix block(dim, static_cast<Index>(members.size()));
        for (std::size_t m = 0; m < members.size(); ++m) {
            mean += std::exp(Complex(0.0, eig.eigenvalues(members[m])));
            block.col(static_cast<Index>(m)) = eig.eigenvectors.col(members[m]);
        }
        block = orthonormalize(block);
        EigenGroup g{mean / std::abs(mean), {}};
        for (Index m = 0; m < block.cols(); ++m) g.members.push_back(block.col(m));
        groups.push_back(std::move(g));
        generator_values.push_back(eig.eigenvalues(members.front()));
    }
    return EigenUnitary::from_groups(std::move(groups), std::move(generator_values));
}

}  // namespace otocqp
