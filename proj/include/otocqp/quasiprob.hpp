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

// quasiprob.hpp - the amplitude A_rho, the combined quasiprobability
// amplitude tilde-A_rho, the complex distribution P(W, W') built from it, its
// characteristic function, and the check that the mixed second moment of
// P(W, W') reproduces the out-of-time-ordered correlator.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "otocqp/otoc.hpp"
#include "otocqp/parallel.hpp"

namespace otocqp {

inline constexpr double kDefaultBinQuantum = 1e-9;
inline constexpr std::size_t kTableDimCap = 64;

// Outcome septuple (w2,a2; v1,l1; w1,a1; j) of one protocol realization.
struct AmplitudeIndex {
    OutcomeIndex w2;
    OutcomeIndex v1;
    OutcomeIndex w1;
    std::size_t j = 0;
};

// Arguments of tilde-A in the order of its four brackets:
// (w2,a2; w3,a3; v1,l1; v2,l2).
struct QuasiIndex {
    OutcomeIndex w2;
    OutcomeIndex w3;
    OutcomeIndex v1;
    OutcomeIndex v2;
};

inline void require_compatible(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                               const Propagator& u, const char* what) {
    require_same_dim(rho.dim(), w.dim(), what);
    require_same_dim(rho.dim(), v.dim(), what);
    require_same_dim(rho.dim(), u.dim(), what);
}

// <w2|U|v1> <v1|U^dag|w1> <w1|U|j> sqrt(p_j)
inline Complex amplitude_A(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                           const Propagator& u, const AmplitudeIndex& idx) {
    require_compatible(rho, w, v, u, "amplitude_A");
    if (idx.j >= static_cast<std::size_t>(rho.dim())) {
        throw Error(Errc::IndexOutOfRange, "amplitude_A: j = " + std::to_string(idx.j));
    }
    const CVector w2 = w.vector(idx.w2);
    const CVector v1 = v.vector(idx.v1);
    const CVector w1 = w.vector(idx.w1);
    const CVector j = rho.eigen.vector(static_cast<Index>(idx.j));
    const double p = std::max(0.0, rho.eigen.eigenvalues(static_cast<Index>(idx.j)));
    return w2.dot(u.U * v1) * v1.dot(u.U.adjoint() * w1) * w1.dot(u.U * j) * std::sqrt(p);
}

// <w3|U|v2> <v2|U^dag|w2> <w2|U|v1> <v1|rho U^dag|w3>
inline Complex tilde_A_closed(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                              const Propagator& u, const QuasiIndex& idx) {
    require_compatible(rho, w, v, u, "tilde_A_closed");
    const CVector w2 = w.vector(idx.w2);
    const CVector w3 = w.vector(idx.w3);
    const CVector v1 = v.vector(idx.v1);
    const CVector v2 = v.vector(idx.v2);
    const CVector back_w3 = u.U.adjoint() * w3;
    return w3.dot(u.U * v2) * v2.dot(u.U.adjoint() * w2) * w2.dot(u.U * v1) * v1.dot(rho.matrix * back_w3);
}

// Brute-force marginalization of A*(w2; v2; w3; j) A(w2; v1; w1; j) over j and
// (w1, a1). Independent of tilde_A_closed by construction.
inline Complex tilde_A_sum(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                           const Propagator& u, const QuasiIndex& idx) {
    require_compatible(rho, w, v, u, "tilde_A_sum");
    Complex total(0.0, 0.0);
    const auto dim = static_cast<std::size_t>(rho.dim());
    for (std::size_t j = 0; j < dim; ++j) {
        const Complex b = amplitude_A(rho, w, v, u, AmplitudeIndex{idx.w2, idx.v2, idx.w3, j});
        for (std::size_t w1 = 0; w1 < dim; ++w1) {
            total += std::conj(b) * amplitude_A(rho, w, v, u, AmplitudeIndex{idx.w2, idx.v1, w.outcome(w1), j});
        }
    }
    return total;
}

// Populations p_{w,a} of a state diagonal in the W(t) eigenbasis
// {U^dag |w,a>}, in flat order. Throws BasisMismatch otherwise.
inline RVector w_t_populations(const DensityOperator& rho, const EigenUnitary& w, const Propagator& u,
                               double tol = 1e-8) {
    require_same_dim(rho.dim(), w.dim(), "w_t_populations");
    require_same_dim(rho.dim(), u.dim(), "w_t_populations");
    const CMatrix in_basis = w.basis().adjoint() * u.U * rho.matrix * u.U.adjoint() * w.basis();
    const CMatrix off = in_basis - CMatrix(in_basis.diagonal().asDiagonal());
    if (max_abs(off) > tol) {
        throw Error(Errc::BasisMismatch, "state is not diagonal in the W(t) eigenbasis (off-diagonal " +
                                             std::to_string(max_abs(off)) + ")");
    }
    return in_basis.diagonal().real();
}

// Simplified form for states diagonal in the W(t) eigenbasis: the state
// factor collapses to <v1|U^dag|w3> p_{w3}.
inline Complex tilde_A_simple(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                              const Propagator& u, const QuasiIndex& idx) {
    require_compatible(rho, w, v, u, "tilde_A_simple");
    const RVector p = w_t_populations(rho, w, u);
    const CVector w2 = w.vector(idx.w2);
    const CVector w3 = w.vector(idx.w3);
    const CVector v1 = v.vector(idx.v1);
    const CVector v2 = v.vector(idx.v2);
    const CMatrix back = u.U.adjoint();
    return w3.dot(u.U * v2) * v2.dot(back * w2) * w2.dot(u.U * v1) * v1.dot(back * w3) *
           p(static_cast<Index>(w.flat_index(idx.w3)));
}

// x(a, b) = <w_a|U|v_b>, r(b, a) = <v_b|rho U^dag|w_a>, flat indices.
// tilde-A(w2, w3, v1, v2) = x(w3,v2) conj(x(w2,v2)) x(w2,v1) r(v1,w3).
struct QuasiFactors {
    CMatrix x;
    CMatrix r;
};

inline QuasiFactors quasi_factors(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                                  const Propagator& u) {
    require_compatible(rho, w, v, u, "quasi_factors");
    return QuasiFactors{w.basis().adjoint() * u.U * v.basis(),
                        v.basis().adjoint() * rho.matrix * u.U.adjoint() * w.basis()};
}

enum class Slot { W2, W3, V1, V2 };

// ---------------------------- Amplitude table -------------------------------

class QuasiAmplitudeTable {
  public:
    static QuasiAmplitudeTable build(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                                     const Propagator& u, unsigned threads = 1,
                                     std::size_t dim_cap = kTableDimCap) {
        require_compatible(rho, w, v, u, "QuasiAmplitudeTable");
        const auto d = static_cast<std::size_t>(rho.dim());
        if (d > dim_cap) {
            throw Error(Errc::DimensionTooLarge, "full tilde-A table needs D^4 entries; D = " + std::to_string(d) +
                                                     " exceeds cap " + std::to_string(dim_cap));
        }
        QuasiAmplitudeTable table(w, v);
        const QuasiFactors f = quasi_factors(rho, w, v, u);
        table.entries_.resize(d * d * d * d);
        parallel_for(d, threads, [&](std::size_t w2) {
            const auto W2 = static_cast<Index>(w2);
            for (std::size_t w3 = 0; w3 < d; ++w3) {
                const auto W3 = static_cast<Index>(w3);
                for (std::size_t v1 = 0; v1 < d; ++v1) {
                    const auto V1 = static_cast<Index>(v1);
                    const Complex tail = f.x(W2, V1) * f.r(V1, W3);
                    Complex* row = &table.entries_[((w2 * d + w3) * d + v1) * d];
                    for (std::size_t v2 = 0; v2 < d; ++v2) {
                        const auto V2 = static_cast<Index>(v2);
                        row[v2] = f.x(W3, V2) * std::conj(f.x(W2, V2)) * tail;
                    }
                }
            }
        });
        return table;
    }

    std::size_t dim() const { return dim_; }
    const EigenUnitary& w() const { return w_; }
    const EigenUnitary& v() const { return v_; }
    const std::vector<Complex>& entries() const { return entries_; }

    Complex at(std::size_t w2, std::size_t w3, std::size_t v1, std::size_t v2) const {
        if (w2 >= dim_ || w3 >= dim_ || v1 >= dim_ || v2 >= dim_) {
            throw Error(Errc::IndexOutOfRange, "QuasiAmplitudeTable::at");
        }
        return entries_[((w2 * dim_ + w3) * dim_ + v1) * dim_ + v2];
    }

    Complex at(const QuasiIndex& idx) const {
        return at(w_.flat_index(idx.w2), w_.flat_index(idx.w3), v_.flat_index(idx.v1), v_.flat_index(idx.v2));
    }

    Complex total() const {
        Complex s(0.0, 0.0);
        for (const auto& e : entries_) s += e;
        return s;
    }

    // Sum over every argument except `slot`, one value per flat outcome.
    std::vector<Complex> marginal(Slot slot) const {
        std::vector<Complex> out(dim_, Complex(0.0, 0.0));
        std::size_t flat = 0;
        for (std::size_t w2 = 0; w2 < dim_; ++w2)
            for (std::size_t w3 = 0; w3 < dim_; ++w3)
                for (std::size_t v1 = 0; v1 < dim_; ++v1)
                    for (std::size_t v2 = 0; v2 < dim_; ++v2, ++flat) {
                        const std::size_t key = slot == Slot::W2 ? w2 : slot == Slot::W3 ? w3
                                              : slot == Slot::V1 ? v1 : v2;
                        out[key] += entries_[flat];
                    }
        return out;
    }

    // Marginal onto the eigenvalue alone (degeneracy labels summed out).
    std::vector<Complex> group_marginal(Slot slot) const {
        const EigenUnitary& op = (slot == Slot::W2 || slot == Slot::W3) ? w_ : v_;
        const std::vector<Complex> fine = marginal(slot);
        std::vector<Complex> out(op.num_groups(), Complex(0.0, 0.0));
        for (std::size_t k = 0; k < fine.size(); ++k) out[op.outcome(k).group] += fine[k];
        return out;
    }

  private:
    QuasiAmplitudeTable(const EigenUnitary& w, const EigenUnitary& v)
        : dim_(static_cast<std::size_t>(w.dim())), w_(w), v_(v) {}

    std::size_t dim_;
    EigenUnitary w_;
    EigenUnitary v_;
    std::vector<Complex> entries_;  // index ((w2*D + w3)*D + v1)*D + v2
};

// --------------------------- Complex distribution ---------------------------

struct BinKey {
    std::int64_t w_re = 0, w_im = 0, wp_re = 0, wp_im = 0;
    auto operator<=>(const BinKey&) const = default;
};

struct Bin {
    Complex w;        // W  = conj(w3) conj(v2)
    Complex w_prime;  // W' = w2 v1
    Complex value;
};

// P(W, W') keyed by (W, W') rounded to multiples of `quantum`. A bin keeps
// the exact (W, W') of its first contribution.
class ComplexDistribution {
  public:
    explicit ComplexDistribution(double quantum = kDefaultBinQuantum) : quantum_(quantum) {
        if (!(quantum > 0.0)) throw Error(Errc::InvalidArgument, "bin quantum must be > 0");
    }

    double quantum() const { return quantum_; }
    const std::map<BinKey, Bin>& bins() const { return bins_; }
    std::size_t size() const { return bins_.size(); }

    BinKey key(Complex w, Complex w_prime) const {
        return BinKey{std::llround(w.real() / quantum_), std::llround(w.imag() / quantum_),
                      std::llround(w_prime.real() / quantum_), std::llround(w_prime.imag() / quantum_)};
    }

    void add(Complex w, Complex w_prime, Complex value) {
        auto [it, inserted] = bins_.try_emplace(key(w, w_prime), Bin{w, w_prime, value});
        if (!inserted) it->second.value += value;
    }

    void merge(const ComplexDistribution& other) {
        for (const auto& [k, b] : other.bins_) add(b.w, b.w_prime, b.value);
    }

    Complex total() const {
        Complex s(0.0, 0.0);
        for (const auto& [k, b] : bins_) s += b.value;
        return s;
    }

  private:
    double quantum_;
    std::map<BinKey, Bin> bins_;
};

inline ComplexDistribution build_P(const QuasiAmplitudeTable& table, double quantum = kDefaultBinQuantum) {
    ComplexDistribution dist(quantum);
    const std::size_t d = table.dim();
    const auto& entries = table.entries();
    std::size_t flat = 0;
    for (std::size_t w2 = 0; w2 < d; ++w2) {
        const Complex ew2 = table.w().eigenvalue_flat(w2);
        for (std::size_t w3 = 0; w3 < d; ++w3) {
            const Complex ew3 = std::conj(table.w().eigenvalue_flat(w3));
            for (std::size_t v1 = 0; v1 < d; ++v1) {
                const Complex wp = ew2 * table.v().eigenvalue_flat(v1);
                for (std::size_t v2 = 0; v2 < d; ++v2, ++flat) {
                    dist.add(ew3 * std::conj(table.v().eigenvalue_flat(v2)), wp, entries[flat]);
                }
            }
        }
    }
    return dist;
}

// P(W, W') without materializing the D^4 table. For each class of (w3, v2)
// pairs sharing a W key, G(v1, w2) = sum r(v1,w3) x(w3,v2) conj(x(w2,v2)) is
// accumulated; then P(W, W'(w2,v1)) += x(w2,v1) G(v1,w2).
inline ComplexDistribution stream_P(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                                    const Propagator& u, double quantum = kDefaultBinQuantum) {
    const QuasiFactors f = quasi_factors(rho, w, v, u);
    const Index d = rho.dim();
    ComplexDistribution dist(quantum);

    struct PairClass {
        Complex value;
        std::vector<std::pair<std::size_t, std::size_t>> group_pairs;
    };
    std::map<std::pair<std::int64_t, std::int64_t>, PairClass> w_classes;
    for (std::size_t gw = 0; gw < w.num_groups(); ++gw) {
        for (std::size_t gv = 0; gv < v.num_groups(); ++gv) {
            const Complex value = std::conj(w.groups()[gw].eigenvalue) * std::conj(v.groups()[gv].eigenvalue);
            const auto k = dist.key(value, value);
            auto [it, inserted] = w_classes.try_emplace({k.w_re, k.w_im}, PairClass{value, {}});
            it->second.group_pairs.emplace_back(gw, gv);
        }
    }

    auto flat_range = [](const EigenUnitary& op, std::size_t group) {
        const std::size_t begin = op.flat_index(OutcomeIndex{group, 0});
        return std::pair<Index, Index>{static_cast<Index>(begin), static_cast<Index>(op.degeneracy(group))};
    };

    for (const auto& [unused, cls] : w_classes) {
        CMatrix g = CMatrix::Zero(d, d);
        std::size_t members = 0;
        for (const auto& [gw, gv] : cls.group_pairs) members += w.degeneracy(gw) * v.degeneracy(gv);
        if (static_cast<Index>(members) > d) {
            CMatrix masked = CMatrix::Zero(d, d);
            for (const auto& [gw, gv] : cls.group_pairs) {
                const auto [w0, wn] = flat_range(w, gw);
                const auto [v0, vn] = flat_range(v, gv);
                masked.block(w0, v0, wn, vn) = f.x.block(w0, v0, wn, vn);
            }
            g = f.r * masked * f.x.adjoint();
        } else {
            for (const auto& [gw, gv] : cls.group_pairs) {
                const auto [w0, wn] = flat_range(w, gw);
                const auto [v0, vn] = flat_range(v, gv);
                for (Index a = w0; a < w0 + wn; ++a)
                    for (Index b = v0; b < v0 + vn; ++b) g.noalias() += f.x(a, b) * f.r.col(a) * f.x.col(b).adjoint();
            }
        }
        for (Index w2 = 0; w2 < d; ++w2) {
            const Complex ew2 = w.eigenvalue_flat(static_cast<std::size_t>(w2));
            for (Index v1 = 0; v1 < d; ++v1) {
                dist.add(cls.value, ew2 * v.eigenvalue_flat(static_cast<std::size_t>(v1)), f.x(w2, v1) * g(v1, w2));
            }
        }
    }
    return dist;
}

// --------------------------- Characteristic function ------------------------

struct CharEval {
    double beta = 0.0;
    double beta_prime = 0.0;
    Complex value;
};

// sum exp(-beta W - beta' W') P(W, W'), W and W' complex.
inline CharEval char_function(const ComplexDistribution& p, double beta, double beta_prime) {
    Complex s(0.0, 0.0);
    for (const auto& [k, b] : p.bins()) s += std::exp(-beta * b.w - beta_prime * b.w_prime) * b.value;
    return CharEval{beta, beta_prime, s};
}

// sum W W' P(W, W'): the mixed second derivative of the characteristic
// function at the origin.
inline Complex jarzynski_moment(const ComplexDistribution& p) {
    Complex s(0.0, 0.0);
    for (const auto& [k, b] : p.bins()) s += b.w * b.w_prime * b.value;
    return s;
}

// Central mixed finite difference of the characteristic function.
inline Complex jarzynski_fd(const ComplexDistribution& p, double h) {
    if (!(h > 0.0 && h < 0.1)) throw Error(Errc::StepOutOfRange, "finite-difference step must lie in (0, 0.1)");
    const Complex pp = char_function(p, h, h).value;
    const Complex pm = char_function(p, h, -h).value;
    const Complex mp = char_function(p, -h, h).value;
    const Complex mm = char_function(p, -h, -h).value;
    return (pp - pm - mp + mm) / (4.0 * h * h);
}

// -------------------------------- Verification ------------------------------

struct VerifyOptions {
    double fd_step = 1e-4;
    double quantum = kDefaultBinQuantum;
    double tolerance = 1e-9;
    std::size_t table_cap = kTableDimCap;
    std::size_t dim_cap = 256;
    unsigned threads = 1;
};

struct TheoremReport {
    double t = 0.0;
    Complex c_direct;
    Complex c_moment;
    Complex c_fd;
    double moment_error = 0.0;
    double fd_error = 0.0;
    std::size_t bins = 0;
    bool streamed = false;
    bool pass = false;
};

inline TheoremReport verify_theorem(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                                    const Propagator& u, const VerifyOptions& options = {}) {
    require_compatible(rho, w, v, u, "verify_theorem");
    const auto d = static_cast<std::size_t>(rho.dim());
    if (d > options.dim_cap) {
        throw Error(Errc::DimensionTooLarge, "verify_theorem: D = " + std::to_string(d) + " exceeds cap " +
                                                 std::to_string(options.dim_cap));
    }
    TheoremReport report;
    report.t = u.t;
    report.streamed = d > options.table_cap;
    const ComplexDistribution dist =
        report.streamed ? stream_P(rho, w, v, u, options.quantum)
                        : build_P(QuasiAmplitudeTable::build(rho, w, v, u, options.threads, options.table_cap),
                                  options.quantum);
    report.bins = dist.size();
    report.c_direct = otoc_direct(rho, w, v, u).value;
    report.c_moment = jarzynski_moment(dist);
    report.c_fd = jarzynski_fd(dist, options.fd_step);
    report.moment_error = std::abs(report.c_moment - report.c_direct);
    report.fd_error = std::abs(report.c_fd - report.c_direct);
    report.pass = report.moment_error < options.tolerance;
    return report;
}

inline TheoremReport verify_theorem(const OtocSetup& setup, double t, const VerifyOptions& options = {}) {
    return verify_theorem(setup.rho, setup.w, setup.v, make_propagator(setup.spectrum, t, setup.label), options);
}

}  // namespace otocqp
