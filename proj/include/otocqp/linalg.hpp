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

// linalg.hpp - dense complex arithmetic and spectral routines shared by every
// other module. Matrices are Eigen::MatrixXcd; vectors are Eigen::VectorXcd.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>

#include "otocqp/errors.hpp"

namespace otocqp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Tolerances, tuned for d <= 2^10 double-precision work.
inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolUnitary = 1e-10;
inline constexpr double kTolEigGroup = 1e-8;

inline double max_abs(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const CMatrix& a) {
    return max_abs(a - a.adjoint());
}

inline double unitarity_defect(const CMatrix& u) {
    return max_abs(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols()));
}

inline void require_square(const CMatrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw Error(Errc::DimensionMismatch,
                    std::string(what) + ": expected a non-empty square matrix, got " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

inline void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        throw Error(Errc::DimensionMismatch, std::string(what) + ": dimensions " + std::to_string(a) +
                                                 " and " + std::to_string(b) + " differ");
    }
}

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend; column k of
// `eigenvectors` belongs to eigenvalues[k].
struct HermitianEigen {
    RVector eigenvalues;
    CMatrix eigenvectors;

    Index dim() const { return eigenvalues.size(); }
    CVector vector(Index k) const { return eigenvectors.col(k); }

    // Sum_k f(lambda_k) |k><k|
    template <typename F>
    CMatrix apply(F&& f) const {
        CVector diag(dim());
        for (Index k = 0; k < dim(); ++k) diag(k) = f(eigenvalues(k));
        return eigenvectors * diag.asDiagonal() * eigenvectors.adjoint();
    }

    CMatrix reconstruct() const {
        return apply([](double x) { return Complex(x, 0.0); });
    }
};

inline HermitianEigen eig_hermitian(const CMatrix& a) {
    require_square(a, "eig_hermitian");
    const double defect = hermiticity_defect(a);
    if (!(defect < kTolHerm)) {
        throw Error(Errc::NotHermitian, "eig_hermitian: |A - A^dag|_max = " + std::to_string(defect));
    }
    // Symmetrize so the solver sees exactly Hermitian input.
    const CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::NoConvergence, "eig_hermitian: solver did not converge");
    }
    return HermitianEigen{solver.eigenvalues(), solver.eigenvectors()};
}

// U = exp(-i H t) from a cached spectrum of H.
inline CMatrix mat_exp_unitary(const HermitianEigen& spectrum, double t) {
    return spectrum.apply([t](double e) { return std::exp(Complex(0.0, -e * t)); });
}

inline CMatrix mat_exp_unitary(const CMatrix& h, double t) {
    return mat_exp_unitary(eig_hermitian(h), t);
}

// Kronecker product; the left factor is the most significant index.
inline CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline CMatrix tensor(std::initializer_list<CMatrix> factors) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (const auto& f : factors) out = tensor(out, f);
    return out;
}

enum class Axis { X, Y, Z };

inline const char* axis_name(Axis axis) {
    switch (axis) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

inline CMatrix pauli(Axis axis) {
    CMatrix p(2, 2);
    switch (axis) {
        case Axis::X: p << 0.0, 1.0, 1.0, 0.0; break;
        case Axis::Y: p << 0.0, -kI, kI, 0.0; break;
        case Axis::Z: p << 1.0, 0.0, 0.0, -1.0; break;
    }
    return p;
}

// Modified Gram-Schmidt on the columns of `vectors`, two passes.
inline CMatrix orthonormalize(const CMatrix& vectors) {
    CMatrix q = vectors;
    for (Index k = 0; k < q.cols(); ++k) {
        for (int pass = 0; pass < 2; ++pass) {
            for (Index j = 0; j < k; ++j) {
                const Complex overlap = q.col(j).dot(q.col(k));
                q.col(k) -= overlap * q.col(j);
            }
        }
        const double norm = q.col(k).norm();
        if (norm < 1e-12) {
            throw Error(Errc::InvalidArgument, "orthonormalize: linearly dependent columns");
        }
        q.col(k) /= norm;
    }
    return q;
}

}  // namespace otocqp
