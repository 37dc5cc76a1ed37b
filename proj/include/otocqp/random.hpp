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

// random.hpp - seeded random instances for tests, the acceptance suite and
// the CLI's random verification suite.

#pragma once

#include <cstdint>
#include <random>

#include "otocqp/model.hpp"

namespace otocqp {

using Rng = std::mt19937_64;

inline CMatrix random_ginibre(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

// (G + G^dag) / 2 with G Ginibre, scaled by `scale / sqrt(d)`.
inline CMatrix random_hermitian(Index d, Rng& rng, double scale = 1.0) {
    const CMatrix g = random_ginibre(d, d, rng);
    return (scale / std::sqrt(static_cast<double>(d))) * 0.5 * (g + g.adjoint());
}

// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
inline CMatrix random_unitary(Index d, Rng& rng) {
    const CMatrix g = random_ginibre(d, d, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < d; ++k) {
        const Complex diag = r(k, k);
        if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
    }
    return q;
}

inline CVector random_unit_vector(Index d, Rng& rng) {
    const CVector v = random_ginibre(d, 1, rng).col(0);
    return v / v.norm();
}

// A A^dag / Tr with A Ginibre: full rank with probability one.
inline DensityOperator random_full_rank_state(Index d, Rng& rng) {
    const CMatrix a = random_ginibre(d, d, rng);
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return make_density(std::move(rho));
}

// Hermitian generator with exactly `levels` distinct eigenvalues, each
// repeated, in a random eigenbasis. Produces unitaries with degenerate
// eigenspaces.
inline CMatrix random_degenerate_generator(Index d, Index levels, Rng& rng) {
    std::uniform_real_distribution<double> phase(-3.0, 3.0);
    std::vector<double> values(static_cast<std::size_t>(levels));
    for (auto& x : values) x = phase(rng);
    RVector diag(d);
    for (Index k = 0; k < d; ++k) diag(k) = values[static_cast<std::size_t>(k % levels)];
    const CMatrix q = random_unitary(d, rng);
    CMatrix g = q * diag.cast<Complex>().asDiagonal() * q.adjoint();
    return 0.5 * (g + g.adjoint());
}

}  // namespace otocqp
