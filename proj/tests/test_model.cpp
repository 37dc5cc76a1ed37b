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


#include <cmath>
#include <numbers>

#include "otocqp/model.hpp"
#include "otocqp/random.hpp"
#include "test_support.hpp"

namespace otocqp {
namespace {

using testing::expect_errc;
using testing::mat2;

void expect_eigen_unitary_invariants(const EigenUnitary& u) {
    EXPECT_LT(unitarity_defect(u.matrix()), kTolUnitary);
    EXPECT_LT(u.completeness_defect(), 1e-9);
    for (std::size_t g = 0; g < u.num_groups(); ++g) {
        EXPECT_NEAR(std::abs(u.groups()[g].eigenvalue), 1.0, 1e-10);
        for (std::size_t h = g + 1; h < u.num_groups(); ++h) {
            EXPECT_GT(std::abs(u.groups()[g].eigenvalue - u.groups()[h].eigenvalue), kTolEigGroup);
        }
    }
    for (std::size_t k = 0; k < static_cast<std::size_t>(u.dim()); ++k) {
        const CVector v = u.basis().col(static_cast<Index>(k));
        EXPECT_LT((u.matrix() * v - u.eigenvalue_flat(k) * v).norm(), 1e-9);
        EXPECT_EQ(u.flat_index(u.outcome(k)), k);
    }
}

TEST(Tfim, SingleSiteField) {
    EXPECT_MAT_NEAR(build_tfim(1, 0.7, 0.0, 1.0).matrix, -pauli(Axis::Z), 1e-15);
}

TEST(Tfim, TwoSiteCoupling) {
    CMatrix expected = CMatrix::Zero(4, 4);
    expected.diagonal() << -1.0, 1.0, 1.0, -1.0;
    EXPECT_MAT_NEAR(build_tfim(2, 1.0, 0.0, 0.0).matrix, expected, 1e-15);
}

TEST(Tfim, ThreeSiteSpectrumMatchesIndependentDiagonalization) {
    // Assemble the Hamiltonian from explicit Kronecker products and
    // diagonalize with a general complex eigensolver.
    const CMatrix x = pauli(Axis::X), z = pauli(Axis::Z), one = CMatrix::Identity(2, 2);
    const CMatrix h = -1.0 * (tensor({z, z, one}) + tensor({one, z, z})) -
                      1.05 * (tensor({x, one, one}) + tensor({one, x, one}) + tensor({one, one, x})) -
                      0.5 * (tensor({z, one, one}) + tensor({one, z, one}) + tensor({one, one, z}));
    Eigen::ComplexEigenSolver<CMatrix> oracle(h);
    std::vector<double> expected;
    for (Index k = 0; k < 8; ++k) expected.push_back(oracle.eigenvalues()(k).real());
    std::sort(expected.begin(), expected.end());
    const HermitianEigen e = eig_hermitian(build_tfim(3, 1.0, 1.05, 0.5).matrix);
    for (Index k = 0; k < 8; ++k) EXPECT_NEAR(e.eigenvalues(k), expected[static_cast<std::size_t>(k)], 1e-10);
}

TEST(Tfim, DimensionCap) {
    expect_errc(Errc::DimensionTooLarge, [] { build_tfim(11, 1.0, 1.0, 0.0); });
    expect_errc(Errc::DimensionTooLarge, [] { build_tfim(5, 1.0, 1.0, 0.0, 16); });
}

TEST(PauliSite, SingleQubitZ) {
    const EigenUnitary z = pauli_site(1, 0, Axis::Z);
    ASSERT_EQ(z.num_groups(), 2u);
    EXPECT_COMPLEX_NEAR(z.groups()[0].eigenvalue, Complex(1.0, 0.0), 1e-15);
    EXPECT_COMPLEX_NEAR(z.groups()[1].eigenvalue, Complex(-1.0, 0.0), 1e-15);
    EXPECT_NEAR(std::abs(z.vector({0, 0})(0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(z.vector({1, 0})(1)), 1.0, 1e-15);
}

TEST(PauliSite, TwoQubitSiteZeroGroups) {
    const EigenUnitary z = pauli_site(2, 0, Axis::Z);
    ASSERT_EQ(z.degeneracy(0), 2u);
    ASSERT_EQ(z.degeneracy(1), 2u);
    CMatrix plus = CMatrix::Zero(4, 4), minus = CMatrix::Zero(4, 4);
    plus(0, 0) = plus(1, 1) = 1.0;   // |00>, |01>
    minus(2, 2) = minus(3, 3) = 1.0; // |10>, |11>
    EXPECT_MAT_NEAR(z.projector(0), plus, 1e-15);
    EXPECT_MAT_NEAR(z.projector(1), minus, 1e-15);
}

TEST(PauliSite, InvariantsForAllPlacements) {
    for (int n = 1; n <= 3; ++n)
        for (int site = 0; site < n; ++site)
            for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
                const EigenUnitary p = pauli_site(n, site, axis);
                expect_eigen_unitary_invariants(p);
                EXPECT_MAT_NEAR(p.matrix(), site_operator(n, site, pauli(axis)), 1e-14);
            }
    expect_errc(Errc::BadSite, [] { pauli_site(2, 2, Axis::X); });
}

TEST(EigenUnitaryFromGenerator, ZeroGeneratorIsIdentity) {
    const EigenUnitary u = eigen_unitary_from_generator(CMatrix::Zero(3, 3));
    ASSERT_EQ(u.num_groups(), 1u);
    EXPECT_EQ(u.degeneracy(0), 3u);
    EXPECT_COMPLEX_NEAR(u.groups()[0].eigenvalue, Complex(1.0, 0.0), 1e-15);
}

TEST(EigenUnitaryFromGenerator, HalfPiSigmaY) {
    const EigenUnitary u = eigen_unitary_from_generator(std::numbers::pi / 2.0 * pauli(Axis::Y));
    ASSERT_EQ(u.num_groups(), 2u);
    const Complex a = u.groups()[0].eigenvalue, b = u.groups()[1].eigenvalue;
    EXPECT_NEAR(std::abs(a.real()), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(a.imag()), 1.0, 1e-14);
    EXPECT_COMPLEX_NEAR(a * b, Complex(1.0, 0.0), 1e-14);
    EXPECT_COMPLEX_NEAR(a + b, Complex(0.0, 0.0), 1e-14);
    expect_eigen_unitary_invariants(u);
}

TEST(EigenUnitaryFromGenerator, RandomIsUnitaryAndComplete) {
    Rng rng(21);
    const CMatrix g = random_hermitian(4, rng, 3.0);
    const EigenUnitary u = eigen_unitary_from_generator(g);
    expect_eigen_unitary_invariants(u);
    EXPECT_MAT_NEAR(u.matrix(), mat_exp_unitary(g, -1.0), 1e-10);
}

TEST(EigenUnitaryFromGenerator, DegenerateSpectrumGroups) {
    Rng rng(22);
    const EigenUnitary u = eigen_unitary_from_generator(random_degenerate_generator(6, 2, rng));
    EXPECT_EQ(u.num_groups(), 2u);
    EXPECT_EQ(u.degeneracy(0) + u.degeneracy(1), 6u);
    expect_eigen_unitary_invariants(u);
}

TEST(EigenUnitaryFromGenerator, AmbiguousGapRejected) {
    CMatrix g = CMatrix::Zero(2, 2);
    g(1, 1) = 3e-8;  // between the grouping tolerance and ten times it
    expect_errc(Errc::GroupingAmbiguous, [&] { eigen_unitary_from_generator(g); });
}

TEST(EigenUnitary, IndexOutOfRange) {
    const EigenUnitary z = pauli_site(1, 0, Axis::Z);
    expect_errc(Errc::IndexOutOfRange, [&] { z.flat_index({2, 0}); });
    expect_errc(Errc::IndexOutOfRange, [&] { z.flat_index({0, 1}); });
}

TEST(Gibbs, TwoLevelPopulations) {
    const double e = 1.7;
    const Hamiltonian h = make_hamiltonian(mat2(0.0, 0.0, 0.0, e), "two-level");
    const DensityOperator rho = gibbs_state(h, e);
    const double z = 1.0 + std::exp(-1.0);
    EXPECT_NEAR(rho.matrix(0, 0).real(), 1.0 / z, 1e-15);
    EXPECT_NEAR(rho.matrix(1, 1).real(), std::exp(-1.0) / z, 1e-15);
}

TEST(Gibbs, CommutesWithHamiltonianAndValid) {
    Rng rng(31);
    const CMatrix h = random_hermitian(6, rng, 2.0);
    for (const double t : {0.1, 1.0, 10.0}) {
        const DensityOperator rho = gibbs_state(eig_hermitian(h), t);
        EXPECT_MAT_NEAR(rho.matrix * h, h * rho.matrix, 1e-10);
        EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-12);
        EXPECT_MAT_NEAR(rho.eigen.reconstruct(), rho.matrix, 1e-12);
        EXPECT_TRUE(std::is_sorted(rho.eigen.eigenvalues.data(), rho.eigen.eigenvalues.data() + 6));
    }
    expect_errc(Errc::NonpositiveTemperature, [&] { gibbs_state(eig_hermitian(h), 0.0); });
}

TEST(Density, MaximallyMixedAndValidation) {
    EXPECT_MAT_EQ(maximally_mixed(4).matrix, CMatrix::Identity(4, 4) / 4.0);
    expect_errc(Errc::InvalidState, [] { make_density(mat2(0.6, 0.0, 0.0, 0.6)); });
    expect_errc(Errc::InvalidState, [] { make_density(mat2(1.2, 0.0, 0.0, -0.2)); });
}

TEST(Propagator, FromHamiltonian) {
    const Hamiltonian h = build_tfim(2, 1.0, 0.8, 0.3);
    const Propagator u = make_propagator(h, 0.6);
    EXPECT_MAT_NEAR(u.U, mat_exp_unitary(h.matrix, 0.6), 1e-13);
    EXPECT_MAT_EQ(identity_propagator(3).U, CMatrix::Identity(3, 3));
}

}  // namespace
}  // namespace otocqp
