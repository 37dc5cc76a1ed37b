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

#include "otocqp/random.hpp"
#include "otocqp/weak.hpp"
#include "test_support.hpp"

namespace otocqp {
namespace {

using testing::expect_errc;

CMatrix projector_onto(const CVector& v) { return v * v.adjoint(); }

// (sqrt p + g Pi)((1 - Pi) + Pi / sqrt(sum_x |sqrt p + g|^2)), written as
// sqrt(p) (1 - Pi) + (sqrt p + g) / norm * Pi.
std::vector<CMatrix> hand_kraus(const WeakMeter& m, const CMatrix& pi) {
    double norm2 = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) norm2 += std::norm(std::sqrt(m.baseline[k]) + m.coupling[k]);
    const CMatrix one = CMatrix::Identity(pi.rows(), pi.cols());
    std::vector<CMatrix> out;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double s = std::sqrt(m.baseline[k]);
        out.push_back(s * (one - pi) + (s + m.coupling[k]) / std::sqrt(norm2) * pi);
    }
    return out;
}

struct Instance {
    DensityOperator rho;
    EigenUnitary w;
    EigenUnitary v;
    Propagator u;
};

Instance single_qubit() {
    return {maximally_mixed(2), pauli_site(1, 0, Axis::Z), pauli_site(1, 0, Axis::X), identity_propagator(2)};
}

Instance random_setup(std::uint64_t seed) {
    Rng rng(seed);
    const HermitianEigen spectrum = eig_hermitian(random_hermitian(4, rng, 2.0));
    return {maximally_mixed(4), eigen_unitary_from_generator(random_hermitian(4, rng, 3.0)),
            eigen_unitary_from_generator(random_hermitian(4, rng, 3.0)), make_propagator(spectrum, 0.8)};
}

double loglog_slope(const std::vector<double>& g, const std::vector<double>& e) {
    double mg = 0.0, me = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        mg += std::log(g[k]) / g.size();
        me += std::log(e[k]) / e.size();
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        num += (std::log(g[k]) - mg) * (std::log(e[k]) - me);
        den += (std::log(g[k]) - mg) * (std::log(g[k]) - mg);
    }
    return num / den;
}

TEST(WeakMeter, PresetsAreCalibrated) {
    for (const double g : {0.0, 0.05, 0.3})
        for (const CouplingMode mode : {CouplingMode::Real, CouplingMode::Imaginary}) {
            const auto [a, b] = meter_pair(g, mode);
            for (const WeakMeter* m : {&a, &b}) {
                EXPECT_LT(calibration_defect(*m), 1e-12);
                EXPECT_NEAR(m->baseline[0] + m->baseline[1], 1.0, 1e-12);
            }
        }
    WeakMeter skewed = qubit_meter(0.1);
    skewed.baseline = {0.7, 0.3};
    expect_errc(Errc::InvalidArgument, [&] { validate_meter(skewed); });
}

TEST(Kraus, DecoupledMeterIsExact) {
    const CMatrix pi = projector_onto(testing::ket({1.0, 0.0, 0.0}));
    const auto family = kraus_from_meter(qubit_meter(0.0), pi);
    for (const auto& m : family) EXPECT_MAT_NEAR(m, std::sqrt(0.5) * CMatrix::Identity(3, 3), 1e-15);
    EXPECT_LT(completeness_defect(family), 1e-15);
}

TEST(Kraus, ImaginaryCouplingCompletenessBeforeAndAfter) {
    const CMatrix pi = projector_onto(testing::ket({1.0, 0.0}));
    for (const double g : {0.2, 0.1, 0.05}) {
        const WeakMeter m = qubit_meter(g, std::numbers::pi / 2.0);
        // sum_x M^dag M = 1 + 2 g^2 Pi for g(x) = +-i g.
        EXPECT_NEAR(completeness_defect(raw_kraus_from_meter(m, pi)), 2.0 * g * g, 1e-12);
        EXPECT_LT(completeness_defect(kraus_from_meter(m, pi)), 1e-10);
    }
}

TEST(Kraus, HandFormulaForQubitProjector) {
    const CMatrix pi = projector_onto(testing::ket({1.0, 0.0}));
    const auto family = kraus_from_meter(qubit_meter(0.1), pi);
    const double s = std::sqrt(0.5), n = std::sqrt(1.02);
    CMatrix plus = CMatrix::Zero(2, 2), minus = CMatrix::Zero(2, 2);
    plus(0, 0) = (s + 0.1) / n;
    plus(1, 1) = s;
    minus(0, 0) = (s - 0.1) / n;
    minus(1, 1) = s;
    EXPECT_MAT_NEAR(family[0], plus, 1e-12);
    EXPECT_MAT_NEAR(family[1], minus, 1e-12);
}

TEST(Kraus, Errors) {
    expect_errc(Errc::NotProjector, [] { kraus_from_meter(qubit_meter(0.1), 2.0 * CMatrix::Identity(2, 2)); });
    WeakMeter dead{{1.0, -1.0}, {0.5, 0.5}, {-std::sqrt(0.5), -std::sqrt(0.5)}, 1.0};
    expect_errc(Errc::CompletenessUnreachable,
                [&] { kraus_from_meter(dead, projector_onto(testing::ket({1.0, 0.0}))); });
}

TEST(WeakStatistics, DecoupledMetersFactorize) {
    const Instance s = random_setup(901);
    const WeakMeter off = qubit_meter(0.0);
    const WeakSetting setting{{1, 0}, {2, 0}, {0, 0}};
    const WeakStatistics stats = weak_statistics_exact(s.rho, s.w, s.v, s.u, off, off, setting);
    const CVector back = s.u.U.adjoint() * s.w.vector(setting.w3);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t k = 0; k < 4; ++k) {
                const double born = std::norm(s.v.basis().col(static_cast<Index>(k)).dot(back));
                EXPECT_NEAR(stats.at(x, y, k), 0.25 * born, 1e-14);
            }
}

TEST(WeakStatistics, MatchesCircuitSimulation) {
    const Instance q = single_qubit();
    for (const CouplingMode mode : {CouplingMode::Real, CouplingMode::Imaginary}) {
        const auto [ma, mb] = meter_pair(0.1, mode);
        for (std::size_t w3 = 0; w3 < 2; ++w3) {
            const WeakSetting setting{q.w.outcome(w3), {0, 0}, {1, 0}};
            const WeakStatistics stats = weak_statistics_exact(q.rho, q.w, q.v, q.u, ma, mb, setting);
            const auto ka = hand_kraus(ma, projector_onto(q.v.vector(setting.v1)));
            const auto kb = hand_kraus(mb, projector_onto(q.w.vector(setting.w2)));
            const CVector w3ket = q.w.vector(setting.w3);
            const CMatrix start = w3ket * w3ket.adjoint();
            double total = 0.0;
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y) {
                    // Density-matrix evolution of the circuit U^dag, K_a, U, K_b, U^dag.
                    CMatrix r = q.u.U.adjoint() * start * q.u.U;
                    r = ka[x] * r * ka[x].adjoint();
                    r = q.u.U * r * q.u.U.adjoint();
                    r = kb[y] * r * kb[y].adjoint();
                    r = q.u.U.adjoint() * r * q.u.U;
                    for (std::size_t k = 0; k < 2; ++k) {
                        const CVector vk = q.v.basis().col(static_cast<Index>(k));
                        EXPECT_NEAR(stats.at(x, y, k), vk.dot(r * vk).real(), 1e-12);
                        total += stats.at(x, y, k);
                    }
                }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(WeakStatistics, RequiresDiagonalState) {
    Instance s = random_setup(902);
    Rng rng(903);
    s.rho = random_full_rank_state(4, rng);
    const auto [ma, mb] = meter_pair(0.1, CouplingMode::Real);
    expect_errc(Errc::BasisMismatch,
                [&] { weak_statistics_exact(s.rho, s.w, s.v, s.u, ma, mb, WeakSetting{{0, 0}, {0, 0}, {0, 0}}); });
}

TEST(WeakInference, BiasShrinksWithCoupling) {
    const std::vector<double> strengths{0.2, 0.1, 0.05};
    const Instance q = single_qubit();
    const Instance r = random_setup(904);
    const std::vector<std::pair<const Instance*, QuasiIndex>> cases{
        {&q, QuasiIndex{{0, 0}, {0, 0}, {0, 0}, {0, 0}}},
        {&q, QuasiIndex{{0, 0}, {1, 0}, {0, 0}, {1, 0}}},
        {&r, QuasiIndex{{1, 0}, {0, 0}, {2, 0}, {3, 0}}},
        {&r, QuasiIndex{{2, 0}, {2, 0}, {1, 0}, {1, 0}}},
    };
    for (const auto& [s, idx] : cases) {
        std::vector<double> errors;
        for (const double g : strengths) {
            const WeakReport rep = run_weak_inference(s->rho, s->w, s->v, s->u, idx, WeakRunOptions{g, 0, 0, 1});
            errors.push_back(std::abs(rep.estimate - rep.oracle));
        }
        EXPECT_GE(loglog_slope(strengths, errors), 0.9);
    }
}

TEST(WeakInference, BackgroundOnlyForCoincidentLabels) {
    const Instance s = random_setup(905);
    const auto [ma, mb] = meter_pair(0.1, CouplingMode::Real);
    const WeakStatistics distinct_w = weak_statistics_exact(s.rho, s.w, s.v, s.u, ma, mb, WeakSetting{{1, 0}, {2, 0}, {0, 0}});
    EXPECT_EQ(weak_infer_tilde(distinct_w, {0, 0}, CouplingMode::Real).background, 0.0);
    const WeakStatistics same_w = weak_statistics_exact(s.rho, s.w, s.v, s.u, ma, mb, WeakSetting{{2, 0}, {2, 0}, {0, 0}});
    EXPECT_EQ(weak_infer_tilde(same_w, {3, 0}, CouplingMode::Real).background, 0.0);
    EXPECT_NE(weak_infer_tilde(same_w, {0, 0}, CouplingMode::Real).background, 0.0);
}

TEST(WeakInference, CouplingClassification) {
    const Instance q = single_qubit();
    const WeakSetting setting{{0, 0}, {0, 0}, {0, 0}};
    const WeakMeter off = qubit_meter(0.0);
    const WeakStatistics zero = weak_statistics_exact(q.rho, q.w, q.v, q.u, off, off, setting);
    expect_errc(Errc::ZeroCoupling, [&] { weak_infer_tilde(zero, {0, 0}, CouplingMode::Real); });
    const WeakMeter tilted = qubit_meter(0.1, std::numbers::pi / 4.0);
    const WeakStatistics mixed = weak_statistics_exact(q.rho, q.w, q.v, q.u, tilted, qubit_meter(0.1), setting);
    expect_errc(Errc::CouplingPhase, [&] { weak_infer_tilde(mixed, {0, 0}, CouplingMode::Real); });
    const auto [ma, mb] = meter_pair(0.1, CouplingMode::Real);
    const WeakStatistics real = weak_statistics_exact(q.rho, q.w, q.v, q.u, ma, mb, setting);
    expect_errc(Errc::CouplingPhase, [&] { weak_infer_tilde(real, {0, 0}, CouplingMode::Imaginary); });
}

TEST(WeakSample, RejectsZeroTrials) {
    const Instance q = single_qubit();
    const auto [ma, mb] = meter_pair(0.1, CouplingMode::Real);
    const WeakStatistics stats = weak_statistics_exact(q.rho, q.w, q.v, q.u, ma, mb, WeakSetting{{0, 0}, {0, 0}, {0, 0}});
    expect_errc(Errc::InvalidArgument, [&] { weak_sample(stats, 0, 1); });
}

TEST(WeakSample, FrequenciesWithinDkwBound) {
    const Instance s = random_setup(906);
    const auto [ma, mb] = meter_pair(0.2, CouplingMode::Imaginary);
    const WeakStatistics exact = weak_statistics_exact(s.rho, s.w, s.v, s.u, ma, mb, WeakSetting{{1, 0}, {1, 0}, {3, 0}});
    const std::uint64_t n = 200000;
    int within = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const WeakStatistics empirical = empirical_statistics(exact, weak_sample(exact, n, seed));
        double cdf_e = 0.0, cdf_x = 0.0, worst = 0.0;
        for (std::size_t k = 0; k < exact.probability.size(); ++k) {
            cdf_e += empirical.probability[k];
            cdf_x += exact.probability[k];
            worst = std::max(worst, std::abs(cdf_e - cdf_x));
        }
        within += worst <= 5.0 / std::sqrt(static_cast<double>(n)) ? 1 : 0;
    }
    EXPECT_EQ(within, 20);
}

TEST(WeakSample, DeterministicAcrossThreads) {
    const Instance q = single_qubit();
    const auto [ma, mb] = meter_pair(0.1, CouplingMode::Real);
    const WeakStatistics stats = weak_statistics_exact(q.rho, q.w, q.v, q.u, ma, mb, WeakSetting{{0, 0}, {0, 0}, {0, 0}});
    const auto a = weak_sample(stats, 100000, 42, 1);
    const auto b = weak_sample(stats, 100000, 42, 4);
    const auto c = weak_sample(stats, 100000, 43, 1);
    ASSERT_EQ(a.size(), b.size());
    bool differs = a.size() != c.size();
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].count, b[k].count);
        EXPECT_EQ(a[k].x, b[k].x);
        EXPECT_EQ(a[k].y, b[k].y);
        EXPECT_TRUE(a[k].v2 == b[k].v2);
        if (k < c.size()) differs = differs || a[k].count != c[k].count;
        total += a[k].count;
    }
    EXPECT_EQ(total, 100000u);
    EXPECT_TRUE(differs);
}

TEST(WeakRun, SampledWithinThreeStandardErrors) {
    const Instance s = random_setup(907);
    const QuasiIndex idx{{1, 0}, {0, 0}, {2, 0}, {3, 0}};
    const WeakReport r = run_weak_inference(s.rho, s.w, s.v, s.u, idx, WeakRunOptions{0.05, 1000000, 17, 2});
    EXPECT_LE(std::abs(r.estimate.real() - r.exact_statistics_estimate.real()), 3.0 * r.standard_error_re);
    EXPECT_LE(std::abs(r.estimate.imag() - r.exact_statistics_estimate.imag()), 3.0 * r.standard_error_im);
    EXPECT_GT(r.standard_error_re, 0.0);
}

}  // namespace
}  // namespace otocqp
