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

// interference.hpp - ancilla interferometry for inner products z = <a|U|b>
// and assembly of tilde-A from four such inner products and a state factor.
//
// Circuit: ancilla (|0> + |1>)/sqrt(2); the system is brought to U|b> on the
// |0> branch and to |a> on the |1> branch; the ancilla is rotated by
// cos(angle/2) 1 - i sin(angle/2) sigma (sigma = sigma_x or sigma_y); the
// ancilla's sigma_z and the system's {|a>} are measured. Expanding the state
// gives
//   Prob(+1, a) = 1/2 [cos^2(angle/2) |z|^2 - sin(angle) Im z + sin^2(angle/2)]
// for sigma_x, and the same with Re z for sigma_y.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <tuple>
#include <utility>

#include "otocqp/model.hpp"
#include "otocqp/quasiprob.hpp"
#include "otocqp/rng.hpp"

namespace otocqp {

enum class Direction { Forward, Reverse };  // U or U^dag

struct InterferenceJob {
    CVector a;
    CVector b;
    Direction direction = Direction::Forward;
    double angle = std::numbers::pi / 2.0;
    Axis axis = Axis::X;
};

inline CMatrix evolution_for(const Propagator& u, Direction direction) {
    return direction == Direction::Forward ? u.U : CMatrix(u.U.adjoint());
}

// Prob(ancilla = +1, system = a) by explicit state-vector simulation.
inline double interference_probability(const InterferenceJob& job, const CMatrix& evolution) {
    require_square(evolution, "interference_probability");
    require_same_dim(evolution.rows(), job.a.size(), "interference_probability");
    require_same_dim(evolution.rows(), job.b.size(), "interference_probability");
    if (!(unitarity_defect(evolution) < kTolUnitary)) {
        throw Error(Errc::NotUnitary, "interference_probability: evolution is not unitary");
    }
    if (job.axis == Axis::Z) throw Error(Errc::InvalidArgument, "ancilla rotation axis must be x or y");
    const Index d = evolution.rows();
    const double r = 1.0 / std::numbers::sqrt2;

    CVector state(2 * d);
    state.head(d) = r * (evolution * job.b);
    state.tail(d) = r * job.a;

    const double c = std::cos(job.angle / 2.0);
    const double s = std::sin(job.angle / 2.0);
    const CMatrix rotation = c * CMatrix::Identity(2, 2) - kI * s * pauli(job.axis);
    const CVector rotated = tensor(rotation, CMatrix::Identity(d, d)) * state;

    return std::norm(job.a.dot(rotated.head(d)));
}

inline double interference_probability(const InterferenceJob& job, const Propagator& u) {
    return interference_probability(job, evolution_for(u, job.direction));
}

// |<a|U|b>|^2 by preparing U|b> and measuring {|a>}.
inline double born_probability(const CVector& a, const CVector& b, const CMatrix& evolution) {
    return std::norm(a.dot(evolution * b));
}

// Closed form of interference_probability, used as a cross-check.
inline double interference_closed_form(Complex z, double angle, Axis axis) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const double part = axis == Axis::X ? z.imag() : z.real();
    return 0.5 * (c * c * std::norm(z) - std::sin(angle) * part + s * s);
}

struct SamplingPlan {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

struct InterferenceEstimate {
    Complex z;
    double prob_x = 0.0;    // Prob(+1, a), x-axis run
    double prob_y = 0.0;    // Prob(+1, a), y-axis run
    double modulus2 = 0.0;  // |z|^2
    double sigma_re = 0.0;  // zero in exact mode
    double sigma_im = 0.0;
};

inline void require_regular_angle(double angle) {
    if (!std::isfinite(angle) || std::abs(std::sin(angle)) < 1e-12) {
        throw Error(Errc::SingularAngle, "rotation angle " + std::to_string(angle) + " has sin = 0");
    }
}

// Solve Prob = 1/2 [c^2 |z|^2 - sin(angle) part + s^2] for part.
inline double solve_part(double prob, double modulus2, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return (c * c * modulus2 + s * s - 2.0 * prob) / std::sin(angle);
}

// One-sigma errors of (Re z, Im z) for binomial estimates from `trials` shots
// of each of the three measured probabilities.
inline std::pair<double, double> interference_sigma(double prob_x, double prob_y, double modulus2, double theta,
                                                    double phi, std::uint64_t trials) {
    const double n = static_cast<double>(trials);
    const double var_q = modulus2 * (1.0 - modulus2) / n;
    auto sigma = [&](double prob, double angle) {
        const double c2 = std::pow(std::cos(angle / 2.0), 2);
        const double var_p = prob * (1.0 - prob) / n;
        return std::sqrt(std::max(0.0, c2 * c2 * var_q + 4.0 * var_p)) / std::abs(std::sin(angle));
    };
    return {sigma(prob_y, phi), sigma(prob_x, theta)};
}

inline double sample_frequency(double probability, std::uint64_t trials, std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t hits = 0;
    const std::size_t blocks = static_cast<std::size_t>((trials + kTrialBlock - 1) / kTrialBlock);
    for (std::size_t b = 0; b < blocks; ++b) {
        auto engine = block_engine(seed, stream, b);
        const std::uint64_t begin = b * kTrialBlock;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kTrialBlock);
        for (std::uint64_t i = begin; i < end; ++i) hits += uniform01(engine) < probability ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

// z = <a|evolution|b> from an x-axis run (angle theta, gives Im z), a y-axis
// run (angle phi, gives Re z) and an independent |z|^2 measurement.
inline InterferenceEstimate interference_infer_z(const CMatrix& evolution, const CVector& a, const CVector& b,
                                                 double theta, double phi,
                                                 std::optional<SamplingPlan> sampling = std::nullopt) {
    require_regular_angle(theta);
    require_regular_angle(phi);
    InterferenceEstimate est;
    est.prob_x = interference_probability(InterferenceJob{a, b, Direction::Forward, theta, Axis::X}, evolution);
    est.prob_y = interference_probability(InterferenceJob{a, b, Direction::Forward, phi, Axis::Y}, evolution);
    est.modulus2 = born_probability(a, b, evolution);
    if (sampling) {
        if (sampling->trials < 1) throw Error(Errc::InvalidArgument, "sampled interference needs trials >= 1");
        est.modulus2 = sample_frequency(est.modulus2, sampling->trials, sampling->seed, 1);
        est.prob_x = sample_frequency(est.prob_x, sampling->trials, sampling->seed, 2);
        est.prob_y = sample_frequency(est.prob_y, sampling->trials, sampling->seed, 3);
        std::tie(est.sigma_re, est.sigma_im) =
            interference_sigma(est.prob_x, est.prob_y, est.modulus2, theta, phi, sampling->trials);
    }
    est.z = Complex(solve_part(est.prob_y, est.modulus2, phi), solve_part(est.prob_x, est.modulus2, theta));
    return est;
}

// ------------------------------ tilde-A assembly ----------------------------

enum class StateBasis { WTime, V };

struct InterferenceOptions {
    double theta = std::numbers::pi / 2.0;
    double phi = std::numbers::pi / 2.0;
    std::optional<SamplingPlan> sampling;
};

struct AssembledTilde {
    Complex estimate;
    std::array<InterferenceEstimate, 4> factors;  // <w3|U|v2>, <v2|U^dag|w2>, <w2|U|v1>, <v1|U^dag|w3>
    double population = 0.0;                      // p in M = <v1|U^dag|w3> p
    StateBasis basis = StateBasis::WTime;
    double error_budget = 0.0;                    // p sum_k |prod_{j!=k} z_j| sigma_k
};

// Population p for which <v1|rho U^dag|w3> = p <v1|U^dag|w3>.
inline std::pair<StateBasis, double> state_factor_population(const DensityOperator& rho, const EigenUnitary& w,
                                                             const EigenUnitary& v, const Propagator& u,
                                                             const QuasiIndex& idx) {
    try {
        const RVector p = w_t_populations(rho, w, u);
        return {StateBasis::WTime, p(static_cast<Index>(w.flat_index(idx.w3)))};
    } catch (const Error& e) {
        if (e.code() != Errc::BasisMismatch) throw;
    }
    const CMatrix in_v = v.basis().adjoint() * rho.matrix * v.basis();
    const CMatrix off = in_v - CMatrix(in_v.diagonal().asDiagonal());
    if (max_abs(off) > 1e-8) {
        throw Error(Errc::UnsupportedState, "state is diagonal in neither the W(t) nor the V eigenbasis");
    }
    return {StateBasis::V, in_v.diagonal().real()(static_cast<Index>(v.flat_index(idx.v1)))};
}

inline AssembledTilde assemble_tilde_interference(const DensityOperator& rho, const EigenUnitary& w,
                                                  const EigenUnitary& v, const Propagator& u, const QuasiIndex& idx,
                                                  const InterferenceOptions& options = {}) {
    require_compatible(rho, w, v, u, "assemble_tilde_interference");
    AssembledTilde out;
    std::tie(out.basis, out.population) = state_factor_population(rho, w, v, u, idx);

    const CMatrix forward = u.U;
    const CMatrix reverse = u.U.adjoint();
    const CVector w2 = w.vector(idx.w2), w3 = w.vector(idx.w3);
    const CVector v1 = v.vector(idx.v1), v2 = v.vector(idx.v2);
    struct Factor {
        const CVector* a;
        const CVector* b;
        const CMatrix* evolution;
    };
    const std::array<Factor, 4> plan{{{&w3, &v2, &forward}, {&v2, &w2, &reverse}, {&w2, &v1, &forward},
                                      {&v1, &w3, &reverse}}};
    for (std::size_t k = 0; k < plan.size(); ++k) {
        std::optional<SamplingPlan> sampling = options.sampling;
        if (sampling) sampling->seed += k;
        out.factors[k] = interference_infer_z(*plan[k].evolution, *plan[k].a, *plan[k].b, options.theta,
                                              options.phi, sampling);
    }
    Complex product = out.population;
    for (const auto& f : out.factors) product *= f.z;
    out.estimate = product;

    for (std::size_t k = 0; k < 4; ++k) {
        double others = out.population;
        for (std::size_t j = 0; j < 4; ++j)
            if (j != k) others *= std::abs(out.factors[j].z);
        out.error_budget += others * std::hypot(out.factors[k].sigma_re, out.factors[k].sigma_im);
    }
    return out;
}

}  // namespace otocqp
