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

// acceptance.hpp - the acceptance suite behind `otocqp selftest` and the
// acceptance test binary. Seeds and tolerances are fixed here.

#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "otocqp/instances.hpp"
#include "otocqp/interference.hpp"
#include "otocqp/otoc.hpp"
#include "otocqp/quasiprob.hpp"
#include "otocqp/random.hpp"
#include "otocqp/weak.hpp"

namespace otocqp::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;      // deterministic for fixed seeds
    double seconds = 0.0;    // wall time, reported separately
};

struct AcceptanceOptions {
    unsigned threads = 1;
    bool inject_kraus_fault = false;  // negative control for the completeness check
    std::uint64_t seed = 20260417;
};

namespace detail {

inline std::string fmt(const char* format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x);
    return buf;
}

inline std::string sci(double x) { return fmt("%.3e", x); }

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 20 random instances plus a 3-site transverse-field Ising chain at T = 1.
inline std::vector<TheoremInstance> theorem_instances(std::uint64_t seed) {
    std::vector<TheoremInstance> out;
    for (std::size_t i = 0; i < 20; ++i) out.push_back(random_theorem_instance(i, seed));
    const Hamiltonian h = build_tfim(3, 1.0, 1.05, 0.5);
    const HermitianEigen spectrum = eig_hermitian(h.matrix);
    out.push_back(TheoremInstance{"tfim n=3 gibbs(T=1) t=1.3", gibbs_state(spectrum, 1.0),
                                  pauli_site(3, 0, Axis::Z), pauli_site(3, 2, Axis::X),
                                  make_propagator(spectrum, 1.3, h.label)});
    return out;
}

struct SingleQubit {
    DensityOperator rho = maximally_mixed(2);
    EigenUnitary w = pauli_site(1, 0, Axis::Z);
    EigenUnitary v = pauli_site(1, 0, Axis::X);
    Propagator u = identity_propagator(2);
};

}  // namespace detail

inline constexpr double kTheoremTol = 1e-9;
inline constexpr double kTheoremSeconds = 30.0;
inline constexpr double kFdStep = 1e-4;
inline constexpr double kFdTol = 1e-6;
inline constexpr double kOrderStep = 1e-2;  // truncation-dominated step for the order check
inline constexpr double kOrderLow = 3.5, kOrderHigh = 4.5;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kMarginalTol = 1e-12;
inline constexpr double kClosedSumTol = 1e-12;
inline constexpr double kCoincidentTol = 1e-12;
inline constexpr double kRealTol = 1e-10;
inline constexpr double kPauliBinTol = 1e-12;
inline constexpr double kWeakSlopeMin = 0.9;
inline constexpr double kWeakSeconds = 5.0;
inline constexpr double kKrausTol = 1e-10;
inline constexpr std::uint64_t kWeakTrials = 1000000;
inline constexpr double kInterfExactTol = 1e-10;
inline constexpr double kInterfAssembledTol = 1e-9;
inline constexpr std::uint64_t kInterfTrials = 100000;
inline constexpr double kAnchorTol = 1e-12;

// 1. Moment of P(W, W') equals the directly computed OTOC.
inline CriterionResult criterion_theorem(const AcceptanceOptions& opts,
                                         const std::vector<TheoremInstance>& instances) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    VerifyOptions vopts;
    vopts.threads = opts.threads;
    for (const auto& inst : instances) {
        worst = std::max(worst, verify_theorem(inst.rho, inst.w, inst.v, inst.u, vopts).moment_error);
    }
    const double elapsed = detail::seconds_since(start);
    CriterionResult r{1, "moment of P(W,W') equals direct OTOC", worst < kTheoremTol && elapsed < kTheoremSeconds,
                      std::to_string(instances.size()) + " instances, max error " + detail::sci(worst) +
                          " (tol 1e-09), time limit 30 s",
                      elapsed};
    if (elapsed >= kTheoremSeconds) r.detail += " EXCEEDED";
    return r;
}

// 2. Finite-difference derivative of the characteristic function.
inline CriterionResult criterion_finite_difference(const std::vector<TheoremInstance>& instances) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::size_t order_hits = 0;
    double best_ratio = 0.0;
    for (const auto& inst : instances) {
        const auto d = static_cast<std::size_t>(inst.rho.dim());
        const ComplexDistribution dist = d > kTableDimCap ? stream_P(inst.rho, inst.w, inst.v, inst.u)
                                                          : build_P(QuasiAmplitudeTable::build(inst.rho, inst.w,
                                                                                               inst.v, inst.u));
        const Complex moment = jarzynski_moment(dist);
        worst = std::max(worst, std::abs(jarzynski_fd(dist, kFdStep) - moment));
        const double gap_h = std::abs(jarzynski_fd(dist, kOrderStep) - moment);
        const double gap_half = std::abs(jarzynski_fd(dist, kOrderStep / 2.0) - moment);
        const double ratio = gap_h / gap_half;
        if (ratio >= kOrderLow && ratio <= kOrderHigh) ++order_hits;
        if (std::abs(ratio - 4.0) < std::abs(best_ratio - 4.0)) best_ratio = ratio;
    }
    return CriterionResult{2, "finite-difference derivative matches moment",
                           worst < kFdTol && order_hits > 0,
                           "max |fd(1e-4) - moment| " + detail::sci(worst) + " (tol 1e-06); gap ratio h=1e-2 vs 5e-3 "
                               "in [3.5, 4.5] on " + std::to_string(order_hits) + "/" +
                               std::to_string(instances.size()) + " instances (closest " +
                               detail::fmt("%.4f", best_ratio) + ")",
                           detail::seconds_since(start)};
}

// 3. Normalization and single-variable marginals of tilde-A.
inline CriterionResult criterion_marginals(const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    double norm_err = 0.0, imag_err = 0.0, neg = 0.0, sum_err = 0.0, born_err = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const TheoremInstance inst = random_theorem_instance(i, opts.seed + 3);
        const auto table = QuasiAmplitudeTable::build(inst.rho, inst.w, inst.v, inst.u, opts.threads);
        norm_err = std::max(norm_err, std::abs(table.total() - 1.0));
        for (const Slot slot : {Slot::W2, Slot::W3, Slot::V1, Slot::V2}) {
            const auto m = table.marginal(slot);
            Complex sum(0.0, 0.0);
            for (const Complex& x : m) {
                imag_err = std::max(imag_err, std::abs(x.imag()));
                neg = std::max(neg, -x.real());
                sum += x;
            }
            sum_err = std::max(sum_err, std::abs(sum - 1.0));
        }
        const auto v1 = table.marginal(Slot::V1);
        for (std::size_t k = 0; k < v1.size(); ++k) {
            const CVector ket = inst.v.basis().col(static_cast<Index>(k));
            born_err = std::max(born_err, std::abs(v1[k] - ket.dot(inst.rho.matrix * ket)));
        }
    }
    const bool pass = norm_err < kNormTol && imag_err < kMarginalTol && neg <= kMarginalTol && sum_err < kNormTol &&
                      born_err < kNormTol;
    return CriterionResult{3, "tilde-A normalization and marginals", pass,
                           "10 instances: |sum-1| " + detail::sci(norm_err) + ", max |Im marginal| " +
                               detail::sci(imag_err) + ", max negativity " + detail::sci(std::max(0.0, neg)) +
                               ", marginal sum error " + detail::sci(sum_err) + ", v1 vs Born " +
                               detail::sci(born_err),
                           detail::seconds_since(start)};
}

// 4. Closed form against the brute-force sum over j and (w1, a1).
inline CriterionResult criterion_closed_vs_sum(const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(opts.seed + 4);
    double worst = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        const TheoremInstance inst = random_theorem_instance(i, opts.seed + 4);
        const auto d = static_cast<std::size_t>(inst.rho.dim());
        std::uniform_int_distribution<std::size_t> pick(0, d - 1);
        for (int q = 0; q < 10; ++q, ++count) {
            const QuasiIndex idx{inst.w.outcome(pick(rng)), inst.w.outcome(pick(rng)), inst.v.outcome(pick(rng)),
                                 inst.v.outcome(pick(rng))};
            worst = std::max(worst, std::abs(tilde_A_closed(inst.rho, inst.w, inst.v, inst.u, idx) -
                                              tilde_A_sum(inst.rho, inst.w, inst.v, inst.u, idx)));
        }
    }
    return CriterionResult{4, "closed-form tilde-A equals brute-force sum", worst < kClosedSumTol,
                           std::to_string(count) + " quadruples on 5 instances, max gap " + detail::sci(worst) +
                               " (tol 1e-12)",
                           detail::seconds_since(start)};
}

// 5. rho = 1/D with (w3,a3) = (w2,a2): product of two Born conditionals / D.
inline CriterionResult criterion_coincident(const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        Rng rng(opts.seed + 50 + i);
        const Index d = Index{2} << i;
        const CMatrix h = random_hermitian(d, rng, 2.0);
        const HermitianEigen spectrum = eig_hermitian(h);
        const double t = 0.37 + 0.4 * static_cast<double>(i);
        const EigenUnitary w = eigen_unitary_from_generator(random_hermitian(d, rng, 3.0));
        const EigenUnitary v = eigen_unitary_from_generator(random_degenerate_generator(d, std::max<Index>(1, d / 2), rng));
        const DensityOperator rho = maximally_mixed(d);
        const Propagator u = make_propagator(spectrum, t);
        // Born rule: evolve |w2> backwards in the energy eigenbasis, then
        // project onto |v>.
        for (Index a = 0; a < d; ++a) {
            const CVector wa = w.basis().col(a);
            CVector psi = CVector::Zero(d);
            for (Index k = 0; k < d; ++k) {
                const CVector ek = spectrum.eigenvectors.col(k);
                psi += std::exp(kI * spectrum.eigenvalues(k) * t) * ek.dot(wa) * ek;
            }
            for (Index b1 = 0; b1 < d; ++b1)
                for (Index b2 = 0; b2 < d; ++b2, ++count) {
                    const double p1 = std::norm(v.basis().col(b1).dot(psi));
                    const double p2 = std::norm(v.basis().col(b2).dot(psi));
                    const auto wo = w.outcome(static_cast<std::size_t>(a));
                    const QuasiIndex idx{wo, wo, v.outcome(static_cast<std::size_t>(b1)),
                                         v.outcome(static_cast<std::size_t>(b2))};
                    const Complex value = tilde_A_closed(rho, w, v, u, idx);
                    worst = std::max(worst, std::abs(value - p2 * p1 / static_cast<double>(d)));
                }
        }
    }
    return CriterionResult{5, "coincident labels reduce to Born probabilities", worst < kCoincidentTol,
                           std::to_string(count) + " entries over D in {2,4,8,16}, max gap " + detail::sci(worst) +
                               " (tol 1e-12)",
                           detail::seconds_since(start)};
}

// 6. Pauli W and V: four bins at (+-1, +-1); real OTOC at infinite temperature.
inline CriterionResult criterion_pauli(const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    bool bins_ok = true;
    double bin_err = 0.0, imag_err = 0.0;
    std::size_t cases = 0;
    const Hamiltonian h = build_tfim(3, 1.0, 1.05, 0.5);
    const HermitianEigen spectrum = eig_hermitian(h.matrix);
    const std::pair<Axis, Axis> axes[] = {{Axis::Z, Axis::Z}, {Axis::Z, Axis::X}, {Axis::X, Axis::Y}};
    for (const auto& [aw, av] : axes)
        for (const double t : {0.0, 0.6, 1.7})
            for (int state = 0; state < 2; ++state, ++cases) {
                const DensityOperator rho = state == 0 ? maximally_mixed(8) : gibbs_state(spectrum, 1.0);
                const EigenUnitary w = pauli_site(3, 0, aw), v = pauli_site(3, 2, av);
                const auto dist = build_P(QuasiAmplitudeTable::build(rho, w, v, make_propagator(spectrum, t),
                                                                     opts.threads));
                bins_ok = bins_ok && dist.size() == 4;
                for (const auto& [key, bin] : dist.bins()) {
                    bin_err = std::max({bin_err, std::abs(bin.w.imag()), std::abs(bin.w_prime.imag()),
                                        std::abs(std::abs(bin.w.real()) - 1.0),
                                        std::abs(std::abs(bin.w_prime.real()) - 1.0)});
                }
                if (state == 0) imag_err = std::max(imag_err, std::abs(jarzynski_moment(dist).imag()));
            }
    const bool pass = bins_ok && bin_err < kPauliBinTol && imag_err < kRealTol;
    return CriterionResult{6, "Pauli operators give four real bins", pass,
                           std::to_string(cases) + " cases, four bins each: " + (bins_ok ? "yes" : "no") +
                               ", bin offset " + detail::sci(bin_err) + ", max |Im sum WW'P| at 1/D " +
                               detail::sci(imag_err),
                           detail::seconds_since(start)};
}

// 7. Weak-measurement inference from exact statistics, plus completeness of
// the corrected Kraus family.
inline CriterionResult criterion_weak_exact(const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const detail::SingleQubit q;
    const QuasiIndex idx{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
    const Complex oracle = tilde_A_closed(q.rho, q.w, q.v, q.u, idx);
    const double strengths[] = {0.2, 0.1, 0.05};
    double log_g[3], log_e[3], err_smallest = 0.0;
    for (int k = 0; k < 3; ++k) {
        const WeakReport r = run_weak_inference(q.rho, q.w, q.v, q.u, idx, WeakRunOptions{strengths[k], 0, 0, 1});
        const double err = std::abs(r.estimate - oracle);
        log_g[k] = std::log(strengths[k]);
        log_e[k] = std::log(err);
        err_smallest = err;
    }
    const double mg = (log_g[0] + log_g[1] + log_g[2]) / 3.0, me = (log_e[0] + log_e[1] + log_e[2]) / 3.0;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 3; ++k) {
        num += (log_g[k] - mg) * (log_e[k] - me);
        den += (log_g[k] - mg) * (log_g[k] - mg);
    }
    const double slope = num / den;
    const double bound = 0.1 * std::abs(oracle) + 1e-3;

    double kraus_defect = 0.0;
    for (const double g : strengths) {
        for (const CouplingMode mode : {CouplingMode::Real, CouplingMode::Imaginary}) {
            const auto [ma, mb] = meter_pair(g, mode);
            for (const WeakMeter* m : {&ma, &mb}) {
                const CVector ket = q.v.basis().col(0);
                std::vector<CMatrix> family = kraus_from_meter(*m, ket * ket.adjoint());
                if (opts.inject_kraus_fault) family.front()(0, 0) += 1e-3;
                kraus_defect = std::max(kraus_defect, completeness_defect(family));
            }
        }
    }
    const double elapsed = detail::seconds_since(start);
    const bool pass = std::isfinite(slope) && slope >= kWeakSlopeMin && err_smallest < bound &&
                      kraus_defect < kKrausTol && elapsed < kWeakSeconds;
    CriterionResult r{7, "weak measurement, exact statistics", pass,
                      "log-log slope " + detail::fmt("%.3f", slope) + " (min 0.9), error at g=0.05 " +
                          detail::sci(err_smallest) + " (bound " + detail::sci(bound) + "), Kraus completeness " +
                          detail::sci(kraus_defect) + " (tol 1e-10), time limit 5 s",
                      elapsed};
    if (elapsed >= kWeakSeconds) r.detail += " EXCEEDED";
    return r;
}

// 8. Sampled weak measurement: within three standard errors, reproducible.
inline CriterionResult criterion_weak_sampled(const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const detail::SingleQubit q;
    const QuasiIndex idx{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
    const WeakRunOptions wopts{0.05, kWeakTrials, opts.seed + 8, opts.threads};
    const WeakReport a = run_weak_inference(q.rho, q.w, q.v, q.u, idx, wopts);
    const WeakReport b = run_weak_inference(q.rho, q.w, q.v, q.u, idx, wopts);
    const double dev_re = std::abs(a.estimate.real() - a.exact_statistics_estimate.real());
    const double dev_im = std::abs(a.estimate.imag() - a.exact_statistics_estimate.imag());
    auto same = [](const std::vector<WeakTrialRecord>& x, const std::vector<WeakTrialRecord>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].x != y[i].x || x[i].y != y[i].y || !(x[i].v2 == y[i].v2) || x[i].count != y[i].count)
                return false;
        return true;
    };
    const bool reproducible = a.estimate == b.estimate && same(a.records_real, b.records_real) &&
                              same(a.records_imag, b.records_imag);
    const bool pass = dev_re <= 3.0 * a.standard_error_re && dev_im <= 3.0 * a.standard_error_im && reproducible;
    return CriterionResult{8, "weak measurement, sampled", pass,
                           "N=1e6 g=0.05: |dRe| " + detail::sci(dev_re) + " vs 3 SE " +
                               detail::sci(3.0 * a.standard_error_re) + ", |dIm| " + detail::sci(dev_im) +
                               " vs 3 SE " + detail::sci(3.0 * a.standard_error_im) + ", same seed identical: " +
                               (reproducible ? "yes" : "no"),
                           detail::seconds_since(start)};
}

// 9. Interference inference of transition amplitudes and assembled tilde-A.
inline CriterionResult criterion_interference(const AcceptanceOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(opts.seed + 9);
    const double theta = std::numbers::pi / 2.0, phi = std::numbers::pi / 2.0;
    double exact_err = 0.0, closed_form_err = 0.0;
    std::size_t sampled_ok = 0, sampled_runs = 0;
    for (int k = 0; k < 20; ++k) {
        const Index d = Index{2} << (k % 3);
        const CMatrix evo = random_unitary(d, rng);
        const CVector a = random_unit_vector(d, rng), b = random_unit_vector(d, rng);
        const Complex z = a.dot(evo * b);
        const auto est = interference_infer_z(evo, a, b, theta, phi);
        exact_err = std::max(exact_err, std::abs(est.z - z));
        for (const Axis axis : {Axis::X, Axis::Y}) {
            for (const double angle : {0.3, 1.1, 2.5}) {
                const double p = interference_probability(InterferenceJob{a, b, Direction::Forward, angle, axis}, evo);
                closed_form_err = std::max(closed_form_err, std::abs(p - interference_closed_form(z, angle, axis)));
            }
        }
        if (k < 3) {
            ++sampled_runs;
            const auto s = interference_infer_z(evo, a, b, theta, phi,
                                                SamplingPlan{kInterfTrials, opts.seed + 90 + static_cast<unsigned>(k)});
            if (std::abs(s.z - z) < 3.0 * std::hypot(s.sigma_re, s.sigma_im)) ++sampled_ok;
        }
    }
    double assembled_err = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        Rng r2(opts.seed + 900 + i);
        const Index d = Index{2} << (i % 3);
        const HermitianEigen spectrum = eig_hermitian(random_hermitian(d, r2, 2.0));
        const EigenUnitary w = eigen_unitary_from_generator(random_hermitian(d, r2, 3.0));
        const EigenUnitary v = eigen_unitary_from_generator(random_hermitian(d, r2, 3.0));
        const DensityOperator rho = maximally_mixed(d);
        const Propagator u = make_propagator(spectrum, 0.5 + 0.25 * static_cast<double>(i));
        std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(d) - 1);
        for (int q = 0; q < 4; ++q) {
            const QuasiIndex idx{w.outcome(pick(r2)), w.outcome(pick(r2)), v.outcome(pick(r2)), v.outcome(pick(r2))};
            const auto assembled = assemble_tilde_interference(rho, w, v, u, idx);
            assembled_err = std::max(assembled_err, std::abs(assembled.estimate - tilde_A_closed(rho, w, v, u, idx)));
        }
    }
    const bool pass = exact_err < kInterfExactTol && closed_form_err < kInterfExactTol &&
                      assembled_err < kInterfAssembledTol && sampled_ok == sampled_runs;
    return CriterionResult{9, "interference inference", pass,
                           "20 triples: z error " + detail::sci(exact_err) + ", probability vs closed form " +
                               detail::sci(closed_form_err) + " (tol 1e-10); assembled tilde-A error " +
                               detail::sci(assembled_err) + " (tol 1e-09); sampled N=1e5 within 3 sigma " +
                               std::to_string(sampled_ok) + "/" + std::to_string(sampled_runs),
                           detail::seconds_since(start)};
}

// 10. Trivial anchors.
inline CriterionResult criterion_anchors() {
    const auto start = std::chrono::steady_clock::now();
    const Hamiltonian h = build_tfim(3, 1.0, 1.05, 0.5);
    const HermitianEigen spectrum = eig_hermitian(h.matrix);
    double v_identity = 0.0;
    for (const double t : {0.0, 0.7, 1.9}) {
        const Propagator u = make_propagator(spectrum, t);
        v_identity = std::max(v_identity, std::abs(otoc_direct(gibbs_state(spectrum, 1.0), pauli_site(3, 0, Axis::Z),
                                                               identity_unitary(8), u).value - 1.0));
    }
    const Hamiltonian zero = make_hamiltonian(CMatrix::Zero(4, 4), "zero");
    const HermitianEigen zero_spec = eig_hermitian(zero.matrix);
    double disjoint = 0.0;
    for (const double t : {0.0, 1.0, 2.0}) {
        disjoint = std::max(disjoint, std::abs(otoc_direct(maximally_mixed(4), pauli_site(2, 0, Axis::X),
                                                           pauli_site(2, 1, Axis::Z), make_propagator(zero_spec, t))
                                                   .value - 1.0));
    }
    const detail::SingleQubit q;
    const Complex direct = otoc_direct(q.rho, q.w, q.v, q.u).value;
    const Complex moment = jarzynski_moment(build_P(QuasiAmplitudeTable::build(q.rho, q.w, q.v, q.u)));
    const double minus_one = std::max(std::abs(direct + 1.0), std::abs(moment + 1.0));
    const bool pass = v_identity < kAnchorTol && disjoint < kAnchorTol && minus_one < kAnchorTol;
    return CriterionResult{10, "trivial anchors", pass,
                           "V=1: " + detail::sci(v_identity) + ", disjoint Paulis H=0: " + detail::sci(disjoint) +
                               ", single qubit -1 (direct and moment): " + detail::sci(minus_one) + " (tol 1e-12)",
                           detail::seconds_since(start)};
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {}) {
    std::vector<CriterionResult> out;
    const auto instances = detail::theorem_instances(opts.seed);
    out.push_back(criterion_theorem(opts, instances));
    out.push_back(criterion_finite_difference(instances));
    out.push_back(criterion_marginals(opts));
    out.push_back(criterion_closed_vs_sum(opts));
    out.push_back(criterion_coincident(opts));
    out.push_back(criterion_pauli(opts));
    out.push_back(criterion_weak_exact(opts));
    out.push_back(criterion_weak_sampled(opts));
    out.push_back(criterion_interference(opts));
    out.push_back(criterion_anchors());
    return out;
}

inline std::string format_line(const CriterionResult& r) {
    char head[32];
    std::snprintf(head, sizeof head, "%s criterion %2d: ", r.pass ? "PASS" : "FAIL", r.id);
    return head + r.name + " | " + r.detail;
}

}  // namespace otocqp::acceptance
