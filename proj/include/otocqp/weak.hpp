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

// weak.hpp - simulation of the two-weak-measurement protocol for states
// diagonal in the W(t) eigenbasis, and inference of tilde-A from its
// statistics.
//
// One trial: prepare |w3,a3>, evolve with U^dag, weakly measure the projector
// onto |v1,l1> (meter a, outcome x), evolve with U, weakly measure the
// projector onto |w2,a2> (meter b, outcome y), evolve with U^dag, and measure
// V strongly (outcome (v2,l2)). The xy-correlation of the outcomes carries
// 2 Re(alpha D tilde-A) plus a known background, up to third order in the
// couplings.
//
// The general-state variant with three weak measurements is not simulated;
// its background terms are not available in closed form.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "otocqp/model.hpp"
#include "otocqp/parallel.hpp"
#include "otocqp/quasiprob.hpp"
#include "otocqp/rng.hpp"

namespace otocqp {

// Discrete meter: readings x with baseline probabilities p(x) and couplings
// g(x). Kraus operators are M_x = sqrt(p(x)) 1 + g(x) Pi before correction.
struct WeakMeter {
    std::vector<double> outcomes;
    std::vector<double> baseline;
    std::vector<Complex> coupling;
    double strength = 0.0;

    std::size_t size() const { return outcomes.size(); }
};

enum class CouplingMode { Real, Imaginary };

inline const char* coupling_mode_name(CouplingMode mode) {
    return mode == CouplingMode::Real ? "real" : "imaginary";
}

// Two-outcome meter x = +-1, p(x) = 1/2, g(x) = x * strength * e^{i phase}.
inline WeakMeter qubit_meter(double strength, double phase = 0.0) {
    const Complex g = strength * std::exp(Complex(0.0, phase));
    return WeakMeter{{1.0, -1.0}, {0.5, 0.5}, {g, -g}, strength};
}

inline double calibration_defect(const WeakMeter& meter) {
    double s = 0.0;
    for (std::size_t k = 0; k < meter.size(); ++k) s += meter.outcomes[k] * meter.baseline[k];
    return std::abs(s);
}

inline void validate_meter(const WeakMeter& meter) {
    if (meter.size() == 0 || meter.baseline.size() != meter.size() || meter.coupling.size() != meter.size()) {
        throw Error(Errc::InvalidArgument, "meter: outcome, baseline and coupling lists differ in length");
    }
    double total = 0.0;
    for (double p : meter.baseline) {
        if (p < 0.0) throw Error(Errc::InvalidArgument, "meter: negative baseline probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(Errc::InvalidArgument, "meter: baseline does not sum to 1");
    if (calibration_defect(meter) > 1e-12) {
        throw Error(Errc::InvalidArgument, "meter: not calibrated (sum x p(x) != 0)");
    }
}

inline void require_projector(const CMatrix& projector) {
    require_square(projector, "projector");
    if (max_abs(projector * projector - projector) > 1e-10 || hermiticity_defect(projector) > 1e-10) {
        throw Error(Errc::NotProjector, "operator is not an orthogonal projector");
    }
}

inline std::vector<CMatrix> raw_kraus_from_meter(const WeakMeter& meter, const CMatrix& projector) {
    validate_meter(meter);
    require_projector(projector);
    const Index d = projector.rows();
    std::vector<CMatrix> family;
    family.reserve(meter.size());
    for (std::size_t k = 0; k < meter.size(); ++k) {
        family.push_back(std::sqrt(meter.baseline[k]) * CMatrix::Identity(d, d) + meter.coupling[k] * projector);
    }
    return family;
}

inline double completeness_defect(const std::vector<CMatrix>& family) {
    if (family.empty()) return 0.0;
    CMatrix s = CMatrix::Zero(family.front().rows(), family.front().cols());
    for (const auto& m : family) s += m.adjoint() * m;
    return max_abs(s - CMatrix::Identity(s.rows(), s.cols()));
}

// Trace-preserving version of the family. The raw operators satisfy
// sum M^dag M = 1 + c Pi with c = O(g^2); every operator is multiplied on the
// right by (1 + c Pi)^{-1/2} = (1 - Pi) + Pi / sqrt(1 + c).
inline std::vector<CMatrix> kraus_from_meter(const WeakMeter& meter, const CMatrix& projector) {
    std::vector<CMatrix> family = raw_kraus_from_meter(meter, projector);
    double on_pi = 0.0;
    for (std::size_t k = 0; k < meter.size(); ++k) on_pi += std::norm(std::sqrt(meter.baseline[k]) + meter.coupling[k]);
    if (!(on_pi > 1e-12)) {
        throw Error(Errc::CompletenessUnreachable, "meter annihilates the projected subspace");
    }
    const Index d = projector.rows();
    const CMatrix fix = (CMatrix::Identity(d, d) - projector) + projector / std::sqrt(on_pi);
    for (auto& m : family) m = m * fix;
    const double defect = completeness_defect(family);
    if (!(defect < 1e-10)) {
        throw Error(Errc::CompletenessUnreachable, "completeness defect " + std::to_string(defect));
    }
    return family;
}

// sum_{x,y} x y sqrt(p_a(x) p_b(y)) g_a(x) g_b(y)
inline Complex coupling_alpha(const WeakMeter& a, const WeakMeter& b) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            s += a.outcomes[i] * b.outcomes[j] * std::sqrt(a.baseline[i] * b.baseline[j]) * a.coupling[i] * b.coupling[j];
    return s;
}

// Same sum with g_a conjugated; weights the background term.
inline Complex coupling_background(const WeakMeter& a, const WeakMeter& b) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            s += a.outcomes[i] * b.outcomes[j] * std::sqrt(a.baseline[i] * b.baseline[j]) *
                 std::conj(a.coupling[i]) * b.coupling[j];
    return s;
}

// Meter pair whose alpha is real (mode Real) or purely imaginary.
inline std::pair<WeakMeter, WeakMeter> meter_pair(double strength, CouplingMode mode) {
    const double phase = mode == CouplingMode::Real ? 0.0 : std::numbers::pi / 2.0;
    return {qubit_meter(strength, phase), qubit_meter(strength, 0.0)};
}

// Fixed labels of one weak experiment: the prepared |w3,a3>, the weakly
// measured |v1,l1> and |w2,a2>.
struct WeakSetting {
    OutcomeIndex w3;
    OutcomeIndex w2;
    OutcomeIndex v1;
};

struct WeakTrialRecord {
    double x = 0.0;
    double y = 0.0;
    OutcomeIndex v2;
    std::uint64_t count = 0;
};

// Joint distribution of (x, y, (v2,l2)) for one setting, exact or empirical.
struct WeakStatistics {
    WeakMeter meter_a;
    WeakMeter meter_b;
    WeakSetting setting;
    std::vector<OutcomeIndex> v_outcomes;  // flat V index -> (group, degeneracy)
    std::vector<double> probability;       // index (x * ny + y) * nv + v2
    std::vector<double> born_final;        // |<v2|U^dag|w3>|^2 per flat v2
    double p_w3 = 0.0;
    bool coincident_w = false;             // (w3,a3) == (w2,a2)
    std::size_t v1_flat = 0;
    std::uint64_t trials = 0;              // 0 for exact statistics

    std::size_t nx() const { return meter_a.size(); }
    std::size_t ny() const { return meter_b.size(); }
    std::size_t nv() const { return v_outcomes.size(); }
    double at(std::size_t x, std::size_t y, std::size_t v2) const { return probability[(x * ny() + y) * nv() + v2]; }
};

inline WeakStatistics weak_statistics_exact(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                                            const Propagator& u, const WeakMeter& meter_a, const WeakMeter& meter_b,
                                            const WeakSetting& setting) {
    require_compatible(rho, w, v, u, "weak_statistics_exact");
    const RVector populations = w_t_populations(rho, w, u);
    const std::size_t w3 = w.flat_index(setting.w3);
    const std::size_t w2 = w.flat_index(setting.w2);
    const std::size_t v1 = v.flat_index(setting.v1);

    const CVector ket_v1 = v.basis().col(static_cast<Index>(v1));
    const CVector ket_w2 = w.basis().col(static_cast<Index>(w2));
    const std::vector<CMatrix> ka = kraus_from_meter(meter_a, ket_v1 * ket_v1.adjoint());
    const std::vector<CMatrix> kb = kraus_from_meter(meter_b, ket_w2 * ket_w2.adjoint());

    WeakStatistics stats;
    stats.meter_a = meter_a;
    stats.meter_b = meter_b;
    stats.setting = setting;
    stats.p_w3 = populations(static_cast<Index>(w3));
    stats.coincident_w = w3 == w2;
    stats.v1_flat = v1;
    const auto nv = static_cast<std::size_t>(v.dim());
    for (std::size_t k = 0; k < nv; ++k) stats.v_outcomes.push_back(v.outcome(k));

    const CMatrix back = u.U.adjoint();
    const CMatrix v_bra = v.basis().adjoint();
    const CVector psi = back * w.basis().col(static_cast<Index>(w3));
    const CVector born = v_bra * psi;
    for (std::size_t k = 0; k < nv; ++k) stats.born_final.push_back(std::norm(born(static_cast<Index>(k))));

    stats.probability.assign(ka.size() * kb.size() * nv, 0.0);
    for (std::size_t x = 0; x < ka.size(); ++x) {
        const CVector after_a = u.U * (ka[x] * psi);
        for (std::size_t y = 0; y < kb.size(); ++y) {
            const CVector amplitudes = v_bra * (back * (kb[y] * after_a));
            for (std::size_t k = 0; k < nv; ++k) {
                stats.probability[(x * kb.size() + y) * nv + k] = std::norm(amplitudes(static_cast<Index>(k)));
            }
        }
    }
    return stats;
}

struct WeakInference {
    CouplingMode mode = CouplingMode::Real;
    double component = 0.0;  // Re or Im of tilde-A, per mode
    Complex alpha;
    double correlator = 0.0;  // sum x y P(x, y, v2)
    double background = 0.0;
};

inline CouplingMode classify_alpha(Complex alpha) {
    const double mag = std::abs(alpha);
    if (!(mag > 1e-300)) throw Error(Errc::ZeroCoupling, "coupling combination alpha vanishes");
    if (std::abs(alpha.imag()) <= 1e-12 * mag) return CouplingMode::Real;
    if (std::abs(alpha.real()) <= 1e-12 * mag) return CouplingMode::Imaginary;
    throw Error(Errc::CouplingPhase, "alpha is neither real nor purely imaginary");
}

// Re tilde-A = (I - B) p_w3 / (2 alpha) for real alpha; for alpha = i|alpha|
// the first term is -2|alpha| Im(D tilde-A), so Im tilde-A = -(I - B) p_w3 /
// (2 Im alpha). B is the background, nonzero only for coincident labels.
inline WeakInference weak_infer_tilde(const WeakStatistics& stats, OutcomeIndex v2, CouplingMode mode) {
    std::size_t v2_flat = stats.nv();
    for (std::size_t k = 0; k < stats.nv(); ++k)
        if (stats.v_outcomes[k] == v2) v2_flat = k;
    if (v2_flat == stats.nv()) throw Error(Errc::IndexOutOfRange, "weak_infer_tilde: v2 outside V spectrum");

    WeakInference out;
    out.mode = mode;
    out.alpha = coupling_alpha(stats.meter_a, stats.meter_b);
    if (classify_alpha(out.alpha) != mode) {
        throw Error(Errc::CouplingPhase, std::string("meters do not realize a ") + coupling_mode_name(mode) + " alpha");
    }
    for (std::size_t x = 0; x < stats.nx(); ++x)
        for (std::size_t y = 0; y < stats.ny(); ++y)
            out.correlator += stats.meter_a.outcomes[x] * stats.meter_b.outcomes[y] * stats.at(x, y, v2_flat);
    if (stats.coincident_w && v2_flat == stats.v1_flat) {
        out.background = 2.0 * coupling_background(stats.meter_a, stats.meter_b).real() * stats.born_final[v2_flat];
    }
    const double signal = out.correlator - out.background;
    out.component = mode == CouplingMode::Real ? signal * stats.p_w3 / (2.0 * out.alpha.real())
                                               : -signal * stats.p_w3 / (2.0 * out.alpha.imag());
    return out;
}

// One-sigma error of the inferred component from `trials` samples, using
// exact statistics for the variance of x y 1[v2].
inline double weak_standard_error(const WeakStatistics& exact, OutcomeIndex v2, std::uint64_t trials) {
    std::size_t v2_flat = exact.nv();
    for (std::size_t k = 0; k < exact.nv(); ++k)
        if (exact.v_outcomes[k] == v2) v2_flat = k;
    if (v2_flat == exact.nv()) throw Error(Errc::IndexOutOfRange, "weak_standard_error: v2 outside V spectrum");
    double first = 0.0, second = 0.0;
    for (std::size_t x = 0; x < exact.nx(); ++x)
        for (std::size_t y = 0; y < exact.ny(); ++y) {
            const double z = exact.meter_a.outcomes[x] * exact.meter_b.outcomes[y];
            first += z * exact.at(x, y, v2_flat);
            second += z * z * exact.at(x, y, v2_flat);
        }
    const double se_corr = std::sqrt(std::max(0.0, second - first * first) / static_cast<double>(trials));
    return se_corr * exact.p_w3 / (2.0 * std::abs(coupling_alpha(exact.meter_a, exact.meter_b)));
}

// N i.i.d. trials from the joint distribution, aggregated into counts and
// ordered by (x, y, v2).
inline std::vector<WeakTrialRecord> weak_sample(const WeakStatistics& stats, std::uint64_t trials,
                                                std::uint64_t seed, unsigned threads = 1) {
    if (trials < 1) throw Error(Errc::InvalidArgument, "weak_sample: trial count must be >= 1");
    std::vector<double> cumulative(stats.probability.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < cumulative.size(); ++k) cumulative[k] = acc += std::max(0.0, stats.probability[k]);
    if (!(acc > 0.0)) throw Error(Errc::InvalidArgument, "weak_sample: empty distribution");

    const std::size_t blocks = static_cast<std::size_t>((trials + kTrialBlock - 1) / kTrialBlock);
    std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(cumulative.size(), 0));
    parallel_for(blocks, threads, [&](std::size_t b) {
        auto engine = block_engine(seed, 0x5745414bULL, b);
        const std::uint64_t begin = b * kTrialBlock;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kTrialBlock);
        for (std::uint64_t i = begin; i < end; ++i) ++partial[b][sample_cumulative(cumulative, uniform01(engine))];
    });

    std::vector<WeakTrialRecord> records;
    for (std::size_t k = 0; k < cumulative.size(); ++k) {
        std::uint64_t count = 0;
        for (const auto& p : partial) count += p[k];
        if (count == 0) continue;
        const std::size_t v2 = k % stats.nv();
        const std::size_t xy = k / stats.nv();
        records.push_back(WeakTrialRecord{stats.meter_a.outcomes[xy / stats.ny()],
                                          stats.meter_b.outcomes[xy % stats.ny()], stats.v_outcomes[v2], count});
    }
    return records;
}

// Empirical frequencies in place of the exact probabilities.
inline WeakStatistics empirical_statistics(const WeakStatistics& exact, const std::vector<WeakTrialRecord>& records) {
    WeakStatistics out = exact;
    std::fill(out.probability.begin(), out.probability.end(), 0.0);
    std::uint64_t total = 0;
    for (const auto& r : records) total += r.count;
    if (total == 0) throw Error(Errc::InvalidArgument, "empirical_statistics: no trials");
    auto find = [](const std::vector<double>& values, double x) {
        for (std::size_t k = 0; k < values.size(); ++k)
            if (values[k] == x) return k;
        throw Error(Errc::IndexOutOfRange, "record reading not produced by this meter");
    };
    for (const auto& r : records) {
        const std::size_t x = find(exact.meter_a.outcomes, r.x);
        const std::size_t y = find(exact.meter_b.outcomes, r.y);
        std::size_t v2 = exact.nv();
        for (std::size_t k = 0; k < exact.nv(); ++k)
            if (exact.v_outcomes[k] == r.v2) v2 = k;
        if (v2 == exact.nv()) throw Error(Errc::IndexOutOfRange, "record outcome outside V spectrum");
        out.probability[(x * exact.ny() + y) * exact.nv() + v2] += static_cast<double>(r.count) / static_cast<double>(total);
    }
    out.trials = total;
    return out;
}

// ----------------------------- End-to-end run -------------------------------

struct WeakRunOptions {
    double strength = 0.05;
    std::uint64_t trials = 0;  // 0: exact statistics
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct WeakReport {
    Complex estimate;
    Complex exact_statistics_estimate;
    Complex oracle;                // tilde_A_closed
    double standard_error_re = 0.0;
    double standard_error_im = 0.0;
    std::vector<WeakTrialRecord> records_real;
    std::vector<WeakTrialRecord> records_imag;
};

// Re tilde-A from a real-alpha run, Im tilde-A from an imaginary-alpha run.
// The imaginary run draws from seed + 1.
inline WeakReport run_weak_inference(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                                     const Propagator& u, const QuasiIndex& target, const WeakRunOptions& options) {
    const WeakSetting setting{target.w3, target.w2, target.v1};
    WeakReport report;
    report.oracle = tilde_A_closed(rho, w, v, u, target);
    double parts[2] = {0.0, 0.0};
    double exact_parts[2] = {0.0, 0.0};
    for (const CouplingMode mode : {CouplingMode::Real, CouplingMode::Imaginary}) {
        const int k = mode == CouplingMode::Real ? 0 : 1;
        const auto [ma, mb] = meter_pair(options.strength, mode);
        const WeakStatistics exact = weak_statistics_exact(rho, w, v, u, ma, mb, setting);
        exact_parts[k] = weak_infer_tilde(exact, target.v2, mode).component;
        if (options.trials == 0) {
            parts[k] = exact_parts[k];
            continue;
        }
        auto records = weak_sample(exact, options.trials, options.seed + static_cast<std::uint64_t>(k), options.threads);
        parts[k] = weak_infer_tilde(empirical_statistics(exact, records), target.v2, mode).component;
        (k == 0 ? report.standard_error_re : report.standard_error_im) =
            weak_standard_error(exact, target.v2, options.trials);
        (k == 0 ? report.records_real : report.records_imag) = std::move(records);
    }
    report.estimate = Complex(parts[0], parts[1]);
    report.exact_statistics_estimate = Complex(exact_parts[0], exact_parts[1]);
    return report;
}

}  // namespace otocqp
