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

// runner.hpp - executes one experiment config and writes its outputs.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otocqp/cli/config.hpp"
#include "otocqp/cli/report.hpp"
#include "otocqp/instances.hpp"
#include "otocqp/interference.hpp"
#include "otocqp/otoc.hpp"
#include "otocqp/quasiprob.hpp"
#include "otocqp/weak.hpp"

namespace otocqp::cli {

inline constexpr double kOtocBoundTol = 1e-9;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kMarginalImagTol = 1e-12;
inline constexpr double kMomentTol = 1e-9;
inline constexpr double kFdTol = 1e-6;
inline constexpr double kCharOriginTol = 1e-9;
inline constexpr double kInterfExactTol = 1e-9;

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;  // overrides params.seed
    unsigned threads = 1;
};

struct RunResult {
    Report report;
    std::map<std::string, CsvTable> tables;  // file name -> table; results.csv always present
};

struct Physics {
    int sites = 0;  // 0 when the Hamiltonian is not a qubit chain
    Hamiltonian hamiltonian;
    OtocSetup setup;
};

namespace detail {

inline int qubit_count(Index d) {
    int n = 0;
    while ((Index{1} << n) < d) ++n;
    return (Index{1} << n) == d ? n : 0;
}

inline EigenUnitary build_operator(const OperatorSpec& spec, const char* name, int sites, Index d,
                                   std::size_t dim_cap) {
    switch (spec.kind) {
        case OperatorSpec::Kind::Identity: return identity_unitary(d);
        case OperatorSpec::Kind::Pauli:
            if (sites == 0) {
                config_error(std::string("/operators/") + name, "pauli placement needs a qubit-chain dimension");
            }
            if (spec.site < 0 || spec.site >= sites) {
                config_error(std::string("/operators/") + name + "/site",
                             "site " + std::to_string(spec.site) + " outside chain of " + std::to_string(sites));
            }
            return pauli_site(sites, spec.site, spec.axis, dim_cap);
        case OperatorSpec::Kind::GeneratorFile: {
            const CMatrix g = read_matrix_file(spec.path);
            if (g.rows() != d || g.cols() != d) {
                config_error(std::string("/operators/") + name + "/path",
                             "generator is " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                                 ", Hamiltonian dimension is " + std::to_string(d));
            }
            return eigen_unitary_from_generator(g);
        }
    }
    throw Error(Errc::ConfigInvalid, "unknown operator kind");
}

inline std::string index_label(std::size_t k) { return "[" + std::to_string(k) + "]"; }

}  // namespace detail

inline Physics build_physics(const ExperimentConfig& cfg) {
    auto hamiltonian = [&] {
        if (!cfg.model.hamiltonian_file) {
            return build_tfim(cfg.model.n, cfg.model.J, cfg.model.g, cfg.model.h, cfg.params.dim_cap);
        }
        CMatrix h = read_matrix_file(*cfg.model.hamiltonian_file);
        if (static_cast<std::size_t>(h.rows()) > cfg.params.dim_cap) {
            throw Error(Errc::DimensionTooLarge, "field '/model/hamiltonian_file': dimension " +
                                                     std::to_string(h.rows()) + " exceeds dim_cap " +
                                                     std::to_string(cfg.params.dim_cap));
        }
        return make_hamiltonian(std::move(h), cfg.model.hamiltonian_file->filename().string());
    }();
    const int sites = cfg.model.hamiltonian_file ? detail::qubit_count(hamiltonian.dim()) : cfg.model.n;
    const Index d = hamiltonian.dim();
    HermitianEigen spectrum = eig_hermitian(hamiltonian.matrix);
    DensityOperator rho = [&] {
        switch (cfg.state.kind) {
            case StateSpec::Kind::Gibbs: return gibbs_state(spectrum, cfg.state.temperature);
            case StateSpec::Kind::File: {
                CMatrix m = read_matrix_file(cfg.state.path);
                if (m.rows() != d || m.cols() != d) config_error("/state/path", "state dimension differs from H");
                return make_density(std::move(m));
            }
            case StateSpec::Kind::MaximallyMixed: break;
        }
        return maximally_mixed(d);
    }();
    EigenUnitary w = detail::build_operator(cfg.w, "W", sites, d, cfg.params.dim_cap);
    EigenUnitary v = detail::build_operator(cfg.v, "V", sites, d, cfg.params.dim_cap);
    std::string label = hamiltonian.label;
    return Physics{sites, std::move(hamiltonian),
                   OtocSetup{std::move(spectrum), std::move(label), std::move(rho), std::move(w), std::move(v)}};
}

inline QuasiIndex target_index(const ExperimentConfig& cfg) {
    const IndexSpec& s = cfg.params.indices;
    return QuasiIndex{s.w2, s.w3, s.v1, s.v2};
}

// ---------------------------------- modes -----------------------------------

inline void run_otoc(const ExperimentConfig& cfg, const Physics& phys, const RunOptions& opts, RunResult& out) {
    CsvTable table({"t", "re_C", "im_C"});
    const auto points = otoc_sweep(phys.setup, cfg.times, opts.threads);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        table.add_row({p.t, p.value.real(), p.value.imag()});
        out.report.check_upper("abs_C t" + detail::index_label(k), std::abs(p.value), 1.0, kOtocBoundTol);
    }
    out.tables.emplace("results.csv", std::move(table));
}

inline void run_quasiprob(const ExperimentConfig& cfg, const Physics& phys, const RunOptions& opts,
                          RunResult& out) {
    CsvTable table({"t", "w2_group", "w2_degeneracy", "w3_group", "w3_degeneracy", "v1_group", "v1_degeneracy",
                    "v2_group", "v2_degeneracy", "re_w2", "im_w2", "re_w3", "im_w3", "re_v1", "im_v1", "re_v2",
                    "im_v2", "re_A", "im_A"});
    CsvTable dist_table({"t", "re_W", "im_W", "re_Wp", "im_Wp", "re_P", "im_P"});
    const EigenUnitary& w = phys.setup.w;
    const EigenUnitary& v = phys.setup.v;
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const double t = cfg.times[k];
        const std::string tag = " t" + detail::index_label(k);
        const Propagator u = make_propagator(phys.setup.spectrum, t, phys.setup.label);
        const auto table_k = QuasiAmplitudeTable::build(phys.setup.rho, w, v, u, opts.threads, cfg.params.table_cap);
        const std::size_t d = table_k.dim();
        const auto& entries = table_k.entries();
        std::size_t flat = 0;
        for (std::size_t w2 = 0; w2 < d; ++w2)
            for (std::size_t w3 = 0; w3 < d; ++w3)
                for (std::size_t v1 = 0; v1 < d; ++v1)
                    for (std::size_t v2 = 0; v2 < d; ++v2, ++flat) {
                        const OutcomeIndex a = w.outcome(w2), b = w.outcome(w3), c = v.outcome(v1),
                                           e = v.outcome(v2);
                        const Complex ea = w.eigenvalue_flat(w2), eb = w.eigenvalue_flat(w3),
                                      ec = v.eigenvalue_flat(v1), ee = v.eigenvalue_flat(v2);
                        table.add_row({t, static_cast<long long>(a.group), static_cast<long long>(a.degeneracy),
                                       static_cast<long long>(b.group), static_cast<long long>(b.degeneracy),
                                       static_cast<long long>(c.group), static_cast<long long>(c.degeneracy),
                                       static_cast<long long>(e.group), static_cast<long long>(e.degeneracy),
                                       ea.real(), ea.imag(), eb.real(), eb.imag(), ec.real(), ec.imag(),
                                       ee.real(), ee.imag(), entries[flat].real(), entries[flat].imag()});
                    }

        out.report.check("sum_A" + tag, table_k.total(), Complex(1.0, 0.0), kNormTol);
        static constexpr std::pair<Slot, const char*> slots[] = {
            {Slot::W2, "w2"}, {Slot::W3, "w3"}, {Slot::V1, "v1"}, {Slot::V2, "v2"}};
        for (const auto& [slot, name] : slots) {
            const auto m = table_k.marginal(slot);
            double max_imag = 0.0, min_real = 0.0;
            Complex sum(0.0, 0.0);
            for (std::size_t i = 0; i < m.size(); ++i) {
                max_imag = std::max(max_imag, std::abs(m[i].imag()));
                min_real = i == 0 ? m[i].real() : std::min(min_real, m[i].real());
                sum += m[i];
            }
            const std::string base = std::string("marginal_") + name;
            out.report.check_upper(base + "_max_abs_imag" + tag, max_imag, 0.0, kMarginalImagTol);
            out.report.check_lower(base + "_min_real" + tag, min_real, 0.0, kMarginalImagTol);
            out.report.check(base + "_sum" + tag, sum, Complex(1.0, 0.0), kNormTol);
        }
        const auto v1_marginal = table_k.marginal(Slot::V1);
        double born_gap = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const CVector ket = v.basis().col(static_cast<Index>(i));
            born_gap = std::max(born_gap, std::abs(v1_marginal[i] - (ket.adjoint() * phys.setup.rho.matrix * ket)(0)));
        }
        out.report.check_upper("marginal_v1_vs_born" + tag, born_gap, 0.0, kNormTol);

        const ComplexDistribution dist = build_P(table_k, cfg.params.bin_quantum);
        for (const auto& [key, bin] : dist.bins()) {
            dist_table.add_row({t, bin.w.real(), bin.w.imag(), bin.w_prime.real(), bin.w_prime.imag(),
                                bin.value.real(), bin.value.imag()});
        }
        const Complex direct = otoc_direct(phys.setup.rho, w, v, u).value;
        out.report.check("char_function_origin" + tag, char_function(dist, 0.0, 0.0).value, Complex(1.0, 0.0),
                         kCharOriginTol);
        out.report.check("moment_vs_direct" + tag, jarzynski_moment(dist), direct, kMomentTol);
        out.report.check("fd_vs_direct" + tag, jarzynski_fd(dist, cfg.params.h_fd), direct, kFdTol);
    }
    out.tables.emplace("results.csv", std::move(table));
    out.tables.emplace("distribution.csv", std::move(dist_table));
}

inline void add_theorem_rows(const std::string& label, const TheoremReport& r, std::size_t dim, std::size_t k,
                             CsvTable& table, Report& report) {
    table.add_row({static_cast<long long>(k), label, r.t, static_cast<long long>(dim), r.c_direct.real(),
                   r.c_direct.imag(), r.c_moment.real(), r.c_moment.imag(), r.c_fd.real(), r.c_fd.imag(),
                   r.moment_error, r.fd_error, static_cast<long long>(r.bins)});
    const std::string tag = " " + detail::index_label(k);
    report.check("moment_vs_direct" + tag, r.c_moment, r.c_direct, kMomentTol);
    report.check("fd_vs_direct" + tag, r.c_fd, r.c_direct, kFdTol);
}

inline void run_verify(const ExperimentConfig& cfg, const RunOptions& opts, RunResult& out) {
    CsvTable table({"index", "label", "t", "dim", "re_C_direct", "im_C_direct", "re_C_moment", "im_C_moment",
                    "re_C_fd", "im_C_fd", "moment_error", "fd_error", "bins"});
    VerifyOptions vopts;
    vopts.fd_step = cfg.params.h_fd;
    vopts.quantum = cfg.params.bin_quantum;
    vopts.tolerance = kMomentTol;
    vopts.table_cap = cfg.params.table_cap;
    vopts.dim_cap = cfg.params.dim_cap;

    if (cfg.uses_suite()) {
        const std::size_t count = *cfg.params.suite_instances;
        const std::uint64_t seed = *cfg.params.seed;
        std::vector<TheoremReport> reports(count);
        std::vector<std::string> labels(count);
        std::vector<std::size_t> dims(count);
        parallel_for(count, opts.threads, [&](std::size_t i) {
            const TheoremInstance inst = random_theorem_instance(i, seed);
            reports[i] = verify_theorem(inst.rho, inst.w, inst.v, inst.u, vopts);
            labels[i] = inst.label;
            dims[i] = static_cast<std::size_t>(inst.rho.dim());
        });
        for (std::size_t i = 0; i < count; ++i) add_theorem_rows(labels[i], reports[i], dims[i], i, table, out.report);
    } else {
        const Physics phys = build_physics(cfg);
        vopts.threads = opts.threads;
        for (std::size_t k = 0; k < cfg.times.size(); ++k) {
            const TheoremReport r = verify_theorem(phys.setup, cfg.times[k], vopts);
            add_theorem_rows(phys.setup.label, r, static_cast<std::size_t>(phys.hamiltonian.dim()), k, table,
                             out.report);
        }
    }
    out.tables.emplace("results.csv", std::move(table));
}

// Allowed systematic error of the exact-statistics weak estimate, grown
// linearly in g~ above 0.05.
inline double weak_bias_tolerance(Complex oracle, double strength) {
    const double scale = std::max(1.0, strength / 0.05);
    return (0.1 * std::abs(oracle) + 1e-3) * scale;
}

inline void run_weak(const ExperimentConfig& cfg, const Physics& phys, const RunOptions& opts, RunResult& out) {
    CsvTable table({"t", "g_tilde", "trials", "re_estimate", "im_estimate", "re_exact_statistics",
                    "im_exact_statistics", "re_oracle", "im_oracle", "se_re", "se_im"});
    CsvTable records({"t", "coupling", "x", "y", "v2_group", "v2_degeneracy", "count"});
    const QuasiIndex target = target_index(cfg);
    WeakRunOptions wopts;
    wopts.strength = cfg.params.g_tilde;
    wopts.trials = cfg.params.trials;
    wopts.seed = cfg.params.seed.value_or(0);
    wopts.threads = opts.threads;
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const double t = cfg.times[k];
        const std::string tag = " t" + detail::index_label(k);
        const Propagator u = make_propagator(phys.setup.spectrum, t, phys.setup.label);
        const WeakReport r = run_weak_inference(phys.setup.rho, phys.setup.w, phys.setup.v, u, target, wopts);
        table.add_row({t, wopts.strength, static_cast<long long>(wopts.trials), r.estimate.real(), r.estimate.imag(),
                       r.exact_statistics_estimate.real(), r.exact_statistics_estimate.imag(), r.oracle.real(),
                       r.oracle.imag(), r.standard_error_re, r.standard_error_im});
        out.report.check("exact_statistics_vs_oracle" + tag, r.exact_statistics_estimate, r.oracle,
                         weak_bias_tolerance(r.oracle, wopts.strength));
        if (wopts.trials > 0) {
            out.report.check("sampled_re_vs_exact_statistics" + tag, r.estimate.real(),
                             r.exact_statistics_estimate.real(), 3.0 * r.standard_error_re);
            out.report.check("sampled_im_vs_exact_statistics" + tag, r.estimate.imag(),
                             r.exact_statistics_estimate.imag(), 3.0 * r.standard_error_im);
            for (const auto* list : {&r.records_real, &r.records_imag}) {
                const std::string coupling = list == &r.records_real ? "real" : "imaginary";
                for (const auto& rec : *list) {
                    records.add_row({t, coupling, rec.x, rec.y, static_cast<long long>(rec.v2.group),
                                     static_cast<long long>(rec.v2.degeneracy), static_cast<long long>(rec.count)});
                }
            }
        }
    }
    out.tables.emplace("results.csv", std::move(table));
    if (wopts.trials > 0) out.tables.emplace("records.csv", std::move(records));
}

inline void run_interference(const ExperimentConfig& cfg, const Physics& phys, RunResult& out) {
    CsvTable table({"t", "factor", "re_z", "im_z", "prob_x", "prob_y", "modulus2", "sigma_re", "sigma_im"});
    CsvTable summary({"t", "re_estimate", "im_estimate", "re_closed", "im_closed", "population", "error_budget"});
    const QuasiIndex target = target_index(cfg);
    InterferenceOptions iopts;
    iopts.theta = cfg.params.theta;
    iopts.phi = cfg.params.phi;
    if (cfg.params.trials > 0) iopts.sampling = SamplingPlan{cfg.params.trials, cfg.params.seed.value_or(0)};
    static constexpr const char* factor_names[] = {"<w3|U|v2>", "<v2|U^dag|w2>", "<w2|U|v1>", "<v1|U^dag|w3>"};
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const double t = cfg.times[k];
        const std::string tag = " t" + detail::index_label(k);
        const Propagator u = make_propagator(phys.setup.spectrum, t, phys.setup.label);
        const AssembledTilde a = assemble_tilde_interference(phys.setup.rho, phys.setup.w, phys.setup.v, u, target,
                                                             iopts);
        const Complex closed = tilde_A_closed(phys.setup.rho, phys.setup.w, phys.setup.v, u, target);
        for (std::size_t f = 0; f < a.factors.size(); ++f) {
            const auto& e = a.factors[f];
            table.add_row({t, std::string(factor_names[f]), e.z.real(), e.z.imag(), e.prob_x, e.prob_y, e.modulus2,
                           e.sigma_re, e.sigma_im});
        }
        summary.add_row({t, a.estimate.real(), a.estimate.imag(), closed.real(), closed.imag(), a.population,
                         a.error_budget});
        const double tol = iopts.sampling ? 3.0 * a.error_budget : kInterfExactTol;
        out.report.check("assembled_vs_closed" + tag, a.estimate, closed, tol);
    }
    out.tables.emplace("results.csv", std::move(table));
    out.tables.emplace("assembled.csv", std::move(summary));
}

// ------------------------------- entry point --------------------------------

inline RunResult run_experiment(ExperimentConfig cfg, const RunOptions& opts) {
    if (opts.seed) cfg.params.seed = opts.seed;
    const bool samples = cfg.params.trials > 0 && (cfg.mode == Mode::WeakSim || cfg.mode == Mode::InterfSim);
    if ((samples || cfg.uses_suite()) && !cfg.params.seed) {
        config_error("/params/seed", "required when sampling (set it in the config or pass --seed)");
    }

    RunResult out{Report(mode_name(cfg.mode)), {}};
    Report& rep = out.report;
    if (cfg.params.seed) rep.parameter("seed", std::to_string(*cfg.params.seed));
    rep.parameter("bin_quantum", cfg.params.bin_quantum);
    rep.parameter("h_fd", cfg.params.h_fd);
    if (cfg.mode == Mode::WeakSim) rep.parameter("g_tilde", cfg.params.g_tilde);
    if (samples) rep.parameter("trials", std::to_string(cfg.params.trials));
    if (cfg.mode == Mode::InterfSim) {
        rep.parameter("theta", cfg.params.theta);
        rep.parameter("phi", cfg.params.phi);
    }
    if (cfg.uses_suite()) rep.parameter("suite_instances", std::to_string(*cfg.params.suite_instances));

    if (cfg.mode == Mode::Verify) {
        run_verify(cfg, opts, out);
        return out;
    }
    const Physics phys = build_physics(cfg);
    rep.parameter("model", phys.setup.label);
    rep.parameter("dim", std::to_string(phys.hamiltonian.dim()));
    switch (cfg.mode) {
        case Mode::Otoc: run_otoc(cfg, phys, opts, out); break;
        case Mode::Quasiprob: run_quasiprob(cfg, phys, opts, out); break;
        case Mode::WeakSim: run_weak(cfg, phys, opts, out); break;
        case Mode::InterfSim: run_interference(cfg, phys, out); break;
        case Mode::Verify: break;
    }
    return out;
}

inline void write_outputs(const RunResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::Io, "cannot create output directory '" + out_dir.string() + "': " + ec.message());
    for (const auto& [name, table] : result.tables) write_text(out_dir / name, table.str());
    write_text(out_dir / "report.json", result.report.to_json().dump(2) + "\n");
}

}  // namespace otocqp::cli
