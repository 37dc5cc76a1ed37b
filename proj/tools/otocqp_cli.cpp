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

// otocqp command-line front end.
//
//   otocqp run <config.json> [--out-dir DIR] [--seed N] [--threads N]
//   otocqp selftest [--out-dir DIR] [--threads N]
//
// Exit status: 0 success, 2 verification failure, 1 usage/config/IO error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "otocqp/acceptance.hpp"
#include "otocqp/cli/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerification = 2;

int run_command(const std::string& config_path, const otocqp::cli::RunOptions& opts) {
    using namespace otocqp::cli;
    const ExperimentConfig cfg = load_config(config_path);
    const auto start = std::chrono::steady_clock::now();
    const RunResult result = run_experiment(cfg, opts);
    write_outputs(result, opts.out_dir);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t failed = 0;
    for (const auto& c : result.report.checks()) {
        if (!c.pass) {
            ++failed;
            std::cerr << "check failed: " << c.name << " (error " << c.error << ", tolerance " << c.tolerance
                      << ")\n";
        }
    }
    std::cout << mode_name(cfg.mode) << ": " << result.report.checks().size() - failed << "/"
              << result.report.checks().size() << " checks passed; outputs in " << opts.out_dir.string() << "\n";
    std::cerr << "elapsed " << elapsed << " s\n";
    return failed == 0 ? kExitOk : kExitVerification;
}

int selftest_command(const otocqp::acceptance::AcceptanceOptions& opts,
                     const std::optional<std::filesystem::path>& out_dir) {
    using namespace otocqp;
    const auto results = acceptance::run_acceptance(opts);
    bool all = true;
    nlohmann::json report = nlohmann::json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        std::cout << acceptance::format_line(r) << "\n";
        std::cerr << "  criterion " << r.id << " took " << r.seconds << " s\n";
        report.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    std::cout << (all ? "selftest: all criteria passed" : "selftest: FAILED") << "\n";
    if (out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir, ec);
        cli::write_text(*out_dir / "report.json",
                        nlohmann::json{{"mode", "selftest"}, {"criteria", report}, {"pass", all}}.dump(2) + "\n");
    }
    return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"otocqp: OTOC quasiprobability toolkit"};
    app.require_subcommand(1);

    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--threads", threads, "worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out-dir", out_dir, "directory for results.csv and report.json");
    run->add_option("--seed", seed, "override params.seed");
    run->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));

    std::optional<std::string> selftest_dir;
    bool inject = false;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite with fixed seeds");
    selftest->add_option("--out-dir", selftest_dir, "also write report.json here");
    selftest->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
    selftest->add_flag("--inject-kraus-fault", inject, "perturb one Kraus operator (negative control)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*run) {
            otocqp::cli::RunOptions opts;
            opts.out_dir = out_dir;
            opts.seed = seed;
            opts.threads = threads;
            return run_command(config_path, opts);
        }
        otocqp::acceptance::AcceptanceOptions opts;
        opts.threads = threads;
        opts.inject_kraus_fault = inject;
        std::optional<std::filesystem::path> dir;
        if (selftest_dir) dir = *selftest_dir;
        return selftest_command(opts, dir);
    } catch (const otocqp::Error& e) {
        std::cerr << "error [" << otocqp::errc_name(e.code()) << "]: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
