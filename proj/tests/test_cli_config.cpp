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


#include <filesystem>
#include <fstream>

#include "otocqp/cli/runner.hpp"
#include "test_support.hpp"

namespace otocqp::cli {
namespace {

using otocqp::testing::expect_errc;

json base_config() {
    return json::parse(R"({
      "mode": "otoc",
      "model": {"n": 2, "J": 1.0, "g": 0.9, "h": 0.3},
      "state": {"kind": "maximally_mixed"},
      "operators": {"W": {"kind": "pauli", "site": 0, "axis": "z"},
                    "V": {"kind": "pauli", "site": 1, "axis": "x"}},
      "times": [0.0, 0.5, 1.0]
    })");
}

std::string config_error_message(const json& doc) {
    try {
        parse_config(doc);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ConfigInvalid);
        return e.what();
    }
    ADD_FAILURE() << "config accepted";
    return {};
}

TEST(Config, ParsesBaseConfig) {
    const ExperimentConfig cfg = parse_config(base_config());
    EXPECT_EQ(cfg.mode, Mode::Otoc);
    EXPECT_EQ(cfg.model.n, 2);
    EXPECT_EQ(cfg.times.size(), 3u);
    EXPECT_EQ(cfg.v.axis, Axis::X);
    EXPECT_EQ(cfg.params.bin_quantum, 1e-9);
}

TEST(Config, MissingTimesNamesTheField) {
    json doc = base_config();
    doc.erase("times");
    EXPECT_NE(config_error_message(doc).find("/times"), std::string::npos);
}

TEST(Config, FieldDiagnostics) {
    json doc = base_config();
    doc["operators"]["W"]["axis"] = "w";
    EXPECT_NE(config_error_message(doc).find("/operators/W/axis"), std::string::npos);
    doc = base_config();
    doc["model"]["spin"] = 1;
    EXPECT_NE(config_error_message(doc).find("/model/spin"), std::string::npos);
    doc = base_config();
    doc["state"] = {{"kind", "gibbs"}, {"T", -1.0}};
    EXPECT_NE(config_error_message(doc).find("/state/T"), std::string::npos);
    doc = base_config();
    doc["mode"] = "plot";
    EXPECT_NE(config_error_message(doc).find("/mode"), std::string::npos);
    doc = base_config();
    doc["params"] = {{"h_fd", 0.5}};
    EXPECT_NE(config_error_message(doc).find("/params/h_fd"), std::string::npos);
    doc = base_config();
    doc["state"] = {{"kind", "file"}, {"path", "no/such/rho.json"}};
    EXPECT_NE(config_error_message(doc).find("does not exist"), std::string::npos);
}

TEST(Config, DimensionCap) {
    json doc = base_config();
    doc["model"]["n"] = 11;
    expect_errc(Errc::DimensionTooLarge, [&] { parse_config(doc); });
    doc["model"]["n"] = 4;
    doc["params"] = {{"dim_cap", 8}};
    expect_errc(Errc::DimensionTooLarge, [&] { parse_config(doc); });
}

TEST(Config, SyntaxErrorReportsPosition) {
    const auto dir = std::filesystem::temp_directory_path() / "otocqp_cfg_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "broken.json";
    std::ofstream(path) << "{\n  \"mode\": \"otoc\",\n  \"times\": [0.0,,]\n}\n";
    try {
        load_config(path);
        ADD_FAILURE() << "broken config accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ConfigInvalid);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    expect_errc(Errc::Io, [&] { load_config(dir / "absent.json"); });
}

TEST(Config, SeedRequiredForSampling) {
    json doc = base_config();
    doc["mode"] = "weak-sim";
    doc["params"] = {{"trials", 1000}};
    const ExperimentConfig cfg = parse_config(doc);
    try {
        run_experiment(cfg, RunOptions{});
        ADD_FAILURE() << "sampling without a seed accepted";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("/params/seed"), std::string::npos);
    }
    RunOptions with_seed;
    with_seed.seed = 5;
    EXPECT_NO_THROW(run_experiment(cfg, with_seed));
}

TEST(Csv, SeventeenSignificantDigits) {
    CsvTable t({"a", "b", "c"});
    t.add_row({0.1, 3LL, std::string("x")});
    EXPECT_EQ(t.str(), "a,b,c\n0.10000000000000001,3,x\n");
    EXPECT_THROW(t.add_row({1.0}), Error);
}

TEST(Run, OtocWithIdentityV) {
    json doc = base_config();
    doc["operators"]["V"] = {{"kind", "identity"}};
    const RunResult r = run_experiment(parse_config(doc), RunOptions{});
    EXPECT_TRUE(r.report.pass());
    const std::string csv = r.tables.at("results.csv").str();
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "t,re_C,im_C");
    int rows = 0;
    while (std::getline(lines, line)) {
        const auto first = line.find(','), second = line.find(',', first + 1);
        EXPECT_NEAR(std::stod(line.substr(first + 1, second - first - 1)), 1.0, 1e-12);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST(Run, EveryCheckCarriesToleranceAndVerdict) {
    json doc = base_config();
    doc["mode"] = "quasiprob";
    const json report = run_experiment(parse_config(doc), RunOptions{}).report.to_json();
    ASSERT_FALSE(report["checks"].empty());
    for (const auto& c : report["checks"]) {
        EXPECT_TRUE(c.contains("tolerance"));
        EXPECT_TRUE(c["pass"].is_boolean());
        EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    }
    for (const auto& [key, value] : report["parameters"].items()) EXPECT_TRUE(value.is_string()) << key;
}

TEST(Run, VerifySuitePasses) {
    const json doc = json::parse(R"({"mode": "verify", "params": {"suite": {"instances": 20}, "seed": 3}})");
    const RunResult r = run_experiment(parse_config(doc), RunOptions{});
    EXPECT_TRUE(r.report.pass());
    EXPECT_EQ(r.tables.at("results.csv").size(), 20u);
}

TEST(Run, DeterministicAcrossThreadCounts) {
    for (const char* mode : {"weak-sim", "interf-sim", "quasiprob"}) {
        json doc = base_config();
        doc["mode"] = mode;
        doc["params"] = {{"trials", 20000}, {"seed", 8}};
        const ExperimentConfig cfg = parse_config(doc);
        RunOptions one, many;
        many.threads = 4;
        const RunResult a = run_experiment(cfg, one), b = run_experiment(cfg, many);
        EXPECT_EQ(a.report.to_json().dump(), b.report.to_json().dump()) << mode;
        ASSERT_EQ(a.tables.size(), b.tables.size());
        for (const auto& [name, table] : a.tables) EXPECT_EQ(table.str(), b.tables.at(name).str()) << mode << name;
    }
}

TEST(Run, SeedOverrideChangesSamples) {
    json doc = base_config();
    doc["mode"] = "weak-sim";
    doc["params"] = {{"trials", 20000}, {"seed", 8}};
    const ExperimentConfig cfg = parse_config(doc);
    RunOptions other;
    other.seed = 9;
    EXPECT_NE(run_experiment(cfg, RunOptions{}).tables.at("records.csv").str(),
              run_experiment(cfg, other).tables.at("records.csv").str());
}

TEST(Run, WritesOutputFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "otocqp_run_test";
    std::filesystem::remove_all(dir);
    write_outputs(run_experiment(parse_config(base_config()), RunOptions{}), dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "results.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
}

}  // namespace
}  // namespace otocqp::cli
