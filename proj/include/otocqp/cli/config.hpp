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

// config.hpp - experiment configuration (JSON) and its validation.
//
// {
//   "mode": "otoc" | "quasiprob" | "verify" | "weak-sim" | "interf-sim",
//   "model": {"n": 3, "J": 1.0, "g": 1.05, "h": 0.5}
//          | {"hamiltonian_file": "H.json"},
//   "state": {"kind": "maximally_mixed"} | {"kind": "gibbs", "T": 1.0}
//          | {"kind": "file", "path": "rho.json"},
//   "operators": {
//     "W": {"kind": "pauli", "site": 0, "axis": "z"} | {"kind": "identity"}
//        | {"kind": "generator_file", "path": "G.json"},
//     "V": { ... }
//   },
//   "times": [0.0, 0.5],
//   "params": { ... mode-specific, see ExperimentParams ... }
// }
//
// Matrix files hold {"re": [[...], ...], "im": [[...], ...]} (rows; "im"
// optional). Relative paths resolve against the config file's directory.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "otocqp/model.hpp"

namespace otocqp::cli {

using nlohmann::json;

enum class Mode { Otoc, Quasiprob, Verify, WeakSim, InterfSim };

inline const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::Otoc: return "otoc";
        case Mode::Quasiprob: return "quasiprob";
        case Mode::Verify: return "verify";
        case Mode::WeakSim: return "weak-sim";
        case Mode::InterfSim: return "interf-sim";
    }
    return "?";
}

struct ModelSpec {
    int n = 3;
    double J = 1.0;
    double g = 1.05;
    double h = 0.5;
    std::optional<std::filesystem::path> hamiltonian_file;
};

struct StateSpec {
    enum class Kind { MaximallyMixed, Gibbs, File } kind = Kind::MaximallyMixed;
    double temperature = 1.0;
    std::filesystem::path path;
};

struct OperatorSpec {
    enum class Kind { Pauli, Identity, GeneratorFile } kind = Kind::Pauli;
    int site = 0;
    Axis axis = Axis::Z;
    std::filesystem::path path;
};

struct IndexSpec {
    OutcomeIndex w2, w3, v1, v2;
};

struct ExperimentParams {
    std::size_t dim_cap = kDefaultDimCap;
    std::size_t table_cap = 64;
    double bin_quantum = 1e-9;
    double h_fd = 1e-4;
    double g_tilde = 0.05;
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;
    double theta = 1.5707963267948966;
    double phi = 1.5707963267948966;
    IndexSpec indices;
    std::optional<std::size_t> suite_instances;  // verify mode: random suite
};

struct ExperimentConfig {
    Mode mode = Mode::Otoc;
    ModelSpec model;
    StateSpec state;
    OperatorSpec w;
    OperatorSpec v;
    std::vector<double> times;
    ExperimentParams params;
    std::filesystem::path base_dir;

    bool uses_suite() const { return mode == Mode::Verify && params.suite_instances.has_value(); }
};

[[noreturn]] inline void config_error(const std::string& field, const std::string& message) {
    throw Error(Errc::ConfigInvalid, "field '" + field + "': " + message);
}

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) config_error(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) config_error(path + "/" + key, "missing required field");
    return *it;
}

inline double number(const json& value, const std::string& path) {
    if (!value.is_number()) config_error(path, "expected a number");
    return value.get<double>();
}

inline std::int64_t integer(const json& value, const std::string& path) {
    if (!value.is_number_integer()) config_error(path, "expected an integer");
    return value.get<std::int64_t>();
}

inline std::uint64_t unsigned_integer(const json& value, const std::string& path) {
    const std::int64_t v = integer(value, path);
    if (v < 0) config_error(path, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

inline std::string string(const json& value, const std::string& path) {
    if (!value.is_string()) config_error(path, "expected a string");
    return value.get<std::string>();
}

template <typename F>
void optional_field(const json& obj, const std::string& key, F&& apply) {
    if (const auto it = obj.find(key); it != obj.end()) apply(*it);
}

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed) known = known || it.key() == a;
        if (!known) config_error(path + "/" + it.key(), "unknown field");
    }
}

inline std::filesystem::path existing_file(const json& value, const std::string& path,
                                           const std::filesystem::path& base) {
    std::filesystem::path p = string(value, path);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::is_regular_file(p)) config_error(path, "file '" + p.string() + "' does not exist");
    return p;
}

inline Axis parse_axis(const json& value, const std::string& path) {
    const std::string s = string(value, path);
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    config_error(path, "axis must be one of x, y, z");
}

inline OutcomeIndex parse_outcome(const json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 2) config_error(path, "expected [group, degeneracy]");
    return OutcomeIndex{static_cast<std::size_t>(unsigned_integer(value[0], path + "/0")),
                        static_cast<std::size_t>(unsigned_integer(value[1], path + "/1"))};
}

inline OperatorSpec parse_operator(const json& obj, const std::string& path, const std::filesystem::path& base) {
    OperatorSpec op;
    const std::string kind = string(require(obj, "kind", path), path + "/kind");
    if (kind == "pauli") {
        reject_unknown(obj, path, {"kind", "site", "axis"});
        op.kind = OperatorSpec::Kind::Pauli;
        op.site = static_cast<int>(integer(require(obj, "site", path), path + "/site"));
        op.axis = parse_axis(require(obj, "axis", path), path + "/axis");
    } else if (kind == "identity") {
        reject_unknown(obj, path, {"kind"});
        op.kind = OperatorSpec::Kind::Identity;
    } else if (kind == "generator_file") {
        reject_unknown(obj, path, {"kind", "path"});
        op.kind = OperatorSpec::Kind::GeneratorFile;
        op.path = existing_file(require(obj, "path", path), path + "/path", base);
    } else {
        config_error(path + "/kind", "expected pauli, identity or generator_file");
    }
    return op;
}

}  // namespace detail

inline Mode parse_mode(const std::string& s) {
    if (s == "otoc") return Mode::Otoc;
    if (s == "quasiprob") return Mode::Quasiprob;
    if (s == "verify") return Mode::Verify;
    if (s == "weak-sim") return Mode::WeakSim;
    if (s == "interf-sim") return Mode::InterfSim;
    config_error("/mode", "expected one of otoc, quasiprob, verify, weak-sim, interf-sim");
}

inline ExperimentConfig parse_config(const json& root, const std::filesystem::path& base_dir = ".") {
    using namespace detail;
    if (!root.is_object()) config_error("/", "expected a JSON object");
    reject_unknown(root, "", {"mode", "model", "state", "operators", "times", "params"});

    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    cfg.mode = parse_mode(string(require(root, "mode", ""), "/mode"));

    if (const auto it = root.find("params"); it != root.end()) {
        const json& p = *it;
        if (!p.is_object()) config_error("/params", "expected an object");
        reject_unknown(p, "/params", {"dim_cap", "table_cap", "bin_quantum", "h_fd", "g_tilde", "trials", "seed",
                                      "theta", "phi", "indices", "suite"});
        auto& out = cfg.params;
        optional_field(p, "dim_cap", [&](const json& v) { out.dim_cap = unsigned_integer(v, "/params/dim_cap"); });
        optional_field(p, "table_cap", [&](const json& v) { out.table_cap = unsigned_integer(v, "/params/table_cap"); });
        optional_field(p, "bin_quantum", [&](const json& v) { out.bin_quantum = number(v, "/params/bin_quantum"); });
        optional_field(p, "h_fd", [&](const json& v) { out.h_fd = number(v, "/params/h_fd"); });
        optional_field(p, "g_tilde", [&](const json& v) { out.g_tilde = number(v, "/params/g_tilde"); });
        optional_field(p, "trials", [&](const json& v) { out.trials = unsigned_integer(v, "/params/trials"); });
        optional_field(p, "seed", [&](const json& v) { out.seed = unsigned_integer(v, "/params/seed"); });
        optional_field(p, "theta", [&](const json& v) { out.theta = number(v, "/params/theta"); });
        optional_field(p, "phi", [&](const json& v) { out.phi = number(v, "/params/phi"); });
        optional_field(p, "indices", [&](const json& v) {
            if (!v.is_object()) config_error("/params/indices", "expected an object");
            reject_unknown(v, "/params/indices", {"w2", "w3", "v1", "v2"});
            optional_field(v, "w2", [&](const json& x) { out.indices.w2 = parse_outcome(x, "/params/indices/w2"); });
            optional_field(v, "w3", [&](const json& x) { out.indices.w3 = parse_outcome(x, "/params/indices/w3"); });
            optional_field(v, "v1", [&](const json& x) { out.indices.v1 = parse_outcome(x, "/params/indices/v1"); });
            optional_field(v, "v2", [&](const json& x) { out.indices.v2 = parse_outcome(x, "/params/indices/v2"); });
        });
        optional_field(p, "suite", [&](const json& v) {
            if (!v.is_object()) config_error("/params/suite", "expected an object");
            reject_unknown(v, "/params/suite", {"instances"});
            out.suite_instances = unsigned_integer(require(v, "instances", "/params/suite"), "/params/suite/instances");
            if (*out.suite_instances == 0) config_error("/params/suite/instances", "must be >= 1");
        });
        if (!(out.bin_quantum > 0.0)) config_error("/params/bin_quantum", "must be > 0");
        if (!(out.h_fd > 0.0 && out.h_fd < 0.1)) config_error("/params/h_fd", "must lie in (0, 0.1)");
        if (!(out.g_tilde > 0.0)) config_error("/params/g_tilde", "must be > 0");
    }

    if (cfg.uses_suite()) return cfg;

    const json& times = require(root, "times", "");
    if (!times.is_array() || times.empty()) config_error("/times", "expected a non-empty array of numbers");
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = number(times[k], "/times/" + std::to_string(k));
        if (!std::isfinite(t)) config_error("/times/" + std::to_string(k), "must be finite");
        cfg.times.push_back(t);
    }

    const json& model = require(root, "model", "");
    if (!model.is_object()) config_error("/model", "expected an object");
    if (model.contains("hamiltonian_file")) {
        reject_unknown(model, "/model", {"hamiltonian_file"});
        cfg.model.hamiltonian_file = existing_file(model["hamiltonian_file"], "/model/hamiltonian_file", base_dir);
    } else {
        reject_unknown(model, "/model", {"n", "J", "g", "h"});
        cfg.model.n = static_cast<int>(integer(require(model, "n", "/model"), "/model/n"));
        optional_field(model, "J", [&](const json& v) { cfg.model.J = number(v, "/model/J"); });
        optional_field(model, "g", [&](const json& v) { cfg.model.g = number(v, "/model/g"); });
        optional_field(model, "h", [&](const json& v) { cfg.model.h = number(v, "/model/h"); });
        if (cfg.model.n < 1) config_error("/model/n", "must be >= 1");
        if (cfg.model.n >= 62 || (std::size_t{1} << cfg.model.n) > cfg.params.dim_cap) {
            throw Error(Errc::DimensionTooLarge, "field '/model/n': 2^" + std::to_string(cfg.model.n) +
                                                     " exceeds dim_cap " + std::to_string(cfg.params.dim_cap));
        }
    }

    const json& state = require(root, "state", "");
    const std::string kind = string(require(state, "kind", "/state"), "/state/kind");
    if (kind == "maximally_mixed") {
        reject_unknown(state, "/state", {"kind"});
        cfg.state.kind = StateSpec::Kind::MaximallyMixed;
    } else if (kind == "gibbs") {
        reject_unknown(state, "/state", {"kind", "T"});
        cfg.state.kind = StateSpec::Kind::Gibbs;
        cfg.state.temperature = number(require(state, "T", "/state"), "/state/T");
        if (!(cfg.state.temperature > 0.0)) config_error("/state/T", "temperature must be > 0");
    } else if (kind == "file") {
        reject_unknown(state, "/state", {"kind", "path"});
        cfg.state.kind = StateSpec::Kind::File;
        cfg.state.path = existing_file(require(state, "path", "/state"), "/state/path", base_dir);
    } else {
        config_error("/state/kind", "expected maximally_mixed, gibbs or file");
    }

    const json& ops = require(root, "operators", "");
    reject_unknown(ops, "/operators", {"W", "V"});
    cfg.w = parse_operator(require(ops, "W", "/operators"), "/operators/W", base_dir);
    cfg.v = parse_operator(require(ops, "V", "/operators"), "/operators/V", base_dir);
    return cfg;
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw Error(Errc::ConfigInvalid, path.string() + ": " + e.what());
    }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_json_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

// {"re": [[...]], "im": [[...]]}
inline CMatrix read_matrix_file(const std::filesystem::path& path) {
    const json doc = read_json_file(path);
    const std::string where = path.string();
    const json& re = detail::require(doc, "re", where);
    if (!re.is_array() || re.empty()) config_error(where + "/re", "expected a non-empty array of rows");
    const auto rows = static_cast<Index>(re.size());
    const auto cols = static_cast<Index>(re[0].is_array() ? re[0].size() : 0);
    if (cols == 0) config_error(where + "/re/0", "expected a non-empty row");
    CMatrix m = CMatrix::Zero(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const std::string row_path = where + "/re/" + std::to_string(i);
        if (!re[i].is_array() || static_cast<Index>(re[i].size()) != cols) config_error(row_path, "ragged row");
        for (Index j = 0; j < cols; ++j) m(i, j) = detail::number(re[i][j], row_path + "/" + std::to_string(j));
    }
    if (const auto it = doc.find("im"); it != doc.end()) {
        const json& im = *it;
        if (!im.is_array() || static_cast<Index>(im.size()) != rows) config_error(where + "/im", "row count differs from re");
        for (Index i = 0; i < rows; ++i) {
            const std::string row_path = where + "/im/" + std::to_string(i);
            if (!im[i].is_array() || static_cast<Index>(im[i].size()) != cols) config_error(row_path, "ragged row");
            for (Index j = 0; j < cols; ++j) {
                m(i, j) += Complex(0.0, detail::number(im[i][j], row_path + "/" + std::to_string(j)));
            }
        }
    }
    return m;
}

}  // namespace otocqp::cli
