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

// report.hpp - CSV tables and JSON check reports.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "otocqp/errors.hpp"
#include "otocqp/linalg.hpp"

namespace otocqp::cli {

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvTable {
  public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size()) {
            throw Error(Errc::InvalidArgument, "csv row has " + std::to_string(row.size()) + " cells, expected " +
                                                   std::to_string(columns_.size()));
        }
        rows_.push_back(std::move(row));
    }

    std::size_t size() const { return rows_.size(); }

    std::string str() const {
        std::string out;
        for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + columns_[c];
        out += '\n';
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                if (const auto* d = std::get_if<double>(&row[c])) out += format_g17(*d);
                else if (const auto* i = std::get_if<long long>(&row[c])) out += std::to_string(*i);
                else out += std::get<std::string>(row[c]);
            }
            out += '\n';
        }
        return out;
    }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

// One verified number: value, the reference it is compared against, the
// tolerance and the verdict. Complex quantities store [re, im].
struct Check {
    std::string name;
    nlohmann::json value;
    nlohmann::json reference;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

class Report {
  public:
    explicit Report(std::string mode) : mode_(std::move(mode)) {}

    void parameter(const std::string& key, const std::string& value) { parameters_[key] = value; }
    void parameter(const std::string& key, double value) { parameters_[key] = format_g17(value); }

    // error <= tolerance, NaN fails.
    const Check& check(std::string name, Complex value, Complex reference, double tolerance) {
        return push(std::move(name), complex_json(value), complex_json(reference), std::abs(value - reference),
                    tolerance);
    }
    const Check& check(std::string name, double value, double reference, double tolerance) {
        return push(std::move(name), value, reference, std::abs(value - reference), tolerance);
    }
    // value must not exceed bound + tolerance.
    const Check& check_upper(std::string name, double value, double bound, double tolerance) {
        return push(std::move(name), value, bound, std::max(0.0, value - bound), tolerance);
    }
    const Check& check_lower(std::string name, double value, double bound, double tolerance) {
        return push(std::move(name), value, bound, std::max(0.0, bound - value), tolerance);
    }

    bool pass() const {
        for (const auto& c : checks_)
            if (!c.pass) return false;
        return true;
    }
    const std::vector<Check>& checks() const { return checks_; }

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["mode"] = mode_;
        out["parameters"] = parameters_;
        nlohmann::json list = nlohmann::json::array();
        for (const auto& c : checks_) {
            list.push_back({{"name", c.name},
                            {"value", c.value},
                            {"reference", c.reference},
                            {"error", c.error},
                            {"tolerance", c.tolerance},
                            {"pass", c.pass}});
        }
        out["checks"] = std::move(list);
        out["pass"] = pass();
        return out;
    }

  private:
    const Check& push(std::string name, nlohmann::json value, nlohmann::json reference, double error,
                      double tolerance) {
        const bool ok = std::isfinite(error) && error <= tolerance;
        checks_.push_back(Check{std::move(name), std::move(value), std::move(reference), error, tolerance, ok});
        return checks_.back();
    }

    std::string mode_;
    nlohmann::json parameters_ = nlohmann::json::object();
    std::vector<Check> checks_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(Errc::Io, "write to '" + path.string() + "' failed");
}

}  // namespace otocqp::cli
