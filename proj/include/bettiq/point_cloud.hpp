// Copyright 2026 The bettiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bettiq/common.hpp"

namespace bettiq {

enum class PointFormat { csv, json };
enum class Metric { euclidean, manhattan, precomputed };

/// Input point set: row-ordered coordinate vectors, all of one dimension,
/// with optional per-point labels.
struct PointCloud {
    std::vector<std::vector<double>> points;
    std::vector<std::string> labels;  // empty or one per point

    int size() const { return static_cast<int>(points.size()); }
    int dimension() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
};

/// Symmetric nonnegative distance matrix with zero diagonal, row-major.
struct DistanceMatrix {
    int n = 0;
    std::vector<double> d;

    double operator()(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& tok, int line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                 ": not a number: '" + tok + "'");
    }
    if (pos != tok.size())
        throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                 ": trailing characters in '" + tok + "'");
    if (!std::isfinite(v))
        throw std::runtime_error("non-finite value at line " + std::to_string(line_no));
    return v;
}

inline std::vector<std::vector<double>> parse_csv_rows(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(t);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(parse_number(trim(tok), line_no));
        if (!t.empty() && t.back() == ',')
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": empty trailing field");
        if (!rows.empty() && row.size() != rows[0].size())
            throw std::runtime_error("inconsistent dimension at line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(rows[0].size()) + " fields, got " +
                                     std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<double>> json_rows(const nlohmann::json& arr, const char* what) {
    if (!arr.is_array()) throw std::runtime_error(std::string(what) + " must be an array of arrays");
    std::vector<std::vector<double>> rows;
    for (const auto& jrow : arr) {
        if (!jrow.is_array()) throw std::runtime_error(std::string(what) + " rows must be arrays");
        std::vector<double> row;
        for (const auto& v : jrow) {
            if (!v.is_number()) throw std::runtime_error(std::string(what) + " entries must be numbers");
            double x = v.get<double>();
            if (!std::isfinite(x)) throw std::runtime_error("non-finite value in " + std::string(what));
            row.push_back(x);
        }
        if (!rows.empty() && row.size() != rows[0].size())
            throw std::runtime_error("inconsistent dimension in " + std::string(what));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/// Parses a point cloud from CSV (one point per row, comma-separated) or
/// JSON ({"points": [[...], ...], "labels": [...]}). Row order is kept.
inline PointCloud load_points(std::istream& in, PointFormat format) {
    PointCloud cloud;
    if (format == PointFormat::csv) {
        cloud.points = detail::parse_csv_rows(in);
    } else {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(std::string("JSON parse error: ") + e.what());
        }
        if (!j.is_object() || !j.contains("points"))
            throw std::runtime_error("JSON input must be an object with a \"points\" array");
        cloud.points = detail::json_rows(j["points"], "points");
        if (j.contains("labels")) {
            for (const auto& l : j["labels"]) cloud.labels.push_back(l.get<std::string>());
            if (cloud.labels.size() != cloud.points.size())
                throw std::runtime_error("labels count does not match points count");
        }
    }
    if (cloud.points.empty()) throw std::runtime_error("no points");
    if (cloud.points[0].empty()) throw std::runtime_error("points must have at least one coordinate");
    return cloud;
}

/// Validates a user-supplied distance matrix: square, entries finite and
/// >= 0, symmetric to 1e-12, diagonal zero to 1e-12. The stored matrix is
/// exactly symmetrized with an exactly zero diagonal.
inline DistanceMatrix precomputed_distances(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    require(n > 0, "precomputed distance matrix is empty");
    DistanceMatrix dm;
    dm.n = n;
    dm.d.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::runtime_error("precomputed distance matrix is not square");
        for (int j = 0; j < n; ++j) {
            double v = rows[i][j];
            if (!std::isfinite(v)) throw std::runtime_error("non-finite distance entry");
            if (v < 0.0) throw std::runtime_error("negative distance entry");
        }
    }
    for (int i = 0; i < n; ++i) {
        if (std::abs(rows[i][i]) > 1e-12)
            throw std::runtime_error("precomputed distance matrix has nonzero diagonal");
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(rows[i][j] - rows[j][i]) > 1e-12)
                throw std::runtime_error("precomputed distance matrix asymmetric beyond 1e-12");
            double v = 0.5 * (rows[i][j] + rows[j][i]);
            dm.at(i, j) = v;
            dm.at(j, i) = v;
        }
    }
    return dm;
}

/// Reads a square matrix (CSV rows or JSON array-of-arrays / {"matrix": ...})
/// and validates it as a distance matrix.
inline DistanceMatrix load_distance_matrix(std::istream& in, PointFormat format) {
    std::vector<std::vector<double>> rows;
    if (format == PointFormat::csv) {
        rows = detail::parse_csv_rows(in);
    } else {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(std::string("JSON parse error: ") + e.what());
        }
        rows = detail::json_rows(j.is_object() && j.contains("matrix") ? j["matrix"] : j, "matrix");
    }
    if (rows.empty()) throw std::runtime_error("no points");
    return precomputed_distances(rows);
}

/// All pairwise metric distances. The precomputed metric is not valid here;
/// feed the matrix to precomputed_distances / load_distance_matrix instead.
inline DistanceMatrix pairwise_distances(const PointCloud& cloud, Metric metric) {
    require(metric != Metric::precomputed,
            "precomputed metric takes a matrix, not a point cloud");
    const int n = cloud.size();
    const int dim = cloud.dimension();
    DistanceMatrix dm;
    dm.n = n;
    dm.d.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (int c = 0; c < dim; ++c) {
                double diff = cloud.points[i][c] - cloud.points[j][c];
                acc += (metric == Metric::euclidean) ? diff * diff : std::abs(diff);
            }
            double v = (metric == Metric::euclidean) ? std::sqrt(acc) : acc;
            dm.at(i, j) = v;
            dm.at(j, i) = v;
        }
    }
    return dm;
}

}  // namespace bettiq
