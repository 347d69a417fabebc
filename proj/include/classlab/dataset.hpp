#pragma once

// Dataset: an N x d feature matrix with binary labels in {0,1}.
//
// CSV format: UTF-8, header row required, decimal-point reals, label column
// selected by name. The two raw label values are mapped to {0,1} in sorted
// order of their string representation; the mapping is recorded in the
// dataset and in a JSON sidecar written next to the CSV (path + ".json").

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "classlab/matrix.hpp"

namespace classlab {

struct Dataset {
    Matrix features;
    std::vector<int> labels;                  // values in {0,1}
    std::vector<std::string> feature_names;
    std::string name;
    std::array<std::string, 2> label_names = {"0", "1"};  // raw value mapped to 0 / 1

    std::size_t n_rows() const { return features.rows(); }
    std::size_t n_features() const { return features.cols(); }

    std::array<std::int64_t, 2> class_counts() const {
        std::array<std::int64_t, 2> counts = {0, 0};
        for (int y : labels) counts[static_cast<std::size_t>(y)]++;
        return counts;
    }

    // Row subset (copying). Order of `indices` is preserved.
    Dataset subset(const std::vector<std::size_t>& indices) const {
        Dataset out;
        out.features = Matrix(indices.size(), n_features());
        out.labels.reserve(indices.size());
        for (std::size_t r = 0; r < indices.size(); ++r) {
            const auto src = features.row(indices[r]);
            auto dst = out.features.row(r);
            std::copy(src.begin(), src.end(), dst.begin());
            out.labels.push_back(labels[indices[r]]);
        }
        out.feature_names = feature_names;
        out.name = name;
        out.label_names = label_names;
        return out;
    }
};

// Throws std::invalid_argument if the dataset violates its invariants.
// Single-class datasets are rejected unless allow_single_class is set.
inline void validate_dataset(const Dataset& ds, bool allow_single_class = false) {
    if (ds.n_rows() < 2) throw std::invalid_argument("dataset: need at least 2 rows");
    if (ds.n_features() < 1) throw std::invalid_argument("dataset: need at least 1 feature");
    if (ds.labels.size() != ds.n_rows())
        throw std::invalid_argument("dataset: label count does not match row count");
    if (ds.feature_names.size() != ds.n_features())
        throw std::invalid_argument("dataset: feature name count does not match feature count");
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t c = 0; c < ds.n_features(); ++c) {
            if (!std::isfinite(ds.features(r, c))) {
                throw std::invalid_argument("non-finite feature value at row " +
                                            std::to_string(r) + ", column " + std::to_string(c));
            }
        }
    }
    std::array<std::int64_t, 2> counts = {0, 0};
    for (int y : ds.labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("dataset: label outside {0,1}");
        counts[static_cast<std::size_t>(y)]++;
    }
    if (!allow_single_class && (counts[0] == 0 || counts[1] == 0))
        throw std::invalid_argument("dataset: both classes must be present");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace detail

inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".json"; }

// Loads a CSV with a header row; `label_column` names the label column, every
// other column is a feature. Exactly two distinct label values are accepted
// and mapped to {0,1} by sorted order.
inline Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file: " + path);
    const auto header = detail::split_csv_line(line);

    std::size_t label_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == label_column) {
            label_idx = i;
            break;
        }
    }
    if (label_idx == header.size())
        throw std::runtime_error("load_csv: label column '" + label_column + "' not found");

    Dataset ds;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != label_idx) ds.feature_names.push_back(header[i]);

    std::vector<std::vector<double>> rows;
    std::vector<std::string> raw_labels;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("load_csv: row " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        std::vector<double> row;
        row.reserve(header.size() - 1);
        std::size_t feature_col = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == label_idx) {
                raw_labels.push_back(cells[i]);
                continue;
            }
            double v = 0;
            if (!detail::parse_double(cells[i], v))
                throw std::runtime_error("non-numeric feature cell at row " +
                                         std::to_string(line_no) + ", column " +
                                         std::to_string(feature_col));
            if (!std::isfinite(v))
                throw std::runtime_error("non-finite feature value at row " +
                                         std::to_string(line_no) + ", column " +
                                         std::to_string(feature_col));
            row.push_back(v);
            ++feature_col;
        }
        rows.push_back(std::move(row));
        ++line_no;
    }
    if (rows.empty()) throw std::runtime_error("load_csv: no data rows in " + path);

    // Map the two raw label values to {0,1} by sorted order.
    std::map<std::string, int> mapping;
    for (const auto& raw : raw_labels) mapping[raw] = 0;
    if (mapping.size() != 2)
        throw std::runtime_error("load_csv: expected exactly 2 distinct label values, found " +
                                 std::to_string(mapping.size()));
    int next = 0;
    for (auto& [raw, id] : mapping) id = next++;

    ds.features = Matrix::from_rows(rows);
    ds.labels.reserve(raw_labels.size());
    for (const auto& raw : raw_labels) ds.labels.push_back(mapping.at(raw));
    for (const auto& [raw, id] : mapping) ds.label_names[static_cast<std::size_t>(id)] = raw;
    ds.name = std::filesystem::path(path).stem().string();

    validate_dataset(ds, /*allow_single_class=*/true);
    return ds;
}

// Writes the dataset as CSV plus a JSON sidecar with name and label mapping.
inline void save_csv(const Dataset& ds, const std::string& path,
                     const std::string& label_column = "label") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open file for writing: " + path);
    for (const auto& fname : ds.feature_names) out << fname << ",";
    out << label_column << "\n";
    out.precision(17);
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t c = 0; c < ds.n_features(); ++c) out << ds.features(r, c) << ",";
        out << ds.label_names[static_cast<std::size_t>(ds.labels[r])] << "\n";
    }

    nlohmann::json meta;
    meta["name"] = ds.name;
    meta["label_column"] = label_column;
    meta["label_mapping"] = {{ds.label_names[0], 0}, {ds.label_names[1], 1}};
    meta["n_rows"] = ds.n_rows();
    meta["n_features"] = ds.n_features();
    std::ofstream side(sidecar_path(path));
    if (!side) throw std::runtime_error("save_csv: cannot write sidecar for: " + path);
    side << meta.dump(2) << "\n";
}

}  // namespace classlab
