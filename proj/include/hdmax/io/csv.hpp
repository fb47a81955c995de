#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "../error.hpp"
#include "../leadlag/test.hpp"
#include "../linalg.hpp"
#include "../spotvol/band.hpp"
#include "../stochastics/model.hpp"

namespace hdmax::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace detail

/// Numeric rows of a comma-separated stream. Blank lines and '#' comments are
/// skipped; a non-numeric first row is treated as a header.
inline std::vector<std::vector<double>> read_numeric_csv(std::istream& in, const std::string& what = "csv") {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        auto view = detail::trim(line);
        if (view.empty() || view.front() == '#') continue;
        std::vector<double> row;
        bool ok = true;
        std::size_t start = 0;
        while (true) {
            const auto comma = view.find(',', start);
            const auto cell = view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            double v = 0.0;
            if (!detail::parse_double(cell, v)) {
                ok = false;
                break;
            }
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!ok) {
            if (first) {
                first = false;
                continue;
            }
            throw DataError(what + ": non-numeric value on line " + std::to_string(lineno));
        }
        first = false;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << std::setprecision(17);
    return out;
}

/// Tick data with columns (asset in {1,2}, time, price). Rows of each asset
/// must have strictly increasing times.
inline PathPair read_path_pair(std::istream& in, double T = 0.0) {
    PathPair p;
    for (const auto& row : read_numeric_csv(in, "tick data")) {
        if (row.size() != 3) throw DataError("tick data rows need exactly 3 columns (asset, time, price)");
        if (row[0] == 1.0) {
            p.scheme.times1.push_back(row[1]);
            p.x1.push_back(row[2]);
        } else if (row[0] == 2.0) {
            p.scheme.times2.push_back(row[1]);
            p.x2.push_back(row[2]);
        } else {
            throw DataError("asset column must be 1 or 2");
        }
    }
    double tmax = 0.0;
    for (double t : p.scheme.times1) tmax = std::max(tmax, t);
    for (double t : p.scheme.times2) tmax = std::max(tmax, t);
    p.scheme.T = T > 0.0 ? T : tmax;
    p.validate();
    return p;
}

inline void write_path_pair(std::ostream& out, const PathPair& p) {
    out << std::setprecision(17) << "asset,time,value\n";
    for (std::size_t i = 0; i < p.x1.size(); ++i) out << 1 << ',' << p.scheme.times1[i] << ',' << p.x1[i] << '\n';
    for (std::size_t j = 0; j < p.x2.size(); ++j) out << 2 << ',' << p.scheme.times2[j] << ',' << p.x2[j] << '\n';
}

/// Single-asset series: columns (time, value), or (asset, time, value) from
/// which rows of `asset` are taken.
inline Series read_series(std::istream& in, int asset = 1) {
    Series s;
    for (const auto& row : read_numeric_csv(in, "series")) {
        if (row.size() == 2) {
            s.times.push_back(row[0]);
            s.values.push_back(row[1]);
        } else if (row.size() == 3) {
            if (row[0] == static_cast<double>(asset)) {
                s.times.push_back(row[1]);
                s.values.push_back(row[2]);
            }
        } else {
            throw DataError("series rows need 2 (time, value) or 3 (asset, time, value) columns");
        }
    }
    if (s.times.size() < 2) throw DataError("series needs at least two observations");
    return s;
}

inline Matrix read_matrix(std::istream& in, const std::string& what = "matrix") {
    const auto rows = read_numeric_csv(in, what);
    if (rows.empty()) throw DataError(what + " is empty");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.front().size()) throw DataError(what + " has ragged rows");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return m;
}

inline Matrix read_matrix_file(const std::string& path) {
    auto in = open_in(path);
    return read_matrix(in, path);
}

/// (theta, U_n(theta), no_overlap) per lag; header only for an empty report.
inline void write_contrast_csv(std::ostream& out, const TestReport& r) {
    out << std::setprecision(17) << "theta,contrast,no_overlap\n";
    for (std::size_t k = 0; k < r.thetas.size(); ++k)
        out << r.thetas[k] << ',' << r.contrast[k] << ',' << (r.no_overlap[k] ? "true" : "false") << '\n';
}

/// (t, sigma2_hat, s_n, lower, upper, valid); invalid rows are kept.
inline void write_band_csv(std::ostream& out, const BandResult& b) {
    out << std::setprecision(17) << "t,sigma2_hat,s_n,lower,upper,valid\n";
    for (std::size_t k = 0; k < b.times.size(); ++k) {
        out << b.times[k] << ',' << b.sigma2_hat[k] << ',' << b.s_n[k] << ',' << b.lower[k] << ',';
        if (std::isinf(b.upper[k]))
            out << "inf";
        else
            out << b.upper[k];
        out << ',' << (b.valid[k] ? "true" : "false") << '\n';
    }
}

} // namespace hdmax::io
