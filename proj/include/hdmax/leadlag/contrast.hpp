#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "../error.hpp"
#include "../stochastics/model.hpp"
#include "partition.hpp"

namespace hdmax {

/// Endpoint tolerance applied when testing shifted intervals for overlap.
/// Lags are subtracted in floating point, so k*h - j*h need not equal
/// (k - j)*h bit for bit; 1e-9 time units absorbs that without merging
/// genuinely distinct sampling times. Set to 0 for exact endpoint semantics.
inline constexpr double kDefaultEndpointTol = 1e-9;

/// Calls f(i, j) for every pair with I_i overlapping J_j - theta, ordered by
/// i and then j. Two-pointer sweep: for fixed i the overlapping j form a
/// contiguous run whose start never moves left as i grows.
template <class F>
void for_each_overlap(const IntervalPartition& p1, const IntervalPartition& p2, double theta, double tol, F&& f) {
    const auto t1 = p1.times();
    const auto t2 = p2.times();
    const std::size_t n1 = p1.size();
    const std::size_t n2 = p2.size();
    std::size_t start = 0;
    for (std::size_t i = 0; i < n1; ++i) {
        const double a = t1[i];
        const double b = t1[i + 1];
        // skip J - theta lying entirely left of I
        while (start < n2 && !(a < (t2[start + 1] - theta) - tol)) ++start;
        for (std::size_t j = start; j < n2 && (t2[j] - theta) < b - tol; ++j) f(i, j);
    }
}

struct ContrastResult {
    std::vector<double> values;    // U_n(theta_k)
    std::vector<bool> no_overlap;  // no interval pair overlaps at theta_k
};

inline ContrastResult contrast(const IntervalPartition& p1, std::span<const double> dx1,
                               const IntervalPartition& p2, std::span<const double> dx2, const LagGrid& grid,
                               double tol = kDefaultEndpointTol) {
    if (dx1.size() != p1.size() || dx2.size() != p2.size())
        throw DataError("increment count does not match partition size");
    ContrastResult r;
    r.values.assign(grid.size(), 0.0);
    r.no_overlap.assign(grid.size(), true);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double acc = 0.0;
        bool any = false;
        for_each_overlap(p1, p2, grid[k], tol, [&](std::size_t i, std::size_t j) {
            acc += dx1[i] * dx2[j];
            any = true;
        });
        r.values[k] = acc;
        r.no_overlap[k] = !any;
    }
    return r;
}

/// U_n(theta) = sum_{I,J} X1(I) X2(J) 1{I cap (J - theta) != empty} for each
/// theta of the grid.
inline ContrastResult contrast(const PathPair& path, const LagGrid& grid, double tol = kDefaultEndpointTol) {
    path.validate();
    const IntervalPartition p1(path.scheme.times1);
    const IntervalPartition p2(path.scheme.times2);
    const auto dx1 = increments(path.x1);
    const auto dx2 = increments(path.x2);
    return contrast(p1, dx1, p2, dx2, grid, tol);
}

/// max_theta |U_n(theta)|, times sqrt(n) when `scale_by_sqrt_n`.
inline double test_statistic(std::span<const double> values, double n = 1.0, bool scale_by_sqrt_n = false) {
    if (values.empty()) throw ParameterError("test statistic of an empty contrast vector");
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return scale_by_sqrt_n ? std::sqrt(n) * m : m;
}

/// Index of the first lag attaining max |U_n(theta)|.
inline std::size_t argmax_abs(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (std::fabs(values[k]) > std::fabs(values[best])) best = k;
    return best;
}

/// Overlapping (i, j) pairs for every lag, flattened in sweep order;
/// pairs of lag k occupy [offsets[k], offsets[k+1]).
struct OverlapPairs {
    std::vector<std::uint32_t> i;
    std::vector<std::uint32_t> j;
    std::vector<std::size_t> offsets;

    std::size_t size() const { return i.size(); }
};

/// Materializes all overlap pairs, or returns nullopt once more than
/// `max_pairs` would be stored.
inline std::optional<OverlapPairs> build_overlap_pairs(const IntervalPartition& p1, const IntervalPartition& p2,
                                                       const LagGrid& grid, double tol, std::size_t max_pairs) {
    if (p1.size() > std::numeric_limits<std::uint32_t>::max() || p2.size() > std::numeric_limits<std::uint32_t>::max())
        return std::nullopt;
    OverlapPairs pairs;
    pairs.offsets.reserve(grid.size() + 1);
    pairs.offsets.push_back(0);
    bool over = false;
    for (std::size_t k = 0; k < grid.size() && !over; ++k) {
        for_each_overlap(p1, p2, grid[k], tol, [&](std::size_t i, std::size_t j) {
            if (over) return;
            if (pairs.i.size() >= max_pairs) {
                over = true;
                return;
            }
            pairs.i.push_back(static_cast<std::uint32_t>(i));
            pairs.j.push_back(static_cast<std::uint32_t>(j));
        });
        pairs.offsets.push_back(pairs.i.size());
    }
    if (over) return std::nullopt;
    return pairs;
}

} // namespace hdmax
