#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "../error.hpp"

namespace hdmax {

inline constexpr const char* kQuantileConvention =
    "ceil((R+1)(1-alpha))-th order statistic; +inf when that rank exceeds R";

struct EmpiricalQuantile {
    double value = 0.0;
    std::size_t rank = 0;      // 1-based order-statistic index requested
    bool beyond_sample = false; // rank > R: value is +inf
};

/// 1-based rank ceil((R+1)(1-alpha)) used by every quantile in the library.
inline std::size_t quantile_rank(std::size_t R, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    const double x = static_cast<double>(R + 1) * (1.0 - alpha);
    // products like 1000 * 0.95 land a few ulps off the integer
    return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

/// Empirical (1 - alpha)-quantile of `sample` under the ceil((R+1)(1-alpha))
/// order-statistic convention.
inline EmpiricalQuantile empirical_quantile(std::span<const double> sample, double alpha) {
    if (sample.empty()) throw ParameterError("quantile of an empty sample");
    EmpiricalQuantile q;
    q.rank = quantile_rank(sample.size(), alpha);
    if (q.rank > sample.size()) {
        q.value = std::numeric_limits<double>::infinity();
        q.beyond_sample = true;
        return q;
    }
    if (q.rank == 0) q.rank = 1;
    std::vector<double> sorted(sample.begin(), sample.end());
    auto nth = sorted.begin() + static_cast<std::ptrdiff_t>(q.rank - 1);
    std::nth_element(sorted.begin(), nth, sorted.end());
    q.value = *nth;
    return q;
}

/// sup_x |F_a(x) - F_b(x)| for the two empirical CDFs, evaluated exactly at
/// the pooled sample points.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ParameterError("KS distance needs two nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double best = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        best = std::max(best, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return best;
}

} // namespace hdmax
