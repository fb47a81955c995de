#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "../error.hpp"

namespace hdmax {

/// Half-open interval (left, right].
struct Interval {
    double left;
    double right;

    double width() const { return right - left; }
};

/// Overlap indicator of two half-open intervals (a, b] and (c, d]:
/// nonempty intersection iff a < d and c < b. Intervals that only touch at
/// an endpoint do not overlap. `tol` > 0 additionally treats endpoints within
/// tol of each other as touching, which is meant for times that went through
/// floating-point arithmetic (shifts by a lag, ingested data).
inline bool overlaps(Interval I, Interval J, double tol = 0.0) {
    return I.left < J.right - tol && J.left < I.right - tol;
}

/// Contiguous intervals (t_{i-1}, t_i] spanned by strictly increasing times.
class IntervalPartition {
public:
    explicit IntervalPartition(std::vector<double> times) : times_(std::move(times)) {
        if (times_.size() < 2) throw DataError("partition needs at least two observation times");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i - 1] < times_[i]))
                throw DataError("observation times must be strictly increasing");
    }

    std::size_t size() const { return times_.size() - 1; }

    Interval operator[](std::size_t i) const { return {times_[i], times_[i + 1]}; }

    std::span<const double> times() const { return times_; }

    double min_width() const {
        double w = times_[1] - times_[0];
        for (std::size_t i = 2; i < times_.size(); ++i) w = std::min(w, times_[i] - times_[i - 1]);
        return w;
    }

private:
    std::vector<double> times_;
};

inline IntervalPartition build_partition(std::vector<double> times) {
    return IntervalPartition(std::move(times));
}

/// Increments V(I) = V_{t_i} - V_{t_{i-1}} of observed values.
inline std::vector<double> increments(std::span<const double> values) {
    if (values.size() < 2) throw DataError("need at least two observations");
    std::vector<double> dx(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) dx[i] = values[i + 1] - values[i];
    return dx;
}

/// Finite, strictly increasing set of candidate lags.
class LagGrid {
public:
    explicit LagGrid(std::vector<double> thetas) : thetas_(std::move(thetas)) {
        if (thetas_.empty()) throw ConfigError("lag grid must be nonempty");
        for (std::size_t k = 0; k < thetas_.size(); ++k) {
            if (!std::isfinite(thetas_[k])) throw ConfigError("lag grid entries must be finite");
            if (k > 0 && !(thetas_[k - 1] < thetas_[k]))
                throw ConfigError("lag grid must be strictly increasing");
        }
    }

    /// {k * step : k integer, |k * step| <= radius}.
    static LagGrid symmetric(double step, double radius) {
        if (!(step > 0.0)) throw ConfigError("grid step must be positive");
        if (!(radius >= 0.0)) throw ConfigError("grid radius must be nonnegative");
        const auto K = static_cast<long>(std::floor(radius / step + 1e-9));
        std::vector<double> t;
        t.reserve(static_cast<std::size_t>(2 * K + 1));
        for (long k = -K; k <= K; ++k) t.push_back(static_cast<double>(k) * step);
        return LagGrid(std::move(t));
    }

    std::size_t size() const { return thetas_.size(); }
    double operator[](std::size_t k) const { return thetas_[k]; }
    std::span<const double> values() const { return thetas_; }

private:
    std::vector<double> thetas_;
};

} // namespace hdmax
