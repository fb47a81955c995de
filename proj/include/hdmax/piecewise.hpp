#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "error.hpp"

namespace hdmax {

/// Deterministic, nonnegative, piecewise-constant function of time.
///
/// Defined by breakpoints b_0 < b_1 < ... < b_m and levels v_0 .. v_{m-1};
/// the function equals v_k on [b_k, b_{k+1}). Left of b_0 it takes v_0 and
/// right of b_m it takes v_{m-1}, so a single-piece function is a constant on
/// the whole line. All integrals are exact.
class PiecewiseConstant {
public:
    PiecewiseConstant() : PiecewiseConstant(1.0) {}

    explicit PiecewiseConstant(double level)
        : breaks_{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
          levels_{level} {
        check_levels();
    }

    PiecewiseConstant(std::vector<double> breaks, std::vector<double> levels)
        : breaks_(std::move(breaks)), levels_(std::move(levels)) {
        if (breaks_.size() < 2 || levels_.size() + 1 != breaks_.size())
            throw ConfigError("piecewise function needs m+1 breakpoints for m levels");
        for (std::size_t k = 1; k < breaks_.size(); ++k)
            if (!(breaks_[k - 1] < breaks_[k]))
                throw ConfigError("piecewise breakpoints must be strictly increasing");
        breaks_.front() = -std::numeric_limits<double>::infinity();
        breaks_.back() = std::numeric_limits<double>::infinity();
        check_levels();
    }

    double operator()(double t) const { return levels_[piece(t)]; }

    /// Interior breakpoints (finite ones only).
    std::span<const double> knots() const {
        return std::span<const double>(breaks_).subspan(1, breaks_.size() - 2);
    }

    std::span<const double> levels() const { return levels_; }

    double max_level() const { return *std::max_element(levels_.begin(), levels_.end()); }

    bool is_constant() const { return levels_.size() == 1; }

    /// Integral of f(t)^2 over [a, b] (zero when b <= a).
    double integral_sq(double a, double b) const {
        if (!(b > a)) return 0.0;
        double acc = 0.0;
        std::size_t k = piece(a);
        double left = a;
        while (left < b) {
            double right = std::min(b, breaks_[k + 1]);
            acc += levels_[k] * levels_[k] * (right - left);
            left = right;
            ++k;
        }
        return acc;
    }

private:
    std::size_t piece(double t) const {
        auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, t);
        return static_cast<std::size_t>(it - breaks_.begin()) - 1;
    }

    void check_levels() const {
        for (double v : levels_)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ConfigError("volatility levels must be finite and nonnegative");
    }

    std::vector<double> breaks_;
    std::vector<double> levels_;
};

} // namespace hdmax
