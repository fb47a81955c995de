#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>

#include "../error.hpp"

namespace hdmax {

/// Integer lattice {k * quantum} that contains a given finite set of times
/// exactly. Times are mapped to integer ticks, so alignment questions
/// (is t - theta on the grid?) are answered without floating tolerance drift.
class TimeLattice {
public:
    /// Finds the coarsest decimal lattice containing every value. Throws
    /// ConfigError when the values are not commensurate at <= 12 decimals.
    static TimeLattice fit(std::span<const double> values) {
        for (int digits = 0; digits <= 12; ++digits) {
            const double scale = std::pow(10.0, digits);
            bool ok = true;
            std::int64_t g = 0;
            for (double v : values) {
                const double x = v * scale;
                if (!std::isfinite(x) || std::fabs(x) > 1.0e9) {
                    ok = false;
                    break;
                }
                const double r = std::nearbyint(x);
                if (std::fabs(x - r) > kSnap) {
                    ok = false;
                    break;
                }
                g = std::gcd(g, static_cast<std::int64_t>(std::llabs(static_cast<long long>(r))));
            }
            if (ok) return TimeLattice(scale, g == 0 ? 1 : g);
        }
        throw ConfigError("sample times and lag are not commensurate on a decimal grid; "
                          "the driving grid cannot represent them exactly");
    }

    double quantum() const { return static_cast<double>(step_) / scale_; }

    std::int64_t tick(double t) const {
        const double x = t * scale_;
        const auto r = static_cast<std::int64_t>(std::llround(x));
        if (std::fabs(x - static_cast<double>(r)) > kSnap || r % step_ != 0)
            throw ConfigError("time " + std::to_string(t) + " is not representable on the driving grid");
        return r / step_;
    }

    double time(std::int64_t tick) const {
        return static_cast<double>(tick * step_) / scale_;
    }

private:
    // Largest deviation from an integer (in scaled units) still read as exact.
    static constexpr double kSnap = 1e-6;

    TimeLattice(double scale, std::int64_t step) : scale_(scale), step_(step) {}

    double scale_;
    std::int64_t step_;
};

} // namespace hdmax
