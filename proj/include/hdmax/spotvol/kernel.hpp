#pragma once

#include <cmath>
#include <string>

#include "../error.hpp"

namespace hdmax {

enum class KernelType { epanechnikov, triangular, quartic };

/// Compactly supported, Lipschitz smoothing kernel on [-1, 1] integrating to
/// one. Only the fixed menu below can be constructed.
class Kernel {
public:
    explicit Kernel(KernelType type = KernelType::epanechnikov) : type_(type) {}

    static Kernel parse(const std::string& name) {
        if (name == "epanechnikov") return Kernel(KernelType::epanechnikov);
        if (name == "triangular") return Kernel(KernelType::triangular);
        if (name == "quartic" || name == "biweight") return Kernel(KernelType::quartic);
        throw ConfigError("unknown kernel '" + name + "' (epanechnikov | triangular | quartic)");
    }

    double operator()(double x) const {
        const double ax = std::fabs(x);
        if (ax >= 1.0) return 0.0;
        switch (type_) {
        case KernelType::epanechnikov: return 0.75 * (1.0 - x * x);
        case KernelType::triangular: return 1.0 - ax;
        case KernelType::quartic: {
            const double u = 1.0 - x * x;
            return (15.0 / 16.0) * u * u;
        }
        }
        return 0.0;
    }

    /// K_h(x) = K(x / h) / h.
    double scaled(double x, double h) const { return (*this)(x / h) / h; }

    double support() const { return 1.0; }

    /// int K(x)^2 dx.
    double squared_integral() const {
        switch (type_) {
        case KernelType::epanechnikov: return 3.0 / 5.0;
        case KernelType::triangular: return 2.0 / 3.0;
        case KernelType::quartic: return 5.0 / 7.0;
        }
        return 0.0;
    }

    KernelType type() const { return type_; }

    const char* name() const {
        switch (type_) {
        case KernelType::epanechnikov: return "epanechnikov";
        case KernelType::triangular: return "triangular";
        case KernelType::quartic: return "quartic";
        }
        return "?";
    }

private:
    KernelType type_;
};

} // namespace hdmax
