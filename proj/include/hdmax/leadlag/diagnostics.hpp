#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "../piecewise.hpp"
#include "contrast.hpp"

namespace hdmax {

/// V_n(theta) = n * sum_{I,J} (int_I sigma1^2)(int_J sigma2^2) K(I, J - theta),
/// the variance scale of sqrt(n) U_n(theta) under independence.
inline double v_n(const PiecewiseConstant& sigma1, const PiecewiseConstant& sigma2, const IntervalPartition& p1,
                  const IntervalPartition& p2, double theta, double n, double tol = kDefaultEndpointTol) {
    std::vector<double> m1(p1.size()), m2(p2.size());
    for (std::size_t i = 0; i < p1.size(); ++i) m1[i] = sigma1.integral_sq(p1[i].left, p1[i].right);
    for (std::size_t j = 0; j < p2.size(); ++j) m2[j] = sigma2.integral_sq(p2[j].left, p2[j].right);
    double acc = 0.0;
    for_each_overlap(p1, p2, theta, tol, [&](std::size_t i, std::size_t j) { acc += m1[i] * m2[j]; });
    return n * acc;
}

namespace detail {

// int_a^b f(t) g(t + shift) dt, exact for piecewise-constant f and g.
inline double shifted_product_integral(const PiecewiseConstant& f, const PiecewiseConstant& g, double shift,
                                       double a, double b) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a, b};
    for (double k : f.knots())
        if (k > a && k < b) cuts.push_back(k);
    for (double k : g.knots())
        if (k - shift > a && k - shift < b) cuts.push_back(k - shift);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t c = 1; c < cuts.size(); ++c) {
        const double lo = cuts[c - 1], hi = cuts[c];
        if (!(hi > lo)) continue;
        const double mid = 0.5 * (lo + hi);
        acc += f(mid) * g(mid + shift) * (hi - lo);
    }
    return acc;
}

} // namespace detail

/// Sigma(theta): int_0^{T-theta} sigma1(t) sigma2(t + theta) dt for theta >= 0,
/// int_0^{T+theta} sigma1(t - theta) sigma2(t) dt otherwise; zero for |theta| >= T.
/// T_n / sqrt(n) converges to max_m |rho_m| Sigma(theta_m) under a lead-lag
/// alternative.
inline double sigma_cross(const PiecewiseConstant& sigma1, const PiecewiseConstant& sigma2, double T, double theta) {
    if (std::fabs(theta) >= T) return 0.0;
    if (theta >= 0.0) return detail::shifted_product_integral(sigma1, sigma2, theta, 0.0, T - theta);
    return detail::shifted_product_integral(sigma2, sigma1, -theta, 0.0, T + theta);
}

} // namespace hdmax
