#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../parallel.hpp"
#include "../random.hpp"
#include "../stats/empirical.hpp"
#include "../stochastics/model.hpp"
#include "kernel.hpp"

namespace hdmax {

struct SpotVolConfig {
    double h = 0.05;
    Kernel kernel{};
    double a_n = 0.1;
    double delta = 0.0;  // evaluation grid step; 0 means h / 20
    double alpha = 0.05;
    std::size_t R = 10000;
    Seed seed{};
    unsigned threads = 1;
    std::optional<double> gamma;  // declared Hoelder exponent; diagnostics only

    double step() const { return delta > 0.0 ? delta : h / 20.0; }

    void validate(double T) const {
        if (!(h > 0.0 && h < T / 2.0)) throw ConfigError("bandwidth must satisfy 0 < h < T/2");
        if (!(a_n > h * kernel.support()))
            throw ConfigError("boundary trim must exceed h times the kernel support radius");
        if (!(a_n < T / 2.0)) throw ConfigError("boundary trim must be below T/2");
        if (!(step() > 0.0) || step() > h / 20.0 * (1.0 + 1e-12))
            throw ConfigError("evaluation step must satisfy 0 < delta <= h/20");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
        if (R < 1) throw ConfigError("need R >= 1 Monte Carlo draws");
    }
};

struct BandResult {
    std::vector<double> times;
    std::vector<double> sigma2_hat;
    std::vector<double> s_n;
    EmpiricalQuantile quantile;
    std::vector<double> lower;
    std::vector<double> upper;  // +inf where invalid
    std::vector<bool> valid;    // 1 - s_n * q > 0
    std::vector<std::string> warnings;
};

/// a_n, a_n + delta, ... up to T - a_n.
inline std::vector<double> evaluation_grid(double a_n, double T, double delta) {
    if (!(delta > 0.0)) throw ConfigError("evaluation step must be positive");
    const double span = T - 2.0 * a_n;
    if (span < 0.0) throw ConfigError("empty evaluation range [a_n, T - a_n]");
    const auto m = static_cast<std::size_t>(std::floor(span / delta + 1e-9));
    std::vector<double> t(m + 1);
    for (std::size_t j = 0; j <= m; ++j) t[j] = a_n + static_cast<double>(j) * delta;
    return t;
}

namespace detail {

// Horizon T and step of t_i = T i / n; throws unless the times are of that form.
inline double check_equidistant(std::span<const double> times) {
    if (times.size() < 2) throw DataError("need at least two observations");
    const double T = times.back();
    const auto n = static_cast<double>(times.size() - 1);
    if (!(T > 0.0)) throw DataError("observation horizon must be positive");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - T * static_cast<double>(i) / n) > 1e-9 * T)
            throw DataError("spot volatility estimation needs equidistant times t_i = T i / n starting at 0");
    return T;
}

// Nonzero kernel weights K_h(t_{i-1} - t) for increments i-1 in [first, first + w.size()).
struct WeightRow {
    std::size_t first = 0;
    std::vector<double> w;
};

inline WeightRow weight_row(double t, std::size_t n, double T, double h, const Kernel& kernel) {
    const double dt = T / static_cast<double>(n);
    const double reach = kernel.support() * h;
    const double lo = std::max(0.0, std::ceil((t - reach) / dt));
    const double hi = std::min(static_cast<double>(n - 1), std::floor((t + reach) / dt));
    WeightRow row;
    if (hi < lo) return row;
    row.first = static_cast<std::size_t>(lo);
    const auto last = static_cast<std::size_t>(hi);
    row.w.reserve(last - row.first + 1);
    for (std::size_t m = row.first; m <= last; ++m)
        row.w.push_back(kernel.scaled(T * static_cast<double>(m) / static_cast<double>(n) - t, h));
    return row;
}

inline double s_n_from_row(const WeightRow& row, std::size_t n) {
    double ss = 0.0;
    for (double w : row.w) ss += w * w;
    const double nn = static_cast<double>(n);
    return std::sqrt(2.0 / (nn * nn) * ss);
}

} // namespace detail

/// Kernel estimate sum_i K_h(t_{i-1} - t) (X_{t_i} - X_{t_{i-1}})^2 at each t.
inline std::vector<double> spot_estimate(const Series& path, std::span<const double> eval_times, double h,
                                         const Kernel& kernel) {
    if (path.values.size() != path.times.size()) throw DataError("time/value length mismatch");
    const double T = detail::check_equidistant(path.times);
    const std::size_t n = path.times.size() - 1;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = path.values[i + 1] - path.values[i];
        sq[i] = d * d;
    }
    std::vector<double> out(eval_times.size());
    for (std::size_t k = 0; k < eval_times.size(); ++k) {
        const auto row = detail::weight_row(eval_times[k], n, T, h, kernel);
        double acc = 0.0;
        for (std::size_t m = 0; m < row.w.size(); ++m) acc += row.w[m] * sq[row.first + m];
        out[k] = acc;
    }
    return out;
}

/// s_n(t) = sqrt(2/n^2 * sum_i K_h(t_{i-1} - t)^2) for t_i = T i / n.
inline double s_n(double t, std::size_t n, double T, double h, const Kernel& kernel) {
    if (n < 1) throw ParameterError("need n >= 1");
    return detail::s_n_from_row(detail::weight_row(t, n, T, h, kernel), n);
}

/// R draws of sup_t |Z_n(t)| over the delta-grid on [a_n, T - a_n], with
/// Z_n(t) = s_n(t)^{-1} sum_i K_h(t_{i-1} - t) z_i and z_i ~ N(0, 2/n^2)
/// i.i.d.; each Z_n(t) has unit variance by construction.
inline std::vector<double> simulate_sup_gaussian_analog(std::size_t n, double h, const Kernel& kernel, double a_n,
                                                        double T, double delta, std::size_t R, Seed seed,
                                                        unsigned threads = 1) {
    if (n < 1 || R < 1) throw ParameterError("need n >= 1 and R >= 1");
    if (!(h > 0.0)) throw ConfigError("bandwidth must be positive");
    const auto grid = evaluation_grid(a_n, T, delta);
    std::vector<detail::WeightRow> rows;
    rows.reserve(grid.size());
    for (double t : grid) {
        auto row = detail::weight_row(t, n, T, h, kernel);
        const double s = detail::s_n_from_row(row, n);
        if (!(s > 0.0))
            throw ConfigError("kernel window at t = " + std::to_string(t) + " contains no sampling point");
        for (double& w : row.w) w /= s;
        rows.push_back(std::move(row));
    }
    const double z_sd = std::sqrt(2.0) / static_cast<double>(n);
    std::vector<double> out(R);
    parallel_for(R, threads, [&](std::size_t r) {
        Engine eng = make_engine(seed, {0x5B, r});
        std::vector<double> z(n);
        fill_normal(eng, z, z_sd);
        double sup = 0.0;
        for (const auto& row : rows) {
            double acc = 0.0;
            const double* zz = z.data() + row.first;
            for (std::size_t m = 0; m < row.w.size(); ++m) acc += row.w[m] * zz[m];
            sup = std::max(sup, std::fabs(acc));
        }
        out[r] = sup;
    });
    return out;
}

/// Pointwise band [s2 / (1 + s q), s2 / (1 - s q)]; invalid (upper = +inf)
/// where 1 - s q <= 0.
inline void apply_band(BandResult& b, double q) {
    const std::size_t m = b.times.size();
    b.lower.resize(m);
    b.upper.resize(m);
    b.valid.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double sq = b.s_n[k] * q;
        b.lower[k] = b.sigma2_hat[k] / (1.0 + sq);
        b.valid[k] = 1.0 - sq > 0.0;
        b.upper[k] = b.valid[k] ? b.sigma2_hat[k] / (1.0 - sq) : std::numeric_limits<double>::infinity();
    }
}

struct UndersmoothingCheck {
    double bias_term = 0.0;      // n h^{1 + 2 gamma} log n
    double variance_term = 0.0;  // log^6 n / (n h)
};

inline UndersmoothingCheck undersmoothing_check(std::size_t n, double h, double gamma) {
    const double nn = static_cast<double>(n);
    const double ln = std::log(nn);
    return {nn * std::pow(h, 1.0 + 2.0 * gamma) * ln, std::pow(ln, 6) / (nn * h)};
}

/// Estimate, standard-error proxy and evaluation grid, without the quantile.
inline BandResult band_skeleton(const Series& path, const SpotVolConfig& cfg) {
    const double T = detail::check_equidistant(path.times);
    cfg.validate(T);
    const std::size_t n = path.times.size() - 1;
    BandResult b;
    b.times = evaluation_grid(cfg.a_n, T, cfg.step());
    b.sigma2_hat = spot_estimate(path, b.times, cfg.h, cfg.kernel);
    b.s_n.resize(b.times.size());
    for (std::size_t k = 0; k < b.times.size(); ++k) b.s_n[k] = s_n(b.times[k], n, T, cfg.h, cfg.kernel);
    if (cfg.gamma) {
        const auto u = undersmoothing_check(n, cfg.h, *cfg.gamma);
        if (u.bias_term > 1.0)
            b.warnings.push_back("n h^(1+2 gamma) log n = " + std::to_string(u.bias_term) +
                                 " > 1: bandwidth may be too large for the bias to vanish");
        if (u.variance_term > 1.0)
            b.warnings.push_back("log^6 n / (n h) = " + std::to_string(u.variance_term) +
                                 " > 1: too few observations per bandwidth");
    }
    return b;
}

/// Uniform band using the (1 - alpha)-quantile of pre-drawn sup |Z_n| values.
inline BandResult uniform_band(const Series& path, const SpotVolConfig& cfg, std::span<const double> sup_draws) {
    BandResult b = band_skeleton(path, cfg);
    b.quantile = empirical_quantile(sup_draws, cfg.alpha);
    if (b.quantile.beyond_sample) b.warnings.push_back("alpha too small for R: quantile is +inf");
    apply_band(b, b.quantile.value);
    return b;
}

/// Uniform confidence band for sigma^2 on [a_n, T - a_n].
inline BandResult uniform_band(const Series& path, const SpotVolConfig& cfg) {
    const double T = detail::check_equidistant(path.times);
    cfg.validate(T);
    const std::size_t n = path.times.size() - 1;
    const auto draws =
        simulate_sup_gaussian_analog(n, cfg.h, cfg.kernel, cfg.a_n, T, cfg.step(), cfg.R, cfg.seed, cfg.threads);
    return uniform_band(path, cfg, draws);
}

} // namespace hdmax
