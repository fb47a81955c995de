#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../piecewise.hpp"
#include "../random.hpp"
#include "time_lattice.hpp"

namespace hdmax {

/// Bivariate lead-lag diffusion observed on [0, T]:
///   X1_t = x0_1 + int_0^t sigma1 dB1,   X2_t = x0_2 + int sigma2 dB2 on the
/// clock shifted by theta, with corr(dB1, dB2) = rho.
struct LeadLagModel {
    double x0_1 = 0.0;
    double x0_2 = 0.0;
    PiecewiseConstant sigma1{1.0};
    PiecewiseConstant sigma2{1.0};
    double rho = 0.0;
    double theta = 0.0;
    double T = 1.0;

    void validate() const {
        if (!(std::fabs(rho) < 1.0)) throw ConfigError("correlation must satisfy |rho| < 1");
        if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("horizon T must be positive");
        if (!std::isfinite(theta)) throw ConfigError("lag must be finite");
        if (!std::isfinite(x0_1) || !std::isfinite(x0_2)) throw ConfigError("initial values must be finite");
    }
};

enum class SchemeKind { custom, equidistant, subsample };

inline const char* to_string(SchemeKind k) {
    switch (k) {
    case SchemeKind::equidistant: return "synchronous-equidistant";
    case SchemeKind::subsample: return "nonsynchronous-subsample";
    default: return "custom";
    }
}

struct SchemeLabel {
    SchemeKind kind = SchemeKind::custom;
    double step = 0.0;    // h for equidistant, base step for subsample
    std::size_t m = 0;    // points per asset for subsample
};

/// Per-asset observation times on [0, T].
struct SamplingScheme {
    std::vector<double> times1;
    std::vector<double> times2;
    double T = 1.0;
    SchemeLabel label;

    void validate() const {
        auto check = [&](const std::vector<double>& t, const char* who) {
            if (t.size() < 2) throw DataError(std::string(who) + ": need at least two observation times");
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (!(t[i] >= 0.0 && t[i] <= T))
                    throw DataError(std::string(who) + ": observation time outside [0, T]");
                if (i > 0 && !(t[i - 1] < t[i]))
                    throw DataError(std::string(who) + ": observation times must be strictly increasing");
            }
        };
        check(times1, "asset 1");
        check(times2, "asset 2");
    }
};

struct PathPair {
    SamplingScheme scheme;
    std::vector<double> x1;
    std::vector<double> x2;
    std::optional<Seed> seed;

    void validate() const {
        scheme.validate();
        if (x1.size() != scheme.times1.size() || x2.size() != scheme.times2.size())
            throw DataError("value arrays must match the observation time arrays");
    }
};

namespace detail {

inline std::size_t grid_points(double h, double T) {
    return static_cast<std::size_t>(std::floor(T / h + 1e-9)) + 1;
}

} // namespace detail

/// {0, h, 2h, ..., floor(T/h) h}, identical for both assets.
inline std::vector<double> equidistant_times(double h, double T) {
    if (!(h > 0.0) || !(h <= T)) throw ParameterError("equidistant step must satisfy 0 < h <= T");
    const std::size_t n = detail::grid_points(h, T);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * h;
    return t;
}

inline SamplingScheme make_equidistant_scheme(double h, double T) {
    SamplingScheme s;
    s.times1 = equidistant_times(h, T);
    s.times2 = s.times1;
    s.T = T;
    s.label = {SchemeKind::equidistant, h, s.times1.size()};
    return s;
}

/// Draws m of the base-grid points {i * base_step} without replacement,
/// independently per asset; the origin is always kept.
inline SamplingScheme make_subsample_scheme(std::size_t m, double base_step, double T, Seed seed) {
    const auto base = equidistant_times(base_step, T);
    if (m < 2 || m > base.size())
        throw ParameterError("subsample size must satisfy 2 <= m <= base grid size (" +
                             std::to_string(base.size()) + ")");
    auto draw = [&](std::uint64_t asset) {
        Engine eng = make_engine(seed, {0x5c4e3e, asset});
        std::vector<double> picked;
        picked.reserve(m);
        picked.push_back(base.front());
        // selection sampling keeps the base order, so the output is sorted
        std::sample(base.begin() + 1, base.end(), std::back_inserter(picked), m - 1, eng);
        return picked;
    };
    SamplingScheme s;
    s.times1 = draw(1);
    s.times2 = draw(2);
    s.T = T;
    s.label = {SchemeKind::subsample, base_step, m};
    return s;
}

struct SchemeParams {
    SchemeKind kind = SchemeKind::equidistant;
    double step = 1e-3;
    std::size_t m = 300;
};

inline SamplingScheme make_scheme(const SchemeParams& p, double T, Seed seed) {
    switch (p.kind) {
    case SchemeKind::equidistant: return make_equidistant_scheme(p.step, T);
    case SchemeKind::subsample: return make_subsample_scheme(p.m, p.step, T, seed);
    default: throw ParameterError("make_scheme: custom schemes are built directly");
    }
}

/// Upper bound on driving-grid cells for a single simulation.
inline constexpr std::int64_t kMaxDrivingCells = 50'000'000;

/// Simulates the model at the scheme's times.
///
/// One fine two-sided grid is laid over the lattice that contains every
/// sample time of asset 1, every shifted time t - theta of asset 2, the
/// origin, and the volatility knots. Per cell c the driving increments are
/// dB1 = z1 and dB2 = rho z1 + sqrt(1 - rho^2) w, scaled by the exact
/// L2-mass of sigma over the cell. X2 at time t reads B2 at t - theta, so
/// Cov(X1(I), X2(J)) = rho * int_{I cap (J - theta)} sigma1(s) sigma2(s + theta) ds
/// holds exactly. Times that the lattice cannot represent are rejected.
inline PathPair simulate_leadlag(const LeadLagModel& model, const SamplingScheme& scheme, Seed seed) {
    model.validate();
    scheme.validate();
    if (std::fabs(scheme.T - model.T) > 1e-12 * std::max(1.0, model.T))
        throw ConfigError("scheme horizon differs from model horizon");

    std::vector<double> anchors{0.0, model.theta};
    anchors.insert(anchors.end(), scheme.times1.begin(), scheme.times1.end());
    anchors.insert(anchors.end(), scheme.times2.begin(), scheme.times2.end());
    for (double k : model.sigma1.knots())
        if (k > -model.T && k < 2 * model.T) anchors.push_back(k);
    for (double k : model.sigma2.knots())
        if (k > -model.T && k < 2 * model.T) anchors.push_back(k);
    const TimeLattice lattice = TimeLattice::fit(anchors);
    const double q = lattice.quantum();

    const std::int64_t lag = lattice.tick(model.theta);
    std::vector<std::int64_t> ticks1(scheme.times1.size()), shifted2(scheme.times2.size());
    for (std::size_t i = 0; i < ticks1.size(); ++i) ticks1[i] = lattice.tick(scheme.times1[i]);
    for (std::size_t j = 0; j < shifted2.size(); ++j) shifted2[j] = lattice.tick(scheme.times2[j]) - lag;

    std::int64_t lo = std::min<std::int64_t>({0, ticks1.front(), shifted2.front()});
    std::int64_t hi = std::max<std::int64_t>({0, ticks1.back(), shifted2.back()});
    if (hi - lo > kMaxDrivingCells) throw ConfigError("driving grid too fine for the requested times");
    const auto cells = static_cast<std::size_t>(hi - lo);

    std::vector<double> z1(cells), w(cells);
    {
        Engine e1 = make_engine(seed, {0xB1, 1});
        Engine e2 = make_engine(seed, {0xB1, 2});
        fill_normal(e1, z1);
        fill_normal(e2, w);
    }
    const double rho = model.rho;
    const double rho_c = std::sqrt(1.0 - rho * rho);
    const bool flat1 = model.sigma1.is_constant();
    const bool flat2 = model.sigma2.is_constant();
    const double flat_scale1 = model.sigma1.levels()[0] * std::sqrt(q);
    const double flat_scale2 = model.sigma2.levels()[0] * std::sqrt(q);

    // Prefix sums of X1 and X2 increments along the B clock.
    std::vector<double> p1(cells + 1, 0.0), p2(cells + 1, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
        const std::int64_t tick = lo + static_cast<std::int64_t>(c);
        double s1 = flat_scale1, s2 = flat_scale2;
        if (!flat1) s1 = std::sqrt(model.sigma1.integral_sq(lattice.time(tick), lattice.time(tick + 1)));
        if (!flat2)
            s2 = std::sqrt(model.sigma2.integral_sq(lattice.time(tick + lag), lattice.time(tick + 1 + lag)));
        p1[c + 1] = p1[c] + s1 * z1[c];
        p2[c + 1] = p2[c] + s2 * (rho * z1[c] + rho_c * w[c]);
    }
    const auto origin = static_cast<std::size_t>(-lo);

    PathPair out;
    out.scheme = scheme;
    out.seed = seed;
    out.x1.resize(ticks1.size());
    out.x2.resize(shifted2.size());
    for (std::size_t i = 0; i < ticks1.size(); ++i)
        out.x1[i] = model.x0_1 + (p1[static_cast<std::size_t>(ticks1[i] - lo)] - p1[origin]);
    for (std::size_t j = 0; j < shifted2.size(); ++j)
        out.x2[j] = model.x0_2 + (p2[static_cast<std::size_t>(shifted2[j] - lo)] - p2[origin]);
    return out;
}

} // namespace hdmax

namespace hdmax {

/// Single-asset observations.
struct Series {
    std::vector<double> times;
    std::vector<double> values;
};

/// X_t = x0 + int_0^t sigma(s) dB_s observed at t_i = T i / n, i = 0..n.
/// Increments are Gaussian with variance int_{t_{i-1}}^{t_i} sigma^2 exactly.
inline Series simulate_diffusion(const PiecewiseConstant& sigma, std::size_t n, double T, Seed seed,
                                 double x0 = 0.0) {
    if (n < 1) throw ParameterError("need n >= 1 increments");
    if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
    Series s;
    s.times.resize(n + 1);
    s.values.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) s.times[i] = T * static_cast<double>(i) / static_cast<double>(n);
    Engine eng = make_engine(seed, {0xD1F, 0});
    std::normal_distribution<double> dist;
    s.values[0] = x0;
    for (std::size_t i = 1; i <= n; ++i)
        s.values[i] = s.values[i - 1] + std::sqrt(sigma.integral_sq(s.times[i - 1], s.times[i])) * dist(eng);
    return s;
}

} // namespace hdmax
