#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../parallel.hpp"
#include "../random.hpp"
#include "../stats/empirical.hpp"
#include "contrast.hpp"

namespace hdmax {

enum class Multiplier {
    rademacher,
    gaussian,
    unit,  // every weight +1; reproduces the observed statistic (test hook)
};

inline const char* to_string(Multiplier m) {
    switch (m) {
    case Multiplier::rademacher: return "rademacher";
    case Multiplier::gaussian: return "gaussian";
    default: return "unit";
    }
}

inline Multiplier parse_multiplier(const std::string& s) {
    if (s == "rademacher") return Multiplier::rademacher;
    if (s == "gaussian") return Multiplier::gaussian;
    if (s == "unit") return Multiplier::unit;
    throw ConfigError("unknown multiplier '" + s + "' (rademacher | gaussian | unit)");
}

struct BootstrapConfig {
    std::size_t R = 999;
    Multiplier multiplier = Multiplier::rademacher;
    Seed seed{};
    bool scale_by_sqrt_n = false;
    double n = 1.0;  // caller-supplied scaling parameter for sqrt(n)
    unsigned threads = 1;
    double endpoint_tol = kDefaultEndpointTol;
    // Above this many stored overlap pairs, replications re-run the sweep.
    std::size_t max_pairs = 64u << 20;

    void validate() const {
        if (R < 1) throw ParameterError("bootstrap needs R >= 1 replications");
        if (scale_by_sqrt_n && !(n > 0.0)) throw ParameterError("scaling parameter n must be positive");
    }
};

namespace detail {

inline void draw_multipliers(Multiplier kind, Seed seed, std::size_t rep, std::uint64_t asset,
                             std::vector<double>& w) {
    if (kind == Multiplier::unit) {
        std::fill(w.begin(), w.end(), 1.0);
        return;
    }
    Engine eng = make_engine(seed, {0xB007, rep, asset});
    if (kind == Multiplier::rademacher)
        fill_rademacher(eng, w);
    else
        fill_normal(eng, w);
}

} // namespace detail

/// Wild-bootstrap statistics T*(1..R).
///
/// Replication r draws i.i.d. weights w1_I, w2_J (substreams (r, asset)) and
/// evaluates max_theta |sum w1_I X1(I) w2_J X2(J) K(I, J - theta)| with the
/// same scaling as the observed statistic. Overlap pairs are computed once;
/// replications are processed in blocks of eight lanes so the pair loop
/// runs over contiguous lane vectors. The output is ordered by replication.
inline std::vector<double> bootstrap_statistics(const IntervalPartition& p1, std::span<const double> dx1,
                                                const IntervalPartition& p2, std::span<const double> dx2,
                                                const LagGrid& grid, const BootstrapConfig& cfg) {
    cfg.validate();
    if (dx1.size() != p1.size() || dx2.size() != p2.size())
        throw DataError("increment count does not match partition size");
    const std::size_t n1 = p1.size();
    const std::size_t n2 = p2.size();
    const double scale = cfg.scale_by_sqrt_n ? std::sqrt(cfg.n) : 1.0;
    std::vector<double> out(cfg.R, 0.0);

    const auto pairs = build_overlap_pairs(p1, p2, grid, cfg.endpoint_tol, cfg.max_pairs);

    if (!pairs) {
        parallel_for(cfg.R, cfg.threads, [&](std::size_t r) {
            std::vector<double> a(n1), b(n2);
            detail::draw_multipliers(cfg.multiplier, cfg.seed, r, 1, a);
            detail::draw_multipliers(cfg.multiplier, cfg.seed, r, 2, b);
            for (std::size_t i = 0; i < n1; ++i) a[i] *= dx1[i];
            for (std::size_t j = 0; j < n2; ++j) b[j] *= dx2[j];
            double tmax = 0.0;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                double acc = 0.0;
                for_each_overlap(p1, p2, grid[k], cfg.endpoint_tol,
                                 [&](std::size_t i, std::size_t j) { acc += a[i] * b[j]; });
                tmax = std::max(tmax, std::fabs(acc));
            }
            out[r] = scale * tmax;
        });
        return out;
    }

    constexpr std::size_t kLanes = 8;
    const std::size_t blocks = (cfg.R + kLanes - 1) / kLanes;
    const auto& pi = pairs->i;
    const auto& pj = pairs->j;
    const auto& off = pairs->offsets;

    parallel_for(blocks, cfg.threads, [&](std::size_t blk) {
        std::vector<double> wa(n1 * kLanes, 0.0), wb(n2 * kLanes, 0.0);
        std::vector<double> w1(n1), w2(n2);
        for (std::size_t l = 0; l < kLanes; ++l) {
            const std::size_t r = blk * kLanes + l;
            if (r >= cfg.R) break;
            detail::draw_multipliers(cfg.multiplier, cfg.seed, r, 1, w1);
            detail::draw_multipliers(cfg.multiplier, cfg.seed, r, 2, w2);
            for (std::size_t i = 0; i < n1; ++i) wa[i * kLanes + l] = w1[i] * dx1[i];
            for (std::size_t j = 0; j < n2; ++j) wb[j * kLanes + l] = w2[j] * dx2[j];
        }
        alignas(64) std::array<double, kLanes> tmax{};
        for (std::size_t k = 0; k + 1 < off.size(); ++k) {
            alignas(64) std::array<double, kLanes> acc{};
            for (std::size_t p = off[k]; p < off[k + 1]; ++p) {
                const double* x = wa.data() + static_cast<std::size_t>(pi[p]) * kLanes;
                const double* y = wb.data() + static_cast<std::size_t>(pj[p]) * kLanes;
                for (std::size_t l = 0; l < kLanes; ++l) acc[l] += x[l] * y[l];
            }
            for (std::size_t l = 0; l < kLanes; ++l) tmax[l] = std::max(tmax[l], std::fabs(acc[l]));
        }
        for (std::size_t l = 0; l < kLanes; ++l) {
            const std::size_t r = blk * kLanes + l;
            if (r < cfg.R) out[r] = scale * tmax[l];
        }
    });
    return out;
}

inline std::vector<double> bootstrap_statistics(const PathPair& path, const LagGrid& grid,
                                                const BootstrapConfig& cfg) {
    path.validate();
    const IntervalPartition p1(path.scheme.times1);
    const IntervalPartition p2(path.scheme.times2);
    const auto dx1 = increments(path.x1);
    const auto dx2 = increments(path.x2);
    return bootstrap_statistics(p1, dx1, p2, dx2, grid, cfg);
}

/// q*(1 - alpha): the ceil((R+1)(1-alpha))-th order statistic of T*, or +inf
/// (beyond_sample set) when alpha is too small for R.
inline EmpiricalQuantile bootstrap_quantile(std::span<const double> tstar, double alpha) {
    return empirical_quantile(tstar, alpha);
}

/// (1/R) * #{r : T*(r) > T}.
inline double p_value(double T, std::span<const double> tstar) {
    if (tstar.empty()) throw ParameterError("p-value needs at least one bootstrap statistic");
    std::size_t above = 0;
    for (double t : tstar)
        if (t > T) ++above;
    return static_cast<double>(above) / static_cast<double>(tstar.size());
}

} // namespace hdmax
