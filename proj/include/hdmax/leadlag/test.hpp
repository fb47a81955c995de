#pragma once

#include <string>
#include <vector>

#include "bootstrap.hpp"
#include "contrast.hpp"
#include "diagnostics.hpp"

namespace hdmax {

struct LeadLagTestConfig {
    BootstrapConfig bootstrap;
    double alpha = 0.05;
};

struct TestReport {
    std::vector<double> thetas;
    std::vector<double> contrast;
    std::vector<bool> no_overlap;
    double statistic = 0.0;
    bool scaled = false;
    double n = 1.0;
    std::vector<double> bootstrap;
    double alpha = 0.05;
    EmpiricalQuantile quantile;
    double p_value = 1.0;
    bool reject = false;  // p_value <= alpha
    double argmax_lag = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    BootstrapConfig config;
    std::vector<std::string> warnings;
};

/// Full lead-lag absence test on an observed path pair.
inline TestReport run_leadlag_test(const PathPair& path, const LagGrid& grid, const LeadLagTestConfig& cfg) {
    path.validate();
    cfg.bootstrap.validate();
    const IntervalPartition p1(path.scheme.times1);
    const IntervalPartition p2(path.scheme.times2);
    const auto dx1 = increments(path.x1);
    const auto dx2 = increments(path.x2);

    TestReport rep;
    rep.config = cfg.bootstrap;
    rep.alpha = cfg.alpha;
    rep.n = cfg.bootstrap.n;
    rep.scaled = cfg.bootstrap.scale_by_sqrt_n;
    rep.n1 = p1.size();
    rep.n2 = p2.size();
    rep.thetas.assign(grid.values().begin(), grid.values().end());

    auto c = contrast(p1, dx1, p2, dx2, grid, cfg.bootstrap.endpoint_tol);
    rep.contrast = std::move(c.values);
    rep.no_overlap = std::move(c.no_overlap);
    rep.statistic = test_statistic(rep.contrast, rep.n, rep.scaled);
    rep.argmax_lag = grid[argmax_abs(rep.contrast)];

    rep.bootstrap = bootstrap_statistics(p1, dx1, p2, dx2, grid, cfg.bootstrap);
    rep.quantile = bootstrap_quantile(rep.bootstrap, cfg.alpha);
    rep.p_value = p_value(rep.statistic, rep.bootstrap);
    rep.reject = rep.p_value <= cfg.alpha;

    std::size_t empty = 0;
    for (bool b : rep.no_overlap) empty += b ? 1 : 0;
    if (empty > 0)
        rep.warnings.push_back(std::to_string(empty) + " lag(s) shift every interval out of range; U_n = 0 there");
    if (rep.quantile.beyond_sample)
        rep.warnings.push_back("alpha too small for R: bootstrap quantile reported as +inf");
    if (grid.size() > 1) {
        double step = grid[1] - grid[0];
        for (std::size_t k = 2; k < grid.size(); ++k) step = std::max(step, grid[k] - grid[k - 1]);
        const double width = std::min(p1.min_width(), p2.min_width());
        if (step > width * (1.0 + 1e-9))
            rep.warnings.push_back("lag grid step exceeds the smallest sampling interval; grid may be too coarse");
    }
    return rep;
}

} // namespace hdmax
