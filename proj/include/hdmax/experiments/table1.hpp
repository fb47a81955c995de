#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "../io/json.hpp"
#include "../leadlag/test.hpp"
#include "../parallel.hpp"
#include "../stochastics/model.hpp"

namespace hdmax {

/// Sampling design of one block of the rejection-rate table.
struct Scenario {
    SchemeKind kind = SchemeKind::equidistant;
    double step = 1e-3;    // h for synchronous, base step for subsampled
    std::size_t m = 300;   // points per asset when subsampled

    static Scenario sync(double h) { return {SchemeKind::equidistant, h, 0}; }
    static Scenario nonsync(std::size_t m = 300, double base = 1e-3) { return {SchemeKind::subsample, base, m}; }

    std::string label() const {
        if (kind == SchemeKind::equidistant) {
            std::ostringstream s;
            s << "sync(h=" << step << ")";
            return s.str();
        }
        std::ostringstream s;
        s << "nonsync(m=" << m << ",base=" << step << ")";
        return s.str();
    }
};

struct ExperimentConfig {
    std::vector<Scenario> scenarios{Scenario::sync(1e-3), Scenario::sync(3e-3), Scenario::sync(6e-3),
                                    Scenario::nonsync()};
    std::vector<double> rhos{0.0, 0.25, 0.5, 0.75};
    double theta = 0.1;
    double T = 1.0;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double grid_radius = 0.3;
    std::vector<double> alphas{0.01, 0.05, 0.10};
    std::size_t n_mc = 1000;
    std::size_t R = 299;
    std::uint64_t seed = 20190501;
    unsigned threads = 0;

    void validate() const {
        if (scenarios.empty() || rhos.empty() || alphas.empty())
            throw ConfigError("experiment needs at least one scenario, rho and alpha");
        for (double r : rhos)
            if (!(std::fabs(r) < 1.0)) throw ConfigError("every rho must satisfy |rho| < 1");
        for (double a : alphas)
            if (!(a > 0.0 && a < 1.0)) throw ConfigError("every alpha must lie in (0, 1)");
        if (n_mc < 1 || R < 1) throw ConfigError("n_mc and R must be positive");
        if (!(T > 0.0) || !(grid_radius >= 0.0)) throw ConfigError("invalid horizon or grid radius");
    }
};

struct RejectionRow {
    std::string scenario;
    double step = 0.0;
    double alpha = 0.0;
    double rho = 0.0;
    std::size_t rejections = 0;
    std::size_t n_mc = 0;
    double rate = 0.0;
    double se = 0.0;  // sqrt(rate (1 - rate) / n_mc)
};

struct RejectionTable {
    std::vector<RejectionRow> rows;
    ExperimentConfig config;
    bool complete = true;
    std::string error;
};

/// Seed of dataset `rep` in cell (scenario, rho). Simulation, subsampling and
/// bootstrap draw from disjoint substreams below it.
inline Seed dataset_seed(std::uint64_t master, std::size_t scenario, std::size_t rho, std::size_t rep) {
    return {master, (static_cast<std::uint64_t>(scenario) << 48) | (static_cast<std::uint64_t>(rho) << 40) |
                        static_cast<std::uint64_t>(rep)};
}

/// Bootstrap p-value of one simulated dataset of the experiment.
inline double table1_p_value(const ExperimentConfig& cfg, const Scenario& sc, double rho, Seed seed) {
    LeadLagModel model;
    model.sigma1 = PiecewiseConstant(cfg.sigma1);
    model.sigma2 = PiecewiseConstant(cfg.sigma2);
    model.rho = rho;
    model.theta = cfg.theta;
    model.T = cfg.T;
    const SamplingScheme scheme = make_scheme({sc.kind, sc.step, sc.m}, cfg.T, seed);
    const PathPair path = simulate_leadlag(model, scheme, seed);
    const LagGrid grid = LagGrid::symmetric(sc.step, cfg.grid_radius);
    const IntervalPartition p1(path.scheme.times1);
    const IntervalPartition p2(path.scheme.times2);
    const auto dx1 = increments(path.x1);
    const auto dx2 = increments(path.x2);
    BootstrapConfig bc;
    bc.R = cfg.R;
    bc.seed = seed;
    bc.threads = 1;
    const auto u = contrast(p1, dx1, p2, dx2, grid, bc.endpoint_tol);
    const double T = test_statistic(u.values);
    const auto tstar = bootstrap_statistics(p1, dx1, p2, dx2, grid, bc);
    return p_value(T, tstar);
}

using Table1Progress = std::function<void(const std::string& scenario, double rho, std::size_t done_cells,
                                          std::size_t total_cells)>;

/// Rejection rates 1{p <= alpha} over n_mc simulated datasets for every
/// (scenario, rho, alpha). A failing cell stops the run; rows finished so far
/// are returned with complete = false.
inline RejectionTable run_table1(const ExperimentConfig& cfg, const Table1Progress& progress = {}) {
    cfg.validate();
    RejectionTable table;
    table.config = cfg;
    const std::size_t total = cfg.scenarios.size() * cfg.rhos.size();
    std::size_t done = 0;
    for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
        const Scenario& sc = cfg.scenarios[s];
        for (std::size_t ri = 0; ri < cfg.rhos.size(); ++ri) {
            const double rho = cfg.rhos[ri];
            std::vector<double> pvals(cfg.n_mc);
            try {
                parallel_for(cfg.n_mc, cfg.threads, [&](std::size_t m) {
                    pvals[m] = table1_p_value(cfg, sc, rho, dataset_seed(cfg.seed, s, ri, m));
                });
            } catch (const std::exception& e) {
                table.complete = false;
                table.error = sc.label() + ", rho=" + std::to_string(rho) + ": " + e.what();
                return table;
            }
            for (double a : cfg.alphas) {
                RejectionRow row;
                row.scenario = sc.label();
                row.step = sc.step;
                row.alpha = a;
                row.rho = rho;
                row.n_mc = cfg.n_mc;
                for (double p : pvals) row.rejections += p <= a ? 1 : 0;
                row.rate = static_cast<double>(row.rejections) / static_cast<double>(cfg.n_mc);
                row.se = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(cfg.n_mc));
                table.rows.push_back(row);
            }
            ++done;
            if (progress) progress(sc.label(), rho, done, total);
        }
    }
    return table;
}

namespace io {

inline Json to_json(const Scenario& sc) {
    if (sc.kind == SchemeKind::equidistant) return Json{{"kind", "sync"}, {"h", sc.step}};
    return Json{{"kind", "nonsync"}, {"m", sc.m}, {"base_step", sc.step}};
}

inline Json to_json(const ExperimentConfig& c) {
    Json sc = Json::array();
    for (const auto& s : c.scenarios) sc.push_back(to_json(s));
    return Json{{"schema_version", kSchemaVersion},
                {"scenarios", sc},
                {"rhos", c.rhos},
                {"theta", c.theta},
                {"T", c.T},
                {"sigma1", c.sigma1},
                {"sigma2", c.sigma2},
                {"grid_radius", c.grid_radius},
                {"alphas", c.alphas},
                {"n_mc", c.n_mc},
                {"R", c.R},
                {"seed", c.seed}};
}

/// Versioned experiment configuration; absent keys keep their defaults.
inline ExperimentConfig experiment_config_from_json(const Json& j) {
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
        throw ConfigError("unsupported experiment schema_version " + std::to_string(version));
    ExperimentConfig c;
    try {
        if (j.contains("scenarios")) {
            c.scenarios.clear();
            for (const auto& s : j.at("scenarios")) {
                const auto kind = s.at("kind").get<std::string>();
                if (kind == "sync")
                    c.scenarios.push_back(Scenario::sync(s.at("h").get<double>()));
                else if (kind == "nonsync")
                    c.scenarios.push_back(
                        Scenario::nonsync(s.value("m", std::size_t{300}), s.value("base_step", 1e-3)));
                else
                    throw ConfigError("unknown scenario kind '" + kind + "'");
            }
        }
        if (j.contains("rhos")) c.rhos = j.at("rhos").get<std::vector<double>>();
        if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
        c.theta = j.value("theta", c.theta);
        c.T = j.value("T", c.T);
        c.sigma1 = j.value("sigma1", c.sigma1);
        c.sigma2 = j.value("sigma2", c.sigma2);
        c.grid_radius = j.value("grid_radius", c.grid_radius);
        c.n_mc = j.value("n_mc", c.n_mc);
        c.R = j.value("R", c.R);
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

inline Json to_json(const RejectionTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"scenario", r.scenario},
                        {"step", r.step},
                        {"alpha", r.alpha},
                        {"rho", r.rho},
                        {"rejections", r.rejections},
                        {"n_mc", r.n_mc},
                        {"rate", r.rate},
                        {"se", r.se}});
    return Json{{"schema_version", kSchemaVersion},
                {"kind", "table1"},
                {"complete", t.complete},
                {"error", t.error.empty() ? Json(nullptr) : Json(t.error)},
                {"config", to_json(t.config)},
                {"rows", rows}};
}

inline void write_table_csv(std::ostream& out, const RejectionTable& t) {
    out << std::setprecision(17) << "scenario,step,alpha,rho,rejections,n_mc,rate,se,R,seed\n";
    for (const auto& r : t.rows)
        out << '"' << r.scenario << "\"," << r.step << ',' << r.alpha << ',' << r.rho << ',' << r.rejections << ','
            << r.n_mc << ',' << r.rate << ',' << r.se << ',' << t.config.R << ',' << t.config.seed << '\n';
}

} // namespace io
} // namespace hdmax
