#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "../leadlag/test.hpp"
#include "../qform/monte_carlo.hpp"
#include "../qform/quadratic_form.hpp"
#include "../spotvol/band.hpp"
#include "../stochastics/model.hpp"
#include "csv.hpp"

namespace hdmax::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// JSON has no infinity; +inf is written as null.
inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double number_or_inf(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline Json to_json(const Seed& s) { return Json{{"master", s.master}, {"stream", s.stream}}; }

inline Seed seed_from_json(const Json& j) {
    return {j.at("master").get<std::uint64_t>(), j.value("stream", std::uint64_t{0})};
}

inline Json to_json(const PiecewiseConstant& f) {
    Json knots = Json::array(), levels = Json::array();
    for (double k : f.knots()) knots.push_back(k);
    for (double v : f.levels()) levels.push_back(v);
    return Json{{"knots", knots}, {"levels", levels}};
}

inline Json to_json(const LeadLagModel& m) {
    return Json{{"x0_1", m.x0_1}, {"x0_2", m.x0_2}, {"sigma1", to_json(m.sigma1)}, {"sigma2", to_json(m.sigma2)},
                {"rho", m.rho},   {"theta", m.theta}, {"T", m.T}};
}

/// Sidecar metadata describing a simulated or ingested path pair.
inline Json scheme_metadata(const PathPair& p) {
    Json j{{"schema_version", kSchemaVersion},
           {"kind", "path-pair"},
           {"scheme", to_string(p.scheme.label.kind)},
           {"T", p.scheme.T},
           {"n_obs_1", p.scheme.times1.size()},
           {"n_obs_2", p.scheme.times2.size()}};
    if (p.scheme.label.kind == SchemeKind::equidistant) j["h"] = p.scheme.label.step;
    if (p.scheme.label.kind == SchemeKind::subsample) {
        j["m"] = p.scheme.label.m;
        j["base_step"] = p.scheme.label.step;
    }
    j["seed"] = p.seed ? to_json(*p.seed) : Json(nullptr);
    return j;
}

inline Json to_json(const TestReport& r) {
    Json contrast = Json::array();
    for (std::size_t k = 0; k < r.thetas.size(); ++k)
        contrast.push_back({{"theta", r.thetas[k]}, {"value", r.contrast[k]}, {"no_overlap", bool(r.no_overlap[k])}});
    return Json{
        {"schema_version", kSchemaVersion},
        {"kind", "leadlag-test"},
        {"statistic", r.statistic},
        {"scaled_by_sqrt_n", r.scaled},
        {"n", r.n},
        {"alpha", r.alpha},
        {"quantile", finite_or_null(r.quantile.value)},
        {"quantile_rank", r.quantile.rank},
        {"quantile_beyond_sample", r.quantile.beyond_sample},
        {"quantile_convention", kQuantileConvention},
        {"p_value", r.p_value},
        {"reject", r.reject},
        {"argmax_lag", r.argmax_lag},
        {"n_intervals_1", r.n1},
        {"n_intervals_2", r.n2},
        {"config",
         {{"R", r.config.R},
          {"multiplier", to_string(r.config.multiplier)},
          {"seed", to_json(r.config.seed)},
          {"endpoint_tol", r.config.endpoint_tol}}},
        {"warnings", r.warnings},
        {"contrast", contrast},
        {"bootstrap_statistics", r.bootstrap},
    };
}

inline TestReport test_report_from_json(const Json& j) {
    TestReport r;
    for (const auto& row : j.at("contrast")) {
        r.thetas.push_back(row.at("theta").get<double>());
        r.contrast.push_back(row.at("value").get<double>());
        r.no_overlap.push_back(row.value("no_overlap", false));
    }
    r.statistic = j.value("statistic", 0.0);
    r.p_value = j.value("p_value", 1.0);
    r.alpha = j.value("alpha", 0.05);
    if (j.contains("bootstrap_statistics")) r.bootstrap = j.at("bootstrap_statistics").get<std::vector<double>>();
    return r;
}

inline Json to_json(const BandResult& b, const SpotVolConfig& cfg) {
    Json rows = Json::array();
    for (std::size_t k = 0; k < b.times.size(); ++k)
        rows.push_back({{"t", b.times[k]},
                        {"sigma2_hat", b.sigma2_hat[k]},
                        {"s_n", b.s_n[k]},
                        {"lower", b.lower[k]},
                        {"upper", finite_or_null(b.upper[k])},
                        {"valid", bool(b.valid[k])}});
    Json c{{"h", cfg.h},           {"kernel", cfg.kernel.name()}, {"a_n", cfg.a_n}, {"delta", cfg.step()},
           {"alpha", cfg.alpha},   {"R", cfg.R},                  {"seed", to_json(cfg.seed)}};
    if (cfg.gamma) c["gamma"] = *cfg.gamma;
    return Json{{"schema_version", kSchemaVersion},
                {"kind", "spot-band"},
                {"quantile", finite_or_null(b.quantile.value)},
                {"quantile_rank", b.quantile.rank},
                {"quantile_convention", kQuantileConvention},
                {"config", c},
                {"warnings", b.warnings},
                {"band", rows}};
}

inline BandResult band_from_json(const Json& j) {
    BandResult b;
    for (const auto& row : j.at("band")) {
        b.times.push_back(row.at("t").get<double>());
        b.sigma2_hat.push_back(row.at("sigma2_hat").get<double>());
        b.s_n.push_back(row.at("s_n").get<double>());
        b.lower.push_back(row.at("lower").get<double>());
        b.upper.push_back(number_or_inf(row.at("upper")));
        b.valid.push_back(row.at("valid").get<bool>());
    }
    b.quantile.value = number_or_inf(j.at("quantile"));
    return b;
}

inline Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw DataError("matrix must be a nonempty array of rows");
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.front().size()));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j.front().size()) throw DataError("matrix has ragged rows");
        for (std::size_t c = 0; c < j[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
    return m;
}

inline Json to_json(const DiagnosticsReport& d) {
    Json infl = Json::array();
    for (Eigen::Index i = 0; i < d.influence.size(); ++i) infl.push_back(d.influence(i));
    return Json{{"variance", d.variance},
                {"covariance", to_json(d.covariance)},
                {"fourth_cumulant", d.fourth_cumulant},
                {"spectral_norm", d.spectral_norm},
                {"fourth_cumulant_bound", d.cumulant_bound},
                {"influence", infl},
                {"criterion", d.criterion ? Json(*d.criterion) : Json(nullptr)}};
}

/// Plot-ready CSV of a report: (theta, contrast) for lead-lag tests,
/// (t, band...) for spot-volatility bands.
inline void emit_plotdata(std::ostream& out, const Json& report) {
    const auto kind = report.value("kind", std::string{});
    if (kind == "leadlag-test")
        write_contrast_csv(out, test_report_from_json(report));
    else if (kind == "spot-band")
        write_band_csv(out, band_from_json(report));
    else
        throw DataError("plotdata: unknown report kind '" + kind + "'");
}

} // namespace hdmax::io
