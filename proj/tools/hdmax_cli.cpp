// Batch command-line front end: simulation, lead-lag test, spot-volatility
// bands, quadratic-form diagnostics and the rejection-rate experiment.

#include <CLI11.hpp>

#include <hdmax/hdmax.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace {

using hdmax::io::Json;

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out;

    unsigned resolved_threads() const { return threads ? threads : hdmax::default_threads(); }
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Writes via `fn` to --out, or stdout when --out is empty.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        std::cout << std::setprecision(17);
        fn(std::cout);
        return;
    }
    auto f = hdmax::io::open_out(path);
    fn(f);
    if (!f) throw hdmax::DataError("failed writing '" + path + "'");
}

void write_json(const std::string& path, const Json& j) {
    with_output(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

// CSV outputs carry their configuration and seeds in a `<out>.json` sidecar.
void write_sidecar(const std::string& out, const Json& j) {
    if (out.empty() || out == "-") {
        std::cerr << j.dump(2) << '\n';
        return;
    }
    write_json(out + ".json", j);
}

Json read_json_file(const std::string& path, bool config) {
    auto f = hdmax::io::open_in(path);
    try {
        return Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        const std::string msg = "'" + path + "': " + e.what();
        if (config) throw hdmax::ConfigError(msg);
        throw hdmax::DataError(msg);
    }
}

std::string dirname_of(const std::string& path) {
    const auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string{} : path.substr(0, pos + 1);
}

// Inline nested array or path of a dense CSV, relative to the spec file.
hdmax::Matrix matrix_arg(const Json& j, const std::string& base) {
    if (j.is_string()) {
        std::string p = j.get<std::string>();
        if (!p.empty() && p.front() != '/') p = base + p;
        return hdmax::io::read_matrix_file(p);
    }
    try {
        return hdmax::io::matrix_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw hdmax::ConfigError(std::string("matrix in spec: ") + e.what());
    }
}

void warn(const std::vector<std::string>& ws) {
    for (const auto& w : ws) std::cerr << "warning: " << w << '\n';
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string kind = "leadlag";
    double T = 1.0, theta = 0.1, rho = 0.0, sigma1 = 1.0, sigma2 = 1.0, x01 = 0.0, x02 = 0.0;
    std::string scheme = "sync";
    double h = 1e-3, base_step = 1e-3;
    std::size_t m = 300, n = 1000;
};

void add_simulate(CLI::App& app, Globals& g) {
    auto a = std::make_shared<SimulateArgs>();
    auto* sub = app.add_subcommand("simulate", "Simulate a lead-lag path pair or a single diffusion");
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--kind", a->kind, "leadlag or diffusion")->check(CLI::IsMember({"leadlag", "diffusion"}));
    sub->add_option("--T", a->T, "Horizon");
    sub->add_option("--theta", a->theta, "Lag of asset 2");
    sub->add_option("--rho", a->rho, "Correlation of the driving motions");
    sub->add_option("--sigma1", a->sigma1, "Volatility of asset 1 (or of the diffusion)");
    sub->add_option("--sigma2", a->sigma2, "Volatility of asset 2");
    sub->add_option("--x0-1", a->x01, "Initial value of asset 1");
    sub->add_option("--x0-2", a->x02, "Initial value of asset 2");
    sub->add_option("--scheme", a->scheme, "sync or nonsync")->check(CLI::IsMember({"sync", "nonsync"}));
    sub->add_option("--h", a->h, "Step of the synchronous grid");
    sub->add_option("--m", a->m, "Points per asset for the nonsync scheme");
    sub->add_option("--base-step", a->base_step, "Base grid step for the nonsync scheme");
    sub->add_option("--n", a->n, "Number of increments for --kind diffusion");
    sub->callback([a, &g] {
        const hdmax::Seed seed{g.seed, 0};
        if (a->kind == "diffusion") {
            const auto s = hdmax::simulate_diffusion(hdmax::PiecewiseConstant(a->sigma1), a->n, a->T, seed, a->x01);
            with_output(g.out, [&](std::ostream& o) {
                o << std::setprecision(17) << "time,value\n";
                for (std::size_t i = 0; i < s.times.size(); ++i) o << s.times[i] << ',' << s.values[i] << '\n';
            });
            write_sidecar(g.out, {{"schema_version", hdmax::io::kSchemaVersion},
                                  {"kind", "diffusion"},
                                  {"sigma", a->sigma1},
                                  {"n", a->n},
                                  {"T", a->T},
                                  {"x0", a->x01},
                                  {"seed", hdmax::io::to_json(seed)}});
            return;
        }
        hdmax::LeadLagModel model;
        model.x0_1 = a->x01;
        model.x0_2 = a->x02;
        model.sigma1 = hdmax::PiecewiseConstant(a->sigma1);
        model.sigma2 = hdmax::PiecewiseConstant(a->sigma2);
        model.rho = a->rho;
        model.theta = a->theta;
        model.T = a->T;
        hdmax::SchemeParams sp;
        if (a->scheme == "sync") {
            sp.kind = hdmax::SchemeKind::equidistant;
            sp.step = a->h;
        } else {
            sp.kind = hdmax::SchemeKind::subsample;
            sp.step = a->base_step;
            sp.m = a->m;
        }
        const auto scheme = hdmax::make_scheme(sp, a->T, seed);
        const auto path = hdmax::simulate_leadlag(model, scheme, seed);
        with_output(g.out, [&](std::ostream& o) { hdmax::io::write_path_pair(o, path); });
        write_sidecar(g.out, {{"schema_version", hdmax::io::kSchemaVersion},
                              {"kind", "leadlag-path"},
                              {"model", hdmax::io::to_json(model)},
                              {"scheme", hdmax::io::scheme_metadata(path)}});
    });
}

// ---------------------------------------------------------------- llag-test

struct LlagArgs {
    std::string data;
    double grid_step = 0.0, grid_radius = 0.0, alpha = 0.05, n = 1.0, T = 0.0;
    std::size_t R = 999;
    std::string multiplier = "rademacher";
    bool scale = false;
};

void add_llag(CLI::App& app, Globals& g) {
    auto a = std::make_shared<LlagArgs>();
    auto* sub = app.add_subcommand("llag-test", "Bootstrap test for the absence of a lead-lag effect");
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--data", a->data, "Tick CSV with columns asset,time,price")->required();
    sub->add_option("--grid-step", a->grid_step, "Lag grid step")->required();
    sub->add_option("--grid-radius", a->grid_radius, "Lag grid radius")->required();
    sub->add_option("--alpha", a->alpha, "Significance level");
    sub->add_option("--R", a->R, "Bootstrap replications");
    sub->add_option("--multiplier", a->multiplier, "rademacher, gaussian or unit");
    sub->add_option("--n", a->n, "Scaling parameter n used with --scale");
    sub->add_flag("--scale", a->scale, "Multiply the statistics by sqrt(n)");
    sub->add_option("--T", a->T, "Horizon (default: last observation time)");
    sub->callback([a, &g] {
        auto in = hdmax::io::open_in(a->data);
        const auto path = hdmax::io::read_path_pair(in, a->T);
        hdmax::LeadLagTestConfig cfg;
        cfg.alpha = a->alpha;
        if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw hdmax::ConfigError("alpha must lie in (0, 1)");
        cfg.bootstrap.R = a->R;
        cfg.bootstrap.multiplier = hdmax::parse_multiplier(a->multiplier);
        cfg.bootstrap.seed = {g.seed, 0};
        cfg.bootstrap.scale_by_sqrt_n = a->scale;
        cfg.bootstrap.n = a->n;
        cfg.bootstrap.threads = g.resolved_threads();
        const auto grid = hdmax::LagGrid::symmetric(a->grid_step, a->grid_radius);
        const auto report = hdmax::run_leadlag_test(path, grid, cfg);
        warn(report.warnings);
        Json j = hdmax::io::to_json(report);
        j["data"] = a->data;
        if (ends_with(g.out, ".csv")) {
            with_output(g.out, [&](std::ostream& o) { hdmax::io::write_contrast_csv(o, report); });
            write_sidecar(g.out, j);
        } else {
            write_json(g.out, j);
        }
    });
}

// ---------------------------------------------------------------- spotvol

struct SpotArgs {
    std::string data;
    double h = 0.05, an = 0.1, alpha = 0.05, delta = 0.0;
    std::string kernel = "epanechnikov";
    std::size_t R = 10000;
    int asset = 1;
    std::optional<double> gamma;
};

void add_spotvol(CLI::App& app, Globals& g) {
    auto a = std::make_shared<SpotArgs>();
    auto* sub = app.add_subcommand("spotvol", "Uniform confidence band for the spot variance");
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--data", a->data, "CSV with time,value (or asset,time,value)")->required();
    sub->add_option("--asset", a->asset, "Asset to use when the CSV has an asset column");
    sub->add_option("--h", a->h, "Bandwidth");
    sub->add_option("--kernel", a->kernel, "epanechnikov, triangular or quartic");
    sub->add_option("--an", a->an, "Boundary trim a_n");
    sub->add_option("--alpha", a->alpha, "Significance level");
    sub->add_option("--R", a->R, "Monte Carlo draws for the sup quantile");
    sub->add_option("--delta", a->delta, "Evaluation grid step (default h/20)");
    sub->add_option("--gamma", a->gamma, "Hoelder exponent for undersmoothing diagnostics");
    sub->callback([a, &g] {
        auto in = hdmax::io::open_in(a->data);
        const auto series = hdmax::io::read_series(in, a->asset);
        hdmax::SpotVolConfig cfg;
        cfg.h = a->h;
        cfg.kernel = hdmax::Kernel::parse(a->kernel);
        cfg.a_n = a->an;
        cfg.alpha = a->alpha;
        cfg.R = a->R;
        cfg.delta = a->delta;
        cfg.seed = {g.seed, 0};
        cfg.threads = g.resolved_threads();
        cfg.gamma = a->gamma;
        const auto band = hdmax::uniform_band(series, cfg);
        warn(band.warnings);
        Json j = hdmax::io::to_json(band, cfg);
        j["data"] = a->data;
        if (ends_with(g.out, ".json")) {
            write_json(g.out, j);
        } else {
            with_output(g.out, [&](std::ostream& o) { hdmax::io::write_band_csv(o, band); });
            j.erase("band");
            write_sidecar(g.out, j);
        }
    });
}

// ---------------------------------------------------------------- qform

struct QformArgs {
    std::string spec, cov, y_law = "rademacher";
    std::size_t mc = 0, r1_mc = 0;
};

hdmax::QuadFormSpec load_qform_spec(const std::string& path) {
    const Json j = read_json_file(path, true);
    const std::string base = dirname_of(path);
    if (j.value("schema_version", hdmax::io::kSchemaVersion) != hdmax::io::kSchemaVersion)
        throw hdmax::ConfigError("unsupported qform spec schema_version");
    if (j.contains("gammas")) {
        std::vector<hdmax::Matrix> g;
        for (const auto& m : j.at("gammas")) g.push_back(matrix_arg(m, base));
        return hdmax::QuadFormSpec::from_gammas(g);
    }
    if (j.contains("sigma") && j.contains("a")) {
        std::vector<hdmax::Matrix> a;
        for (const auto& m : j.at("a")) a.push_back(matrix_arg(m, base));
        return hdmax::QuadFormSpec::from_covariance(matrix_arg(j.at("sigma"), base), a);
    }
    throw hdmax::ConfigError("qform spec needs either \"gammas\" or \"sigma\" and \"a\"");
}

void add_qform(CLI::App& app, Globals& g) {
    auto a = std::make_shared<QformArgs>();
    auto* sub = app.add_subcommand("qform", "Cumulant and influence diagnostics of Gaussian quadratic forms");
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--spec", a->spec, "JSON spec: {\"gammas\": [...]} or {\"sigma\": ..., \"a\": [...]}")
        ->required();
    sub->add_option("--cov", a->cov, "Dense CSV covariance of the Gaussian comparison vector");
    sub->add_option("--mc", a->mc, "Monte Carlo draws for the Kolmogorov distance of the maxima (0 = skip)");
    sub->add_option("--r1-mc", a->r1_mc, "Monte Carlo draws for the Lindeberg remainder (0 = skip)");
    sub->add_option("--y-law", a->y_law, "Law of Y for the Lindeberg remainder: rademacher or gaussian");
    sub->callback([a, &g] {
        const auto spec = load_qform_spec(a->spec);
        const hdmax::Seed seed{g.seed, 0};
        const auto diag = hdmax::diagnose(spec);
        const hdmax::Matrix cov_z = a->cov.empty() ? diag.covariance : hdmax::io::read_matrix_file(a->cov);
        Json j{{"schema_version", hdmax::io::kSchemaVersion},
               {"kind", "qform"},
               {"spec", a->spec},
               {"d", spec.d()},
               {"N", spec.N()},
               {"seed", hdmax::io::to_json(seed)},
               {"diagnostics", hdmax::io::to_json(diag)}};
        const auto rem = hdmax::approximation_remainders(spec, cov_z);
        j["cov_z"] = a->cov.empty() ? Json("exact") : Json(a->cov);
        j["remainders"] = {{"r2", rem.r2}, {"r3", rem.r3}};
        if (a->mc > 0) {
            const auto k = hdmax::mc_max_kolmogorov(spec, cov_z, a->mc, seed, g.resolved_threads());
            j["kolmogorov"] = {{"max", k.max_distance}, {"abs_max", k.abs_max_distance}, {"n_mc", k.n_mc}};
        }
        if (a->r1_mc > 0) {
            const auto r1 = hdmax::r1_estimate(spec, hdmax::parse_multiplier(a->y_law), a->r1_mc, seed);
            j["r1_estimate"] = {{"value", r1.value},
                                {"standard_error", r1.standard_error},
                                {"n_mc", r1.n_mc},
                                {"y_law", a->y_law}};
        }
        write_json(g.out, j);
    });
}

// ---------------------------------------------------------------- table1

struct Table1Args {
    std::string config;
    std::optional<std::size_t> n_mc, R;
};

void add_table1(CLI::App& app, Globals& g, int& status) {
    auto a = std::make_shared<Table1Args>();
    auto* sub = app.add_subcommand("table1", "Rejection rates of the lead-lag test over simulated datasets");
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--config", a->config, "Experiment JSON (defaults to the standard design)");
    sub->add_option("--n-mc", a->n_mc, "Override the number of datasets per cell");
    sub->add_option("--R", a->R, "Override the bootstrap replications");
    sub->callback([a, &g, &status] {
        hdmax::ExperimentConfig cfg;
        if (!a->config.empty()) cfg = hdmax::io::experiment_config_from_json(read_json_file(a->config, true));
        if (a->n_mc) cfg.n_mc = *a->n_mc;
        if (a->R) cfg.R = *a->R;
        cfg.seed = g.seed;
        cfg.threads = g.resolved_threads();
        const auto table = hdmax::run_table1(cfg, [](const std::string& sc, double rho, std::size_t done,
                                                     std::size_t total) {
            std::cerr << "[" << done << "/" << total << "] " << sc << " rho=" << rho << '\n';
        });
        const Json j = hdmax::io::to_json(table);
        if (ends_with(g.out, ".json")) {
            write_json(g.out, j);
        } else {
            with_output(g.out, [&](std::ostream& o) { hdmax::io::write_table_csv(o, table); });
            write_sidecar(g.out, j);
        }
        if (!table.complete) {
            std::cerr << "error: experiment aborted: " << table.error << '\n';
            status = 2;
        }
    });
}

// ---------------------------------------------------------------- plotdata

void add_plotdata(CLI::App& app, Globals& g) {
    auto report = std::make_shared<std::string>();
    auto* sub = app.add_subcommand("plotdata", "Plot-ready CSV from an llag-test or spotvol JSON report");
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--report", *report, "Report JSON")->required();
    sub->callback([report, &g] {
        const Json j = read_json_file(*report, false);
        with_output(g.out, [&](std::ostream& o) {
            try {
                hdmax::io::emit_plotdata(o, j);
            } catch (const nlohmann::json::exception& e) {
                throw hdmax::DataError(std::string("report: ") + e.what());
            }
        });
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hdmax: lead-lag testing, spot-volatility bands and quadratic-form diagnostics"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    int status = 0;
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");
    app.add_option("--out", g.out, "Output file (default stdout)");
    add_simulate(app, g);
    add_llag(app, g);
    add_spotvol(app, g);
    add_qform(app, g);
    add_table1(app, g, status);
    add_plotdata(app, g);
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    } catch (const hdmax::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 3;
    } catch (const hdmax::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return status;
}
