// Acceptance suite: one PASS/FAIL line per criterion, details indented.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <hdmax/hdmax.hpp>

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace hdmax;

namespace {

int g_failures = 0;

void detail_line(const std::string& s) { std::cout << "    " << s << '\n'; }

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void verdict(int id, bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << what << std::endl;
    if (!ok) ++g_failures;
}

// Full default Table 1 run, shared by criteria 1 and 2.
const RejectionTable& table1() {
    static const RejectionTable t = [] {
        ExperimentConfig cfg;  // n_mc = 1000, R = 299, seed 20190501
        const auto start = std::chrono::steady_clock::now();
        auto table = run_table1(cfg, [&](const std::string& sc, double rho, std::size_t done, std::size_t total) {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::cerr << "  table1 " << done << '/' << total << ' ' << sc << " rho=" << rho << " (" << secs
                      << " s)\n";
        });
        std::cout << "  Table 1 (n_mc=" << cfg.n_mc << ", R=" << cfg.R << ", seed=" << cfg.seed << ")\n";
        std::stringstream csv;
        io::write_table_csv(csv, table);
        for (std::string line; std::getline(csv, line);) detail_line(line);
        return table;
    }();
    return t;
}

const RejectionRow* find_row(const RejectionTable& t, const Scenario& sc, double rho, double alpha) {
    for (const auto& r : t.rows)
        if (r.scenario == sc.label() && r.rho == rho && r.alpha == alpha) return &r;
    return nullptr;
}

bool check_rate(const RejectionTable& t, const Scenario& sc, double rho, double alpha, double lo, double hi,
                const char* label) {
    const auto* r = find_row(t, sc, rho, alpha);
    const bool ok = r && r->rate >= lo && r->rate <= hi;
    detail_line(fmt("%-4s %-22s rho=%.2f alpha=%.2f rate=%.3f  accept [%.3f, %.3f]", ok ? "ok" : "BAD", label, rho,
                    alpha, r ? r->rate : NAN, lo, hi));
    return ok;
}

void criterion1() {
    const auto& t = table1();
    bool ok = t.complete;
    if (!t.complete) detail_line("table incomplete: " + t.error);
    for (double h : {1e-3, 3e-3, 6e-3})
        for (double a : {0.01, 0.05, 0.10}) {
            const double se = std::sqrt(a * (1 - a) / 1000.0);
            ok &= check_rate(t, Scenario::sync(h), 0.0, a, a - 3 * se, a + 3 * se,
                             fmt("size sync h=%g", h).c_str());
        }
    ok &= check_rate(t, Scenario::sync(3e-3), 0.0, 0.05, 0.03, 0.07, "example sync h=0.003");
    ok &= check_rate(t, Scenario::nonsync(), 0.5, 0.10, 0.87, 0.96, "example nonsync");
    verdict(1, ok, "size at rho=0 within alpha +- 3 binomial SE (n_mc=1000, R=299)");
}

void criterion2() {
    const auto& t = table1();
    bool ok = t.complete;
    for (const auto& sc : ExperimentConfig{}.scenarios)
        for (double a : {0.01, 0.05, 0.10})
            ok &= check_rate(t, sc, 0.75, a, 0.99, 1.0, sc.label().c_str());
    ok &= check_rate(t, Scenario::sync(6e-3), 0.5, 0.05, 0.74, 0.86, "sync h=0.006");
    verdict(2, ok, "power: rho=0.75 >= 0.99 everywhere; rho=0.5, h=0.006, alpha=0.05 in [0.74, 0.86]");
}

// 20 random symmetric pairs (Gamma_a, Gamma_b) with N <= 6, shared by criteria 3 and 4.
struct QfInstance {
    Matrix a, b;
};

std::vector<QfInstance> qf_instances() {
    std::mt19937_64 eng(314159);
    std::uniform_int_distribution<int> nd(1, 6);
    std::normal_distribution<double> g;
    std::vector<QfInstance> out;
    for (int k = 0; k < 20; ++k) {
        const int N = nd(eng);
        auto draw = [&] {
            Matrix m(N, N);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) m(i, j) = g(eng);
            return Matrix(0.5 * (m + m.transpose()));
        };
        QfInstance q{draw(), draw()};
        out.push_back(q);
    }
    return out;
}

struct QfMoments {
    double m2 = 0, m4 = 0, psi_sd = 0;  // psi = F^4 - 6 m2 F^2 (delta method for m4 - 3 m2^2)
    double cross = 0, cross_sd = 0;      // F_a F_b
};

QfMoments qf_moments(const QfInstance& q, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g;
    const Eigen::Index N = q.a.rows();
    const double tra = q.a.trace(), trb = q.b.trace();
    Vector xi(N);
    std::vector<double> fa(n), fb(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (Eigen::Index i = 0; i < N; ++i) xi(i) = g(eng);
        fa[s] = xi.dot(q.a * xi) - tra;
        fb[s] = xi.dot(q.b * xi) - trb;
    }
    QfMoments m;
    for (std::size_t s = 0; s < n; ++s) {
        const double f2 = fa[s] * fa[s];
        m.m2 += f2;
        m.m4 += f2 * f2;
        m.cross += fa[s] * fb[s];
    }
    const double nn = static_cast<double>(n);
    m.m2 /= nn;
    m.m4 /= nn;
    m.cross /= nn;
    std::vector<double> psi(n), prod(n);
    for (std::size_t s = 0; s < n; ++s) {
        const double f2 = fa[s] * fa[s];
        psi[s] = f2 * f2 - 6.0 * m.m2 * f2;
        prod[s] = fa[s] * fb[s];
    }
    m.psi_sd = std::sqrt(oracle::variance(psi));
    m.cross_sd = std::sqrt(oracle::variance(prod));
    return m;
}

const std::vector<std::pair<QfInstance, QfMoments>>& qf_runs() {
    static const auto runs = [] {
        std::vector<std::pair<QfInstance, QfMoments>> r;
        std::uint64_t seed = 1000;
        for (const auto& q : qf_instances()) r.emplace_back(q, qf_moments(q, 1'000'000, seed++));
        return r;
    }();
    return runs;
}

void criterion3() {
    bool ok = true;
    const double n = 1e6;
    int k = 0;
    for (const auto& [q, m] : qf_runs()) {
        const double exact = qf_fourth_cumulant(q.a);
        const double est = m.m4 - 3.0 * m.m2 * m.m2;
        const double se = m.psi_sd / std::sqrt(n);
        const double z = (est - exact) / se;
        const bool good = std::fabs(z) <= 4.0 && exact >= 0.0;
        ok &= good;
        detail_line(fmt("%-4s N=%d  48 tr G^4=%12.4f  MC=%12.4f  SE=%9.4f  z=%+.2f", good ? "ok" : "BAD",
                        static_cast<int>(q.a.rows()), exact, est, se, z));
        ++k;
    }
    verdict(3, ok, "fourth cumulant = 48 tr(Gamma^4) within 4 MC SE (20 instances, 1e6 draws); all >= 0");
}

void criterion4() {
    bool ok = true;
    const double n = 1e6;
    for (const auto& [q, m] : qf_runs()) {
        const double exact = qf_covariance(q.a, q.b);
        const double se = m.cross_sd / std::sqrt(n);
        const double z = (m.cross - exact) / se;
        const bool good = std::fabs(z) <= 4.0;
        ok &= good;
        detail_line(fmt("%-4s N=%d  2 tr(GaGb)=%10.4f  MC=%10.4f  SE=%8.4f  z=%+.2f", good ? "ok" : "BAD",
                        static_cast<int>(q.a.rows()), exact, m.cross, se, z));
    }
    verdict(4, ok, "E[F_a F_b] = 2 tr(Gamma_a Gamma_b) within 4 MC SE (same 20 instances)");
}

void criterion5() {
    std::mt19937_64 eng(55);
    std::uniform_int_distribution<std::size_t> nd(1, 40);
    std::uniform_int_distribution<std::size_t> gd(1, 21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    std::size_t mismatches = 0, lags = 0;
    for (int rep = 0; rep < 200; ++rep) {
        PathPair p;
        p.scheme.T = 1.0;
        if (rep % 2 == 0) {
            // coarse decimal clocks: many coinciding endpoints
            p.scheme.times1 = oracle::random_times(eng, nd(eng), 50, 0.02);
            p.scheme.times2 = oracle::random_times(eng, nd(eng), 50, 0.02);
        } else {
            for (auto* t : {&p.scheme.times1, &p.scheme.times2}) {
                std::set<double> s{0.0, 1.0};
                const std::size_t n = nd(eng);
                while (s.size() < n + 1) s.insert(u(eng));
                t->assign(s.begin(), s.end());
            }
        }
        for (auto [t, x] : {std::pair{&p.scheme.times1, &p.x1}, std::pair{&p.scheme.times2, &p.x2}}) {
            x->assign(t->size(), 0.0);
            for (std::size_t i = 1; i < t->size(); ++i) (*x)[i] = (*x)[i - 1] + g(eng);
        }
        std::vector<double> th;
        const std::size_t m = gd(eng);
        if (rep % 2 == 0) {
            for (std::size_t k = 0; k < m; ++k) th.push_back(0.02 * (static_cast<double>(k) - static_cast<double>(m / 2)));
        } else {
            std::set<double> s;
            while (s.size() < m) s.insert(u(eng) * 0.8 - 0.4);
            th.assign(s.begin(), s.end());
        }
        const LagGrid grid(th);
        const auto d1 = increments(p.x1), d2 = increments(p.x2);
        const auto res = contrast(p, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            ++lags;
            const double want =
                oracle::naive_contrast(p.scheme.times1, d1, p.scheme.times2, d2, grid[k], kDefaultEndpointTol);
            if (res.values[k] != want) ++mismatches;
        }
    }
    detail_line(fmt("200 instances, %zu lag evaluations, %zu bitwise mismatches", lags, mismatches));
    verdict(5, mismatches == 0, "sweep contrast bit-identical to naive double loop");
}

void criterion6() {
    const std::size_t n_data = 2000;
    const auto grid = LagGrid::symmetric(0.01, 0.3);
    std::vector<double> T(n_data), Tstar(n_data);
    parallel_for(n_data, default_threads(), [&](std::size_t r) {
        LeadLagModel m;
        m.rho = 0.0;
        m.theta = 0.1;
        const Seed s{606, r};
        const auto p = simulate_leadlag(m, make_equidistant_scheme(0.01, 1.0), s);
        BootstrapConfig bc;
        bc.R = 1;
        bc.seed = s;
        T[r] = test_statistic(contrast(p, grid).values);
        Tstar[r] = bootstrap_statistics(p, grid, bc)[0];
    });
    const double ks = ks_distance(T, Tstar);
    detail_line(fmt("null design sync h=0.01, grid 0.01 x [-0.3, 0.3], Rademacher; mean T=%.4f mean T*=%.4f",
                    oracle::mean(T), oracle::mean(Tstar)));
    detail_line(fmt("two-sample KS = %.4f over %zu datasets", ks, n_data));
    verdict(6, ks < 0.05, "KS(T, T*) < 0.05 under the null");
}

void criterion7() {
    const std::size_t n = 5000, n_data = 500;
    SpotVolConfig cfg;
    cfg.h = 0.05;
    cfg.a_n = 0.1;
    cfg.alpha = 0.05;
    cfg.R = 10000;
    cfg.seed = {707, 0};
    cfg.threads = default_threads();
    const auto draws = simulate_sup_gaussian_analog(n, cfg.h, cfg.kernel, cfg.a_n, 1.0, cfg.step(), cfg.R, cfg.seed,
                                                    cfg.threads);
    std::vector<char> covered(n_data);
    std::vector<std::size_t> invalid(n_data);
    double q = 0.0;
    parallel_for(n_data, default_threads(), [&](std::size_t r) {
        const auto path = simulate_diffusion(PiecewiseConstant(1.0), n, 1.0, {7070, r});
        const auto b = uniform_band(path, cfg, draws);
        bool in = true;
        for (std::size_t k = 0; k < b.times.size(); ++k) {
            in &= b.lower[k] <= 1.0 && 1.0 <= b.upper[k];
            invalid[r] += b.valid[k] ? 0 : 1;
        }
        covered[r] = in;
        if (r == 0) q = b.quantile.value;
    });
    std::size_t hits = 0, bad = 0;
    for (std::size_t r = 0; r < n_data; ++r) {
        hits += covered[r] ? 1 : 0;
        bad += invalid[r];
    }
    const double cov = static_cast<double>(hits) / static_cast<double>(n_data);
    detail_line(fmt("sup quantile q(0.95)=%.4f from R=%zu; invalid grid points over all datasets: %zu", q, cfg.R, bad));
    detail_line(fmt("uniform coverage %zu/%zu = %.3f  accept [0.90, 0.99]", hits, n_data, cov));
    verdict(7, cov >= 0.90 && cov <= 0.99, "spot-volatility band coverage (sigma = 1, n=5000, h=0.05, a_n=0.1)");
}

void criterion8() {
    const std::size_t n_mc = 200'000;
    const Seed seed{808, 0};
    double first = 0.0, last = 0.0;
    for (Eigen::Index N : {16, 64, 256, 1024}) {
        const Matrix g = Matrix::Identity(N, N) / std::sqrt(2.0 * static_cast<double>(N));
        const auto spec = QuadFormSpec::from_gammas({g, g});
        const auto est = mc_max_kolmogorov(spec, qf_covariance_matrix(spec), n_mc, seed, default_threads());
        detail_line(fmt("N=%4d  d=2  Kolmogorov(max)=%.4f  Kolmogorov(max abs)=%.4f", static_cast<int>(N),
                        est.max_distance, est.abs_max_distance));
        if (N == 16) first = est.max_distance;
        if (N == 1024) last = est.max_distance;
    }
    verdict(8, last < first, "Kolmogorov distance for Gamma = I/sqrt(2N) decreases from N=16 to N=1024");
}

void criterion9() {
    bool ok = true;
    auto record = [&](bool good, const std::string& what) {
        ok &= good;
        detail_line(std::string(good ? "ok   " : "BAD  ") + what);
    };

    // scale equivariance of T and T*, p-value invariance
    LeadLagModel m;
    m.rho = 0.3;
    m.theta = 0.1;
    const auto p = simulate_leadlag(m, make_equidistant_scheme(0.01, 1.0), {909, 0});
    const auto grid = LagGrid::symmetric(0.01, 0.3);
    LeadLagTestConfig cfg;
    cfg.bootstrap.R = 299;
    cfg.bootstrap.seed = {909, 1};
    const auto base = run_leadlag_test(p, grid, cfg);
    for (double c : {2.0, -0.5, 8.0, -3.7, 1e-3}) {
        auto q = p;
        for (double& x : q.x1) x *= c;
        const auto r = run_leadlag_test(q, grid, cfg);
        const bool exact = std::fabs(std::log2(std::fabs(c))) == std::round(std::fabs(std::log2(std::fabs(c))));
        const double tol = exact ? 0.0 : 1e-12;
        bool t_ok = std::fabs(r.statistic - std::fabs(c) * base.statistic) <= tol * r.statistic;
        bool ts_ok = true;
        for (std::size_t k = 0; k < r.bootstrap.size(); ++k)
            ts_ok &= std::fabs(r.bootstrap[k] - std::fabs(c) * base.bootstrap[k]) <= tol * r.bootstrap[k];
        record(t_ok && ts_ok, fmt("x1 -> %g x1: T and all T* scale by |c| (%s)", c, exact ? "bitwise" : "rel 1e-12"));
        record(r.p_value == base.p_value, fmt("x1 -> %g x1: p-value unchanged (%.4f)", c, r.p_value));
    }

    // orthogonal invariance of the fourth cumulant; influence indices move
    std::mt19937_64 eng(9090);
    std::normal_distribution<double> g;
    bool kappa_ok = true, infl_moves = false;
    for (int k = 0; k < 20; ++k) {
        const int N = 2 + k % 7;
        Matrix a(N, N), z(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                a(i, j) = g(eng);
                z(i, j) = g(eng);
            }
        const Matrix gam = 0.5 * (a + a.transpose());
        const Matrix Q = Eigen::HouseholderQR<Matrix>(z).householderQ();
        const Matrix rot = Q.transpose() * gam * Q;
        const double k0 = qf_fourth_cumulant(gam), k1 = qf_fourth_cumulant(rot);
        kappa_ok &= std::fabs(k0 - k1) <= 1e-10 * k0;
        kappa_ok &= std::fabs(qf_variance(gam) - qf_variance(rot)) <= 1e-10 * qf_variance(gam);
        infl_moves |= std::fabs(influence(gam, 0) - influence(rot, 0)) > 1e-6;
    }
    record(kappa_ok, "Gamma -> Q^T Gamma Q: fourth cumulant and variance unchanged (rel 1e-10, 20 instances)");
    record(infl_moves, "Gamma -> Q^T Gamma Q: influence indices do change");

    // band nesting in alpha with shared draws
    const auto path = simulate_diffusion(PiecewiseConstant(1.0), 5000, 1.0, {9091, 0});
    SpotVolConfig sc;
    sc.R = 2000;
    sc.seed = {9092, 0};
    const auto draws = simulate_sup_gaussian_analog(5000, sc.h, sc.kernel, sc.a_n, 1.0, sc.step(), sc.R, sc.seed);
    bool nest = true;
    BandResult prev;
    for (double alpha : {0.10, 0.05, 0.01}) {
        sc.alpha = alpha;
        auto b = uniform_band(path, sc, draws);
        if (!prev.times.empty()) {
            nest &= b.quantile.value >= prev.quantile.value;
            for (std::size_t k = 0; k < b.times.size(); ++k)
                nest &= b.lower[k] <= prev.lower[k] && b.upper[k] >= prev.upper[k];
        }
        prev = std::move(b);
    }
    record(nest, "bands for alpha = 0.10, 0.05, 0.01 nest (shared sup draws)");

    verdict(9, ok, "invariance suite");
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
    const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};
    for (int id = 1; id <= static_cast<int>(criteria.size()); ++id) {
        if (!only.empty() && !only.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[static_cast<std::size_t>(id - 1)]();
        } catch (const std::exception& e) {
            verdict(id, false, std::string("exception: ") + e.what());
        }
        detail_line(fmt("(%.1f s)", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()));
    }
    std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criterion/criteria failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
