#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "../leadlag/bootstrap.hpp"
#include "../linalg.hpp"
#include "../parallel.hpp"
#include "../random.hpp"
#include "../stats/empirical.hpp"
#include "quadratic_form.hpp"

namespace hdmax {

struct MaxSamples {
    std::vector<double> max;      // max_k X_k
    std::vector<double> abs_max;  // max_k |X_k|
};

namespace detail {

inline bool is_diagonal(const Matrix& g) {
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r)
            if (r != c && g(r, c) != 0.0) return false;
    return true;
}

inline constexpr std::size_t kMcBatch = 2048;

} // namespace detail

/// n_mc draws of max_k F_k and max_k |F_k| with xi ~ N(0, I_N).
inline MaxSamples sample_qf_max(const QuadFormSpec& spec, std::size_t n_mc, Seed seed, unsigned threads = 1) {
    const Eigen::Index N = spec.N();
    const std::size_t d = spec.d();
    std::vector<bool> diag(d);
    std::vector<double> trace(d);
    for (std::size_t k = 0; k < d; ++k) {
        diag[k] = detail::is_diagonal(spec[k]);
        trace[k] = spec[k].trace();
    }
    MaxSamples out{std::vector<double>(n_mc), std::vector<double>(n_mc)};
    const std::size_t batches = (n_mc + detail::kMcBatch - 1) / detail::kMcBatch;
    parallel_for(batches, threads, [&](std::size_t b) {
        Engine eng = make_engine(seed, {0xF0, b});
        std::normal_distribution<double> dist;
        const std::size_t first = b * detail::kMcBatch;
        const auto count = static_cast<Eigen::Index>(std::min(detail::kMcBatch, n_mc - first));
        Matrix xi(N, count);
        for (Eigen::Index c = 0; c < count; ++c)
            for (Eigen::Index r = 0; r < N; ++r) xi(r, c) = dist(eng);
        const Matrix xi_sq = xi.cwiseAbs2();
        Vector fmax = Vector::Constant(count, -std::numeric_limits<double>::infinity());
        Vector famax = Vector::Zero(count);
        for (std::size_t k = 0; k < d; ++k) {
            Vector f;
            if (diag[k])
                f = (spec[k].diagonal().transpose() * xi_sq).transpose();
            else
                f = (xi.cwiseProduct(spec[k] * xi)).colwise().sum().transpose();
            f.array() -= trace[k];
            fmax = fmax.cwiseMax(f);
            famax = famax.cwiseMax(f.cwiseAbs());
        }
        for (Eigen::Index c = 0; c < count; ++c) {
            out.max[first + static_cast<std::size_t>(c)] = fmax(c);
            out.abs_max[first + static_cast<std::size_t>(c)] = famax(c);
        }
    });
    return out;
}

/// n_mc draws of max_k Z_k and max_k |Z_k| for Z ~ N(0, cov).
inline MaxSamples sample_gaussian_maxima(const Matrix& cov, std::size_t n_mc, Seed seed, unsigned threads = 1) {
    const Matrix factor = psd_factor(cov, "cov_Z");
    const Eigen::Index d = factor.rows();
    MaxSamples out{std::vector<double>(n_mc), std::vector<double>(n_mc)};
    const std::size_t batches = (n_mc + detail::kMcBatch - 1) / detail::kMcBatch;
    parallel_for(batches, threads, [&](std::size_t b) {
        Engine eng = make_engine(seed, {0x2A, b});
        std::normal_distribution<double> dist;
        const std::size_t first = b * detail::kMcBatch;
        const auto count = static_cast<Eigen::Index>(std::min(detail::kMcBatch, n_mc - first));
        Matrix g(d, count);
        for (Eigen::Index c = 0; c < count; ++c)
            for (Eigen::Index r = 0; r < d; ++r) g(r, c) = dist(eng);
        const Matrix z = factor * g;
        for (Eigen::Index c = 0; c < count; ++c) {
            out.max[first + static_cast<std::size_t>(c)] = z.col(c).maxCoeff();
            out.abs_max[first + static_cast<std::size_t>(c)] = z.col(c).cwiseAbs().maxCoeff();
        }
    });
    return out;
}

struct KolmogorovEstimate {
    double max_distance = 0.0;      // sup_x |P(max F <= x) - P(max Z <= x)|, estimated
    double abs_max_distance = 0.0;  // same for max |F|, max |Z|
    std::size_t n_mc = 0;
};

/// Monte Carlo estimate of the Kolmogorov distance between the maxima of the
/// quadratic-form family and of N(0, cov_Z). Both ECDFs use n_mc draws and
/// are compared at the pooled sample points.
inline KolmogorovEstimate mc_max_kolmogorov(const QuadFormSpec& spec, const Matrix& cov_z, std::size_t n_mc,
                                            Seed seed, unsigned threads = 1) {
    if (n_mc < 1000) throw ParameterError("mc_max_kolmogorov needs n_mc >= 1000");
    if (cov_z.rows() != static_cast<Eigen::Index>(spec.d()))
        throw DataError("cov_Z must be d x d for d quadratic forms");
    auto f = sample_qf_max(spec, n_mc, seed, threads);
    auto z = sample_gaussian_maxima(cov_z, n_mc, seed, threads);
    KolmogorovEstimate est;
    est.n_mc = n_mc;
    est.max_distance = ks_distance(std::move(f.max), std::move(z.max));
    est.abs_max_distance = ks_distance(std::move(f.abs_max), std::move(z.abs_max));
    return est;
}

struct Remainders {
    double r2 = 0.0;  // max_{k,l} |cov_Z(k,l) - 2 tr(Gamma_k Gamma_l)|
    double r3 = 0.0;  // max_k sqrt(48 tr Gamma_k^4)
};

inline Remainders approximation_remainders(const QuadFormSpec& spec, const Matrix& cov_z) {
    if (cov_z.rows() != static_cast<Eigen::Index>(spec.d()) || cov_z.cols() != cov_z.rows())
        throw DataError("cov_Z must be d x d for d quadratic forms");
    Remainders r;
    r.r2 = (cov_z - qf_covariance_matrix(spec)).cwiseAbs().maxCoeff();
    for (const auto& g : spec.gammas()) r.r3 = std::max(r.r3, std::sqrt(qf_fourth_cumulant(g)));
    return r;
}

/// Monte Carlo estimate (not an exact value) of the Lindeberg remainder
///   sum_i E[max_k |sum_j gamma_k(i,j) W^(i)_j|^3] (E|Y_i|^3 + E|G_i|^3),
/// where W^(i)_j = Y_j for j <= i and G_j (standard normal) for j > i.
struct LindebergEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::size_t n_mc = 0;
};

inline LindebergEstimate r1_estimate(const QuadFormSpec& spec, Multiplier y_law, std::size_t n_mc, Seed seed) {
    if (n_mc < 2) throw ParameterError("r1_estimate needs n_mc >= 2");
    if (y_law == Multiplier::unit) throw ParameterError("Y must be centered with unit variance");
    const Eigen::Index N = spec.N();
    const double abs3_g = 2.0 * std::sqrt(2.0 / std::numbers::pi);
    const double abs3_y = y_law == Multiplier::rademacher ? 1.0 : abs3_g;
    std::vector<double> totals(n_mc);
    std::vector<double> y(static_cast<std::size_t>(N)), g(static_cast<std::size_t>(N));
    for (std::size_t m = 0; m < n_mc; ++m) {
        Engine ey = make_engine(seed, {0x71, m, 1});
        Engine eg = make_engine(seed, {0x71, m, 2});
        if (y_law == Multiplier::rademacher)
            fill_rademacher(ey, y);
        else
            fill_normal(ey, y);
        fill_normal(eg, g);
        double total = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            double worst = 0.0;
            for (const auto& gam : spec.gammas()) {
                double s = 0.0;
                for (Eigen::Index j = 0; j < N; ++j)
                    s += gam(i, j) * (j <= i ? y[static_cast<std::size_t>(j)] : g[static_cast<std::size_t>(j)]);
                worst = std::max(worst, std::fabs(s));
            }
            total += worst * worst * worst;
        }
        totals[m] = total * (abs3_y + abs3_g);
    }
    double mean = 0.0;
    for (double t : totals) mean += t;
    mean /= static_cast<double>(n_mc);
    double var = 0.0;
    for (double t : totals) var += (t - mean) * (t - mean);
    var /= static_cast<double>(n_mc - 1);
    return {mean, std::sqrt(var / static_cast<double>(n_mc)), n_mc};
}

} // namespace hdmax
