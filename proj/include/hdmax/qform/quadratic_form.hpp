#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../linalg.hpp"

namespace hdmax {

/// Family of centered Gaussian quadratic forms F_k = xi^T Gamma_k xi - tr Gamma_k,
/// xi ~ N(0, I_N), k = 1..d. Every Gamma_k is symmetric and N x N.
class QuadFormSpec {
public:
    QuadFormSpec() = default;

    /// From coefficient matrices already expressed in whitened coordinates.
    static QuadFormSpec from_gammas(const std::vector<Matrix>& gammas) {
        QuadFormSpec s;
        s.gammas_.reserve(gammas.size());
        for (const auto& g : gammas) s.gammas_.push_back(symmetrized(g, "coefficient matrix"));
        s.check_shapes();
        return s;
    }

    /// From xi ~ N(0, Sigma) and forms xi^T A_k xi: Gamma_k = Sigma^{1/2} A_k Sigma^{1/2}.
    static QuadFormSpec from_covariance(const Matrix& sigma, const std::vector<Matrix>& a);

    std::size_t d() const { return gammas_.size(); }
    Eigen::Index N() const { return gammas_.empty() ? 0 : gammas_.front().rows(); }
    const Matrix& operator[](std::size_t k) const { return gammas_[k]; }
    const std::vector<Matrix>& gammas() const { return gammas_; }

private:
    void check_shapes() const {
        if (gammas_.empty()) throw DataError("quadratic-form family is empty");
        for (const auto& g : gammas_)
            if (g.rows() != gammas_.front().rows()) throw DataError("coefficient matrices differ in size");
    }

    std::vector<Matrix> gammas_;
};

/// Gamma_k = Sigma^{1/2} A_k Sigma^{1/2} with the symmetric PSD square root.
inline std::vector<Matrix> whiten(const Matrix& sigma, const std::vector<Matrix>& a) {
    const Matrix root = psd_sqrt(sigma, "Sigma");
    std::vector<Matrix> out;
    out.reserve(a.size());
    for (const auto& ak : a) {
        const Matrix s = symmetrized(ak, "A_k");
        if (s.rows() != root.rows()) throw DataError("A_k and Sigma differ in size");
        out.push_back(symmetrized(root * s * root, "whitened form"));
    }
    return out;
}

inline QuadFormSpec QuadFormSpec::from_covariance(const Matrix& sigma, const std::vector<Matrix>& a) {
    return from_gammas(whiten(sigma, a));
}

/// E[F^2] = 2 ||Gamma||_F^2.
inline double qf_variance(const Matrix& gamma) { return 2.0 * gamma.squaredNorm(); }

/// E[F_k F_l] = 2 tr(Gamma_k Gamma_l).
inline double qf_covariance(const Matrix& gk, const Matrix& gl) {
    if (gk.rows() != gl.rows() || gk.cols() != gl.cols()) throw DataError("dimension mismatch");
    // tr(A B) = sum_ij A_ij B_ji = sum_ij A_ij B_ij for symmetric B
    return 2.0 * gk.cwiseProduct(gl.transpose()).sum();
}

/// tr(Gamma^4) as ||Gamma^2||_F^2.
inline double trace_fourth_power(const Matrix& gamma) {
    const Matrix sq = gamma * gamma;
    return sq.squaredNorm();
}

/// E[F^4] - 3 E[F^2]^2 = 48 tr(Gamma^4); never negative.
inline double qf_fourth_cumulant(const Matrix& gamma) { return 48.0 * trace_fourth_power(gamma); }

inline double spectral_norm(const Matrix& gamma) {
    if (gamma.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gamma, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Inf_i(Gamma) = sum_j gamma(i, j)^2.
inline double influence(const Matrix& gamma, Eigen::Index i) {
    if (i < 0 || i >= gamma.rows()) throw ParameterError("influence: index out of range");
    return gamma.row(i).squaredNorm();
}

/// Lambda_i = max_k Inf_i(Gamma_k).
inline Vector influence_profile(const QuadFormSpec& spec) {
    Vector lambda = Vector::Zero(spec.N());
    for (const auto& g : spec.gammas()) lambda = lambda.cwiseMax(g.rowwise().squaredNorm());
    return lambda;
}

/// (log d)^6 max_k tr(Gamma_k^4) + (log d)^5 (max_i sqrt(Lambda_i)) sum_i Lambda_i.
/// `d` defaults to the number of forms in the family.
inline double criterion_value(const QuadFormSpec& spec, std::size_t d = 0) {
    if (d == 0) d = spec.d();
    if (d < 2) throw ParameterError("influence criterion needs d >= 2");
    const double ld = std::log(static_cast<double>(d));
    double max_tr4 = 0.0;
    for (const auto& g : spec.gammas()) max_tr4 = std::max(max_tr4, trace_fourth_power(g));
    const Vector lambda = influence_profile(spec);
    const double root_max = std::sqrt(lambda.size() ? lambda.maxCoeff() : 0.0);
    return std::pow(ld, 6) * max_tr4 + std::pow(ld, 5) * root_max * lambda.sum();
}

/// gamma(i, j) = 1/sqrt(N) if |i - j| = lag, else 0 (sample autocovariance at `lag`).
inline Matrix autocovariance_matrix(Eigen::Index N, Eigen::Index lag) {
    if (N < 1 || lag < 0) throw ParameterError("autocovariance matrix needs N >= 1, lag >= 0");
    Matrix g = Matrix::Zero(N, N);
    const double v = 1.0 / std::sqrt(static_cast<double>(N));
    for (Eigen::Index i = 0; i + lag < N; ++i) {
        g(i, i + lag) = v;
        g(i + lag, i) = v;
    }
    return g;
}

struct DiagnosticsReport {
    std::vector<double> variance;
    Matrix covariance;
    std::vector<double> fourth_cumulant;
    std::vector<double> spectral_norm;
    std::vector<double> cumulant_bound;  // 24 ||Gamma||_sp^2 E[F^2]
    Vector influence;                    // Lambda_i
    std::optional<double> criterion;     // only when d >= 2
};

inline DiagnosticsReport diagnose(const QuadFormSpec& spec) {
    DiagnosticsReport r;
    const std::size_t d = spec.d();
    r.covariance.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
        const auto& g = spec[k];
        r.variance.push_back(qf_variance(g));
        r.fourth_cumulant.push_back(qf_fourth_cumulant(g));
        const double sp = spectral_norm(g);
        r.spectral_norm.push_back(sp);
        r.cumulant_bound.push_back(24.0 * sp * sp * r.variance.back());
        for (std::size_t l = 0; l <= k; ++l) {
            const double c = qf_covariance(g, spec[l]);
            r.covariance(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = c;
            r.covariance(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = c;
        }
    }
    r.influence = influence_profile(spec);
    if (d >= 2) r.criterion = criterion_value(spec);
    return r;
}

/// Exact covariance matrix (2 tr(Gamma_k Gamma_l))_{k,l} of the family.
inline Matrix qf_covariance_matrix(const QuadFormSpec& spec) {
    const auto d = static_cast<Eigen::Index>(spec.d());
    Matrix c(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l <= k; ++l)
            c(k, l) = c(l, k) = qf_covariance(spec[static_cast<std::size_t>(k)], spec[static_cast<std::size_t>(l)]);
    return c;
}

} // namespace hdmax
