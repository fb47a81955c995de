#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace hdmax {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPsdClip = 1e-8;

/// Checks symmetry to 1e-10 relative to the largest entry and returns the
/// symmetric part (M + M^T) / 2.
inline Matrix symmetrized(const Matrix& m, const char* what = "matrix") {
    if (m.rows() != m.cols()) throw DataError(std::string(what) + " must be square");
    const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale)) throw DataError(std::string(what) + " has non-finite entries");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
        throw DataError(std::string(what) + " is not symmetric");
    return (m + m.transpose()) * 0.5;
}

/// Eigen-decomposition of a symmetric PSD matrix with negative eigenvalues
/// above -1e-8 * lambda_max clipped to zero. Anything more negative is
/// rejected as indefinite.
struct PsdEigen {
    Vector values;   // clipped, ascending
    Matrix vectors;
};

inline PsdEigen psd_eigen(const Matrix& m, const char* what = "covariance") {
    const Matrix s = symmetrized(m, what);
    if (s.rows() == 0) return {Vector(), Matrix()};
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.info() != Eigen::Success) throw DataError(std::string(what) + ": eigendecomposition failed");
    Vector ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() < -kPsdClip * top || (top == 0.0 && ev.minCoeff() < 0.0))
        throw NotPsdError(std::string(what) + " is not positive semi-definite");
    ev = ev.cwiseMax(0.0);
    return {ev, es.eigenvectors()};
}

/// L with L L^T = m, L = V diag(sqrt(lambda)).
inline Matrix psd_factor(const Matrix& m, const char* what = "covariance") {
    const auto e = psd_eigen(m, what);
    return e.vectors * e.values.cwiseSqrt().asDiagonal();
}

/// Symmetric PSD square root V diag(sqrt(lambda)) V^T.
inline Matrix psd_sqrt(const Matrix& m, const char* what = "covariance") {
    const auto e = psd_eigen(m, what);
    return e.vectors * e.values.cwiseSqrt().asDiagonal() * e.vectors.transpose();
}

} // namespace hdmax
