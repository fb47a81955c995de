#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "../linalg.hpp"
#include "../parallel.hpp"
#include "../random.hpp"

namespace hdmax {

/// n_draws i.i.d. copies of max_j Z_j (or max_j |Z_j| when two_sided) for
/// Z ~ N(0, cov). Draw k uses its own substream, so results do not depend on
/// the thread count.
inline std::vector<double> sample_gaussian_max(const Matrix& cov, std::size_t n_draws, Seed seed,
                                               bool two_sided, unsigned threads = 1) {
    const Matrix factor = psd_factor(cov);
    const auto d = factor.rows();
    if (d == 0) throw DataError("covariance must be at least 1x1");
    std::vector<double> out(n_draws);
    constexpr std::size_t kBatch = 4096;
    const std::size_t batches = (n_draws + kBatch - 1) / kBatch;
    parallel_for(batches, threads, [&](std::size_t b) {
        Engine eng = make_engine(seed, {0x6A, b});
        std::normal_distribution<double> dist;
        const std::size_t first = b * kBatch;
        const std::size_t count = std::min(kBatch, n_draws - first);
        Matrix g(d, static_cast<Eigen::Index>(count));
        for (Eigen::Index c = 0; c < g.cols(); ++c)
            for (Eigen::Index r = 0; r < d; ++r) g(r, c) = dist(eng);
        const Matrix z = factor * g;
        for (std::size_t c = 0; c < count; ++c) {
            const auto col = z.col(static_cast<Eigen::Index>(c));
            out[first + c] = two_sided ? col.cwiseAbs().maxCoeff() : col.maxCoeff();
        }
    });
    return out;
}

} // namespace hdmax
