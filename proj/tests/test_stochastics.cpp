#include <hdmax/hdmax.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace hdmax;

namespace {

LeadLagModel unit_model(double rho, double theta, double T = 1.0) {
    LeadLagModel m;
    m.rho = rho;
    m.theta = theta;
    m.T = T;
    return m;
}

std::vector<double> sync_increments(const std::vector<double>& x) { return increments(x); }

} // namespace

TEST(Piecewise, ConstantIntegral) {
    PiecewiseConstant f(2.0);
    EXPECT_DOUBLE_EQ(f.integral_sq(0.25, 0.75), 2.0);
    EXPECT_EQ(f.integral_sq(0.75, 0.25), 0.0);
    EXPECT_TRUE(f.is_constant());
}

TEST(Piecewise, StepIntegralAcrossKnots) {
    PiecewiseConstant f({0.0, 0.5, 0.8, 1.0}, {1.0, 3.0, 2.0});
    EXPECT_DOUBLE_EQ(f(0.1), 1.0);
    EXPECT_DOUBLE_EQ(f(0.5), 3.0);
    EXPECT_DOUBLE_EQ(f(5.0), 2.0);
    EXPECT_NEAR(f.integral_sq(0.25, 0.9), 0.25 * 1 + 0.3 * 9 + 0.1 * 4, 1e-14);
    EXPECT_DOUBLE_EQ(f.max_level(), 3.0);
    EXPECT_THROW(PiecewiseConstant({0.0, 1.0}, {-1.0}), ConfigError);
    EXPECT_THROW(PiecewiseConstant({0.0, 0.0, 1.0}, {1.0, 1.0}), ConfigError);
}

TEST(TimeLattice, DecimalQuantum) {
    const std::vector<double> v{0.0, 0.1, 0.003, 1.0};
    const auto lat = TimeLattice::fit(v);
    EXPECT_DOUBLE_EQ(lat.quantum(), 0.001);
    EXPECT_EQ(lat.tick(0.1), 100);
    EXPECT_EQ(lat.tick(-0.097), -97);
    EXPECT_DOUBLE_EQ(lat.time(250), 0.25);
    EXPECT_THROW(lat.tick(0.0005), ConfigError);
}

TEST(TimeLattice, IncommensurableRejected) {
    const std::vector<double> v{0.0, 1.0 / 3.0, 1.0};
    EXPECT_THROW(TimeLattice::fit(v), ConfigError);
}

TEST(MakeScheme, EquidistantQuarter) {
    const auto s = make_scheme({SchemeKind::equidistant, 0.25, 0}, 1.0, {});
    const std::vector<double> want{0.0, 0.25, 0.5, 0.75, 1.0};
    EXPECT_EQ(s.times1, want);
    EXPECT_EQ(s.times2, want);
    EXPECT_EQ(s.label.kind, SchemeKind::equidistant);
}

TEST(MakeScheme, EquidistantRejectsBadStep) {
    EXPECT_THROW(make_equidistant_scheme(0.0, 1.0), ParameterError);
    EXPECT_THROW(make_equidistant_scheme(2.0, 1.0), ParameterError);
}

TEST(MakeScheme, SubsampleFullBaseGrid) {
    const auto base = equidistant_times(1e-3, 1.0);
    const auto s = make_subsample_scheme(base.size(), 1e-3, 1.0, {9, 0});
    EXPECT_EQ(s.times1, base);
    EXPECT_EQ(s.times2, base);
}

TEST(MakeScheme, SubsampleThreeHundred) {
    const auto s = make_subsample_scheme(300, 1e-3, 1.0, {11, 3});
    for (const auto* t : {&s.times1, &s.times2}) {
        ASSERT_EQ(t->size(), 300u);
        EXPECT_EQ(t->front(), 0.0);
        for (std::size_t i = 1; i < t->size(); ++i) EXPECT_LT((*t)[i - 1], (*t)[i]);
        EXPECT_LE(t->back(), 1.0);
    }
    EXPECT_NE(s.times1, s.times2);
    const auto again = make_subsample_scheme(300, 1e-3, 1.0, {11, 3});
    EXPECT_EQ(again.times1, s.times1);
    EXPECT_EQ(again.times2, s.times2);
}

TEST(MakeScheme, SubsampleTooLarge) {
    EXPECT_THROW(make_subsample_scheme(1002, 1e-3, 1.0, {}), ParameterError);
    EXPECT_THROW(make_subsample_scheme(1, 1e-3, 1.0, {}), ParameterError);
}

TEST(MakeScheme, SubsampleUniformInclusion) {
    // Every nonzero base point is kept with probability (m-1)/(M-1).
    const std::size_t m = 5, reps = 20000;
    const auto base = equidistant_times(0.1, 1.0);
    std::vector<double> hits(base.size(), 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto s = make_subsample_scheme(m, 0.1, 1.0, {77, r});
        for (double t : s.times1) hits[static_cast<std::size_t>(std::llround(t * 10))] += 1.0;
    }
    EXPECT_EQ(hits[0], static_cast<double>(reps));
    const double p = (m - 1.0) / (base.size() - 1.0);
    const double se = std::sqrt(p * (1 - p) / reps);
    for (std::size_t k = 1; k < base.size(); ++k) EXPECT_NEAR(hits[k] / reps, p, 4 * se) << k;
}

TEST(Simulate, IndependentCaseUncorrelated) {
    const double h = 1e-5;
    const auto path = simulate_leadlag(unit_model(0.0, 0.0), make_equidistant_scheme(h, 1.0), {1, 0});
    const auto d1 = sync_increments(path.x1), d2 = sync_increments(path.x2);
    ASSERT_EQ(d1.size(), 100000u);
    EXPECT_NEAR(oracle::correlation(d1, d2), 0.0, 3.0 / std::sqrt(d1.size()));
}

TEST(Simulate, SynchronousCorrelation) {
    const double h = 1e-5, rho = 0.5;
    const auto path = simulate_leadlag(unit_model(rho, 0.0), make_equidistant_scheme(h, 1.0), {2, 0});
    const auto d1 = sync_increments(path.x1), d2 = sync_increments(path.x2);
    const double se = (1 - rho * rho) / std::sqrt(static_cast<double>(d1.size()));
    EXPECT_NEAR(oracle::correlation(d1, d2), rho, 3 * se);
    EXPECT_NEAR(oracle::variance(d1) / h, 1.0, 0.02);
}

TEST(Simulate, LaggedCorrelationOneBucket) {
    const double h = 0.1, rho = 0.75, T = 10000.0;
    auto model = unit_model(rho, 0.1, T);
    const auto path = simulate_leadlag(model, make_equidistant_scheme(h, T), {3, 0});
    const auto d1 = sync_increments(path.x1), d2 = sync_increments(path.x2);
    std::vector<double> lead(d1.begin(), d1.end() - 1), lagged(d2.begin() + 1, d2.end());
    const double n = static_cast<double>(lead.size());
    EXPECT_GE(n, 99998.0);
    EXPECT_NEAR(oracle::correlation(lead, lagged), rho, 3 * (1 - rho * rho) / std::sqrt(n));
    EXPECT_NEAR(oracle::correlation(d1, d2), 0.0, 3 / std::sqrt(n));
}

TEST(Simulate, StartsAtInitialValues) {
    auto m = unit_model(0.3, 0.2);
    m.x0_1 = 5.0;
    m.x0_2 = -1.5;
    const auto p = simulate_leadlag(m, make_equidistant_scheme(0.1, 1.0), {4, 0});
    EXPECT_EQ(p.x1.front(), 5.0);
    // X2 reads B2 at t - theta, which is zero at t = theta
    EXPECT_EQ(p.x2[2], -1.5);
    EXPECT_NE(p.x2.front(), -1.5);
    ASSERT_TRUE(p.seed.has_value());
    EXPECT_EQ(p.seed->master, 4u);
}

TEST(Simulate, UnrepresentableShiftRejected) {
    SamplingScheme s = make_equidistant_scheme(0.1, 1.0);
    EXPECT_THROW(simulate_leadlag(unit_model(0.0, 1.0 / 3.0), s, {}), ConfigError);
}

TEST(Simulate, InvalidModelRejected) {
    const auto s = make_equidistant_scheme(0.1, 1.0);
    EXPECT_THROW(simulate_leadlag(unit_model(1.0, 0.0), s, {}), ConfigError);
    EXPECT_THROW(simulate_leadlag(unit_model(0.0, 0.0, 2.0), s, {}), ConfigError);
    SamplingScheme bad = s;
    bad.times1[2] = bad.times1[1];
    EXPECT_THROW(simulate_leadlag(unit_model(0.0, 0.0), bad, {}), DataError);
}

TEST(Simulate, Deterministic) {
    const auto s = make_subsample_scheme(300, 1e-3, 1.0, {5, 0});
    const auto a = simulate_leadlag(unit_model(0.5, 0.1), s, {5, 1});
    const auto b = simulate_leadlag(unit_model(0.5, 0.1), s, {5, 1});
    const auto c = simulate_leadlag(unit_model(0.5, 0.1), s, {5, 2});
    EXPECT_EQ(a.x1, b.x1);
    EXPECT_EQ(a.x2, b.x2);
    EXPECT_NE(a.x1, c.x1);
}

TEST(Simulate, LinearFunctionalIsGaussian) {
    // X1(1) - 2 X2(0.5) + X2(0.75) over 1e5 replications: skewness and excess
    // kurtosis within 3 standard errors of zero.
    auto model = unit_model(0.4, 0.25);
    const auto scheme = make_equidistant_scheme(0.25, 1.0);
    const std::size_t reps = 100000;
    std::vector<double> y(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto p = simulate_leadlag(model, scheme, {6, r});
        y[r] = p.x1[4] - 2.0 * p.x2[2] + p.x2[3];
    }
    const double m = oracle::mean(y);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : y) {
        const double c = v - m;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= reps;
    m3 /= reps;
    m4 /= reps;
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2) - 3.0;
    EXPECT_LT(std::fabs(skew), 3 * std::sqrt(6.0 / reps));
    EXPECT_LT(std::fabs(kurt), 3 * std::sqrt(24.0 / reps));
}

TEST(Simulate, CrossCovarianceOfIntervals) {
    // Cov(X1(I), X2(J)) = rho * int_{I cap (J - theta)} sigma1(s) sigma2(s + theta) ds.
    LeadLagModel model = unit_model(0.6, 0.1);
    model.sigma1 = PiecewiseConstant({0.0, 0.5, 1.0}, {2.0, 1.0});
    model.sigma2 = PiecewiseConstant(0.5);
    SamplingScheme s;
    s.times1 = {0.0, 0.3, 0.6, 1.0};
    s.times2 = {0.0, 0.2, 0.5, 0.9, 1.0};
    s.T = 1.0;
    const std::size_t reps = 40000;
    std::vector<std::vector<double>> d1(3, std::vector<double>(reps)), d2(4, std::vector<double>(reps));
    for (std::size_t r = 0; r < reps; ++r) {
        const auto p = simulate_leadlag(model, s, {7, r});
        for (std::size_t i = 0; i < 3; ++i) d1[i][r] = p.x1[i + 1] - p.x1[i];
        for (std::size_t j = 0; j < 4; ++j) d2[j][r] = p.x2[j + 1] - p.x2[j];
    }
    auto truth = [&](std::size_t i, std::size_t j) {
        const double a = s.times1[i], b = s.times1[i + 1];
        const double c = s.times2[j] - 0.1, d = s.times2[j + 1] - 0.1;
        const double lo = std::max(a, c), hi = std::min(b, d);
        if (!(hi > lo)) return 0.0;
        // sigma1 is 2 below 0.5 and 1 above; sigma2 is 0.5 throughout
        const double below = std::max(0.0, std::min(hi, 0.5) - lo);
        const double above = std::max(0.0, hi - std::max(lo, 0.5));
        return 0.6 * 0.5 * (2.0 * below + 1.0 * above);
    };
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const auto est = oracle::covariance(d1[i], d2[j]);
            EXPECT_NEAR(est.cov, truth(i, j), 3.5 * est.se) << i << "," << j;
        }
    // increments of X1 have variance int_I sigma1^2
    EXPECT_NEAR(oracle::variance(d1[0]), 4.0 * 0.3, 0.05);
}

TEST(Diffusion, VarianceAndDeterminism) {
    const auto a = simulate_diffusion(PiecewiseConstant(2.0), 50000, 1.0, {8, 0}, 1.0);
    const auto b = simulate_diffusion(PiecewiseConstant(2.0), 50000, 1.0, {8, 0}, 1.0);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.values.front(), 1.0);
    EXPECT_DOUBLE_EQ(a.times.back(), 1.0);
    const auto d = increments(a.values);
    EXPECT_NEAR(oracle::variance(d) * 50000, 4.0, 0.1);
}

TEST(GaussianMax, TwoSidedStandardNormalQuantile) {
    Matrix cov(1, 1);
    cov << 1.0;
    auto s = sample_gaussian_max(cov, 1000000, {10, 0}, true);
    const auto q = empirical_quantile(s, 0.05);
    EXPECT_NEAR(q.value, oracle::normal_quantile(0.975), 0.03);
}

TEST(GaussianMax, IndependentPairOneSided) {
    const Matrix cov = Matrix::Identity(2, 2);
    const std::size_t n = 200000;
    auto s = sample_gaussian_max(cov, n, {11, 0}, false);
    const double frac = static_cast<double>(std::count_if(s.begin(), s.end(), [](double v) { return v <= 0; })) / n;
    EXPECT_NEAR(frac, 0.25, 3 * std::sqrt(0.25 * 0.75 / n));
}

TEST(GaussianMax, PerfectCorrelationMatchesSingleCoordinate) {
    Matrix one(1, 1);
    one << 1.0;
    Matrix two(2, 2);
    two << 1.0, 1.0, 1.0, 1.0;
    const std::size_t n = 100000;
    auto a = sample_gaussian_max(one, n, {12, 0}, false);
    auto b = sample_gaussian_max(two, n, {12, 1}, false);
    // two-sample KS critical value at the 0.1% level
    EXPECT_LT(ks_distance(a, b), 1.95 * std::sqrt(2.0 / n));
}

TEST(GaussianMax, QuadruplingCovarianceDoublesQuantiles) {
    const Matrix c1 = 0.7 * Matrix::Identity(3, 3);
    const Matrix c4 = 4.0 * c1;
    auto a = sample_gaussian_max(c1, 5000, {13, 0}, true);
    auto b = sample_gaussian_max(c4, 5000, {13, 0}, true);
    for (double alpha : {0.5, 0.1, 0.05, 0.01})
        EXPECT_EQ(empirical_quantile(b, alpha).value, 2.0 * empirical_quantile(a, alpha).value) << alpha;
}

TEST(GaussianMax, ThreadCountIndependent) {
    Matrix cov(2, 2);
    cov << 1.0, 0.3, 0.3, 2.0;
    EXPECT_EQ(sample_gaussian_max(cov, 20000, {14, 0}, true, 1), sample_gaussian_max(cov, 20000, {14, 0}, true, 4));
}

TEST(GaussianMax, RejectsIndefiniteAndAsymmetric) {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    EXPECT_THROW(sample_gaussian_max(bad, 10, {}, true), NotPsdError);
    Matrix asym(2, 2);
    asym << 1.0, 0.5, 0.4, 1.0;
    EXPECT_THROW(sample_gaussian_max(asym, 10, {}, true), DataError);
    Matrix tiny_neg(2, 2);
    tiny_neg << 1.0, 1.0 + 1e-12, 1.0 + 1e-12, 1.0;
    EXPECT_NO_THROW(sample_gaussian_max(tiny_neg, 10, {}, true));
}

TEST(Random, EngineStreamsDiffer) {
    auto a = make_engine({1, 0}, {5});
    auto b = make_engine({1, 1}, {5});
    auto c = make_engine({1, 0}, {5});
    const auto va = a();
    EXPECT_NE(va, b());
    EXPECT_EQ(va, c());
}

TEST(Random, RademacherBalanced) {
    auto e = make_engine({2, 0});
    std::vector<double> w(100000);
    fill_rademacher(e, w);
    double s = 0;
    for (double v : w) {
        ASSERT_TRUE(v == 1.0 || v == -1.0);
        s += v;
    }
    EXPECT_LT(std::fabs(s) / w.size(), 3 / std::sqrt(100000.0));
}
