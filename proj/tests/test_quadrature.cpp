#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "forcelab/quadrature.hpp"

namespace quad = forcelab::quad;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    for (int n : {1, 2, 5, 15, 65}) {
        const auto& r = quad::gauss_legendre(n);
        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        EXPECT_NEAR(wsum, 2.0, 1e-14) << n;
        // degree 2n-1 monomial x^(2n-2) integrates to 2/(2n-1)
        const int deg = 2 * n - 2;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
        EXPECT_NEAR(s, 2.0 / (deg + 1), 1e-13) << n;
    }
}

TEST(GaussLegendre, MappedRule) {
    const auto r = quad::gauss_legendre(15, 0.0, std::numbers::pi);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::sin(r.nodes[i]);
    EXPECT_NEAR(s, 2.0, 1e-14);
}

TEST(Simpson, WeightsSumToLength) {
    const auto r = quad::composite_simpson(65, 0.0, 1.0);
    double s = 0.0, m = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        s += r.weights[i];
        m += r.weights[i] * r.nodes[i] * r.nodes[i] * r.nodes[i];
    }
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_NEAR(m, 0.25, 1e-15);  // exact for cubics
    EXPECT_THROW(quad::composite_simpson(64, 0.0, 1.0), std::invalid_argument);
}

TEST(Adaptive, SmoothIntegrals) {
    EXPECT_NEAR(quad::integral([](double x) { return std::exp(-x); }, 0.0, 60.0, 1e-12), 1.0 - std::exp(-60.0), 1e-12);
    // ∫_1^2 2t sin(t^2) dt = cos 1 - cos 4
    EXPECT_NEAR(quad::integral([](double t) { return 2 * t * std::sin(t * t); }, 1.0, 2.0, 1e-12),
                std::cos(1.0) - std::cos(4.0), 1e-12);
    // fast oscillation near t = 50
    EXPECT_NEAR(quad::integral([](double t) { return 2 * t * std::sin(t * t); }, 0.0, 50.0, 1e-10),
                1.0 - std::cos(2500.0), 1e-9);
    EXPECT_EQ(quad::integral([](double) { return 3.0; }, 2.0, 2.0, 1e-9), 0.0);
    // reversed limits give the negative
    EXPECT_NEAR(quad::integral([](double x) { return x; }, 1.0, 0.0, 1e-12), -0.5, 1e-14);
}

TEST(Adaptive, EndpointSingularityConverges) {
    const auto res = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
    EXPECT_NEAR(res.value, 2.0, 1e-8);
}

TEST(Adaptive, VectorIntegrand) {
    const Eigen::Vector2d v = quad::integral(
        [](double x) {
            Eigen::Vector2d r;
            r << std::cos(x), x * x;
            return r;
        },
        0.0, 1.0, 1e-12);
    EXPECT_NEAR(v[0], std::sin(1.0), 1e-13);
    EXPECT_NEAR(v[1], 1.0 / 3.0, 1e-13);
}

TEST(Adaptive, NonConvergenceReportsWorstInterval) {
    quad::QuadOptions opt;
    opt.max_panels = 8;
    try {
        (void)quad::integrate([](double t) { return std::sin(t * t * t); }, 0.0, 40.0, 1e-12, opt);
        FAIL() << "expected QuadratureError";
    } catch (const quad::QuadratureError& e) {
        EXPECT_LT(e.worst_a(), e.worst_b());
        EXPECT_GE(e.worst_a(), 0.0);
        EXPECT_LE(e.worst_b(), 40.0);
    }
}

TEST(Cumulative, MatchesClosedFormEverywhere) {
    std::vector<double> grid;
    for (int i = 0; i <= 500; ++i) grid.push_back(0.1 * i);
    const auto bp = quad::refine_breakpoints(grid, 8);
    auto f = [](double t) { return 2 * t * std::sin(t * t); };
    quad::CumulativeIntegral P(f, bp, 1e-10);
    double worst = 0.0;
    for (double x = 0.0; x <= 50.0; x += 0.0137) worst = std::max(worst, std::fabs(P(x) - (1.0 - std::cos(x * x))));
    EXPECT_LT(worst, 1e-9);
    EXPECT_NEAR(P(50.0), 1.0 - std::cos(2500.0), 1e-9);
    EXPECT_NEAR(P.integrand(7.3), f(7.3), 1e-9);
    EXPECT_EQ(P(-1.0), 0.0);
    EXPECT_THROW((void)P(51.0), std::out_of_range);
}

TEST(Cumulative, KinkAtBreakpoint) {
    const std::vector<double> bp = {0.0, 1.0, 3.0};
    quad::CumulativeIntegral P([](double t) { return t < 1.0 ? 1.0 - t : 0.0; }, bp, 1e-12);
    EXPECT_NEAR(P(1.0), 0.5, 1e-14);
    EXPECT_NEAR(P(0.5), 0.375, 1e-14);
    EXPECT_NEAR(P(2.5), 0.5, 1e-14);
}

TEST(RefineBreakpoints, MergesExtras) {
    const std::vector<double> grid = {0.0, 1.0, 2.0};
    const std::vector<double> extra = {0.7, 1.0, 5.0};
    const auto bp = quad::refine_breakpoints(grid, 2, extra);
    const std::vector<double> expect = {0.0, 0.5, 0.7, 1.0, 1.5, 2.0};
    ASSERT_EQ(bp.size(), expect.size());
    for (std::size_t i = 0; i < bp.size(); ++i) EXPECT_DOUBLE_EQ(bp[i], expect[i]);
}
