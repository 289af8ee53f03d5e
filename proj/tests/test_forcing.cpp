#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "forcelab/forcing.hpp"
#include "forcelab/quadrature.hpp"

using namespace forcelab;

namespace {

ScalarFunction fn(const char* text) { return ScalarFunction::parse(text); }

const char* const kCorpus[] = {"0", "1", "sin(t)", "exp(-2*t)", "2*t*sin(t^2)", "1/(1+t)", "t*cos(t)"};

}  // namespace

TEST(MovingAverage, Examples) {
    EXPECT_NEAR(moving_average(fn("3.5"), 1.0, 4.0), 3.5, 1e-14);
    EXPECT_NEAR(moving_average(fn("2*t*sin(t^2)"), 1.0, 2.0), std::cos(1.0) - std::cos(4.0), 1e-9);
    EXPECT_NEAR(moving_average(fn("2*t*sin(t^2)"), 1.0, 2.0), 1.193946, 1e-6);
    EXPECT_EQ(moving_average(fn("t*cos(t)"), 0.0, 3.0), 0.0);
    // truncation at 0
    EXPECT_NEAR(moving_average(fn("1"), 2.0, 0.5), 0.5, 1e-14);
    EXPECT_THROW((void)moving_average(fn("1"), -1.0, 0.5), std::invalid_argument);
}

TEST(Field, Examples) {
    const Grid g = Grid::span(0.0, 10.0, 0.1);
    auto field = moving_average_field(fn("0"), {0.0, 0.5, 1.0}, g);
    EXPECT_EQ(field.max_abs(), 0.0);

    field = moving_average_field(fn("1"), {0.0, 0.5, 1.0}, g);
    const std::size_t k = g.index_of(7.0);
    EXPECT_EQ(field.at(0, k), 0.0);
    EXPECT_NEAR(field.at(1, k), 0.5, 1e-13);
    EXPECT_NEAR(field.at(2, k), 1.0, 1e-13);
}

TEST(Field, OscillatoryBoundTwo) {
    const Grid g = Grid::span(0.0, 50.0, 0.01);
    const auto theta = uniform_theta_grid(1.0, 65);
    const auto field = moving_average_field(fn("2*t*sin(t^2)"), theta, g);
    EXPECT_LE(field.max_abs(), 2.0 + 10 * field.quad_tol);
    EXPECT_GT(field.max_abs(), 1.9);
}

TEST(Field, MatchesDirectQuadratureAndPrefix) {
    const Grid g = Grid::span(0.0, 20.0, 0.05);
    for (const char* text : kCorpus) {
        const auto f = fn(text);
        const PrefixIntegral P(f, g, kDefaultQuadTol);
        const auto field = moving_average_field(P, uniform_theta_grid(1.0, 17), g, kDefaultQuadTol);
        for (std::size_t k = 0; k < g.n; k += 37) {
            const double t = g.t(k);
            for (std::size_t j = 0; j < field.rows(); ++j)
                EXPECT_NEAR(field.at(j, k), moving_average(f, field.theta[j], t), 2 * kDefaultQuadTol) << text;
            // prefix consistency: f_t(t) = P(t)
            EXPECT_NEAR(moving_average(f, t, t), P(t), kDefaultQuadTol) << text;
        }
    }
}

TEST(Field, Additivity) {
    // f_{θ1+θ2}(t) = f_{θ2}(t) + f_{θ1}(t-θ2) on lattice points.
    const Grid g = Grid::span(0.0, 30.0, 0.125);
    for (const char* text : kCorpus) {
        const auto field = moving_average_field(fn(text), uniform_theta_grid(1.0, 9), g);
        double worst = 0.0;
        for (std::size_t j1 = 1; j1 < 9; ++j1) {
            for (std::size_t j2 = 1; j1 + j2 < 9; ++j2) {
                const std::size_t shift = g.index_of(field.theta[j2]);
                for (std::size_t k = shift; k < g.n; ++k) {
                    const double lhs = field.at(j1 + j2, k);
                    const double rhs = field.at(j2, k) + field.at(j1, k - shift);
                    worst = std::max(worst, std::fabs(lhs - rhs));
                    // subadditivity skeleton
                    EXPECT_LE(std::fabs(lhs), std::fabs(field.at(j1, k - shift)) + std::fabs(field.at(j2, k)) +
                                                  10 * field.quad_tol);
                }
            }
        }
        EXPECT_LE(worst, 10 * kDefaultQuadTol) << text;
    }
}

TEST(Field, CsvLayout) {
    const Grid g = Grid::span(0.0, 1.0, 0.5);
    const auto field = moving_average_field(fn("1"), {0.0, 0.5}, g);
    std::ostringstream os;
    write_field_csv(os, field);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,theta=0,theta=0.5");
    const double expect[3][3] = {{0, 0, 0}, {0.5, 0, 0.5}, {1, 0, 0.5}};
    for (const auto& row : expect) {
        ASSERT_TRUE(std::getline(in, line));
        std::istringstream cells(line);
        std::string cell;
        for (double v : row) {
            ASSERT_TRUE(std::getline(cells, cell, ','));
            EXPECT_NEAR(std::stod(cell), v, 1e-14);
        }
    }
    EXPECT_FALSE(std::getline(in, line));
}

TEST(Decompose, ConstantForcing) {
    const Grid g = Grid::span(0.0, 5.0, 0.01);
    const auto dec = decompose(fn("2"), 1.0, g);
    for (std::size_t k = 0; k < g.n; ++k) {
        const double t = g.t(k);
        const double expect = t < 1.0 ? 2.0 * (1.0 - t) : 0.0;
        EXPECT_NEAR(dec.delta.at(k), expect, 1e-12) << t;
    }
    EXPECT_EQ(dec.I.at(0), 0.0);
    EXPECT_NEAR(dec.I.at(g.index_of(1.0)), 1.0, 1e-12);
    EXPECT_NEAR(dec.I.at(g.n - 1), 1.0, 1e-12);
}

TEST(Decompose, ZeroAndBounds) {
    const Grid g = Grid::span(0.0, 12.0, 0.01);
    const auto z = decompose(fn("0"), 1.0, g);
    for (std::size_t k = 0; k < g.n; ++k) {
        EXPECT_EQ(z.delta.at(k), 0.0);
        EXPECT_EQ(z.I.at(k), 0.0);
    }
    const auto f = fn("2*t*sin(t^2)");
    const auto dec = decompose(f, 1.0, g);
    const std::size_t k = g.index_of(10.0);
    EXPECT_LE(std::fabs(dec.delta.at(k)), std::fabs(f(10.0)) + 2.0);
}

TEST(Decompose, IDerivativeIsDelta) {
    const Grid g = Grid::span(0.0, 20.0, 0.01);
    for (const char* text : kCorpus) {
        const auto dec = decompose(fn(text), 0.7, g);
        double worst = 0.0;
        for (std::size_t k = 1; k + 1 < g.n; ++k) {
            const double t = g.t(k);
            if (std::fabs(t - 0.7) < 0.02) continue;  // kink of f_Δ
            const double fd = (dec.I.at(k + 1) - dec.I.at(k - 1)) / (2 * g.h);
            const double scale = 1.0 + std::fabs(dec.delta.at(k));
            worst = std::max(worst, std::fabs(fd - dec.delta.at(k)) / scale);
        }
        // 2t sin t^2 has |δ''| up to ~4t^3, so the O(h^2) bound is loose there.
        EXPECT_LE(worst, std::string(text) == "2*t*sin(t^2)" ? 0.2 : 1e-4) << text;
    }
}

TEST(DecompositionIdentity, Examples) {
    const Grid g = Grid::span(0.0, 10.0, 0.01);
    for (const char* text : {"0", "3"}) {
        const auto f = fn(text);
        const auto dec = decompose(f, 1.0, g);
        const auto field = moving_average_field(dec.prefix, theta_rule(1.0, 65, ThetaRule::GaussLegendre).nodes, g,
                                                kDefaultQuadTol);
        const auto rep = verify_decomposition_identity(f, dec, field, 1e-10);
        EXPECT_TRUE(rep.pass()) << text << " " << rep.max_residual();
        const std::size_t k = g.index_of(4.0);
        EXPECT_NEAR(dec.I.at(k), std::atof(text) / 2.0, 1e-12);
    }
}

TEST(DecompositionIdentity, OscillatoryForcing) {
    const Grid g = Grid::span(0.0, 50.0, 0.01);
    const auto f = fn("2*t*sin(t^2)");
    const auto dec = decompose(f, 1.0, g);
    const auto field =
        moving_average_field(dec.prefix, theta_rule(1.0, 65, ThetaRule::GaussLegendre).nodes, g, kDefaultQuadTol);
    const auto rep = verify_decomposition_identity(f, dec, field, 1e-6);
    EXPECT_TRUE(rep.pass()) << rep.max_residual();
}

TEST(DecompositionIdentity, SimpsonRuleOnSmoothForcing) {
    const Grid g = Grid::span(0.0, 20.0, 0.01);
    const auto f = fn("sin(t)");
    const auto dec = decompose(f, 1.0, g);
    const auto field = moving_average_field(dec.prefix, uniform_theta_grid(1.0, 65), g, kDefaultQuadTol);
    const auto rep = verify_decomposition_identity(f, dec, field, 1e-8, ThetaRule::Simpson);
    EXPECT_TRUE(rep.pass()) << rep.max_residual();
    EXPECT_THROW((void)verify_decomposition_identity(f, dec, field, 1e-8, ThetaRule::GaussLegendre),
                 std::invalid_argument);
}

TEST(Oscillatory, Construction) {
    const auto osc = oscillatory_forcing(parse_expr("t^2"), 60.0);
    EXPECT_TRUE(osc.f.expr == parse_expr("2*t*sin(t^2)")) << osc.f.expr.str();
    const auto lin = oscillatory_forcing(parse_expr("t"), 60.0);
    for (double t : {0.3, 2.0, 17.0}) {
        EXPECT_NEAR(lin(t), std::sin(t), 1e-15);
        EXPECT_NEAR(lin.exact_moving_average(0.4, t), std::cos(std::max(t - 0.4, 0.0)) - std::cos(t), 1e-15);
    }
    EXPECT_NEAR(osc.exact_moving_average(0.3, 7.0), moving_average(osc.f, 0.3, 7.0), kDefaultQuadTol);
    EXPECT_THROW((void)oscillatory_forcing(parse_expr("sin(t)"), 10.0), MonotonicityError);
}
