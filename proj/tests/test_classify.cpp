#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "forcelab/classify.hpp"

using namespace forcelab;

namespace {

ScalarFunction fn(const char* text) { return ScalarFunction::parse(text); }

Trajectory sampled(const char* text, const Grid& g) {
    const auto f = fn(text);
    Trajectory x(g, 1, text);
    for (std::size_t k = 0; k < g.n; ++k) x.at(k) = f(g.t(k));
    return x;
}

WeightFunction verified(const char* text, WeightClass cls = WeightClass::NonDecreasing, double rate = 0.0) {
    auto w = WeightFunction::parse(text, cls, rate);
    (void)verify_weight(w, 1e3);
    return w;
}

RatioField field_ratio(const char* f, const WeightFunction& w, double delta, const Grid& g, int count = 64) {
    const auto field = moving_average_field(fn(f), uniform_theta_grid(delta, count), g);
    return ratio_field(field, log_weight_samples(w, g));
}

Scenario scalar_scenario(const char* theorem, const char* f, const char* gamma, WeightClass cls, double t_end,
                         double h = 0.01) {
    Scenario s;
    s.id = std::string(theorem) + ":" + f;
    s.theorem = theorem;
    s.forcing = {fn(f)};
    s.weight = WeightFunction::parse(gamma, cls);
    s.alpha = 1.0;
    s.grid = Grid::span(0.0, t_end, h);
    return s;
}

}  // namespace

TEST(Limsup, Examples) {
    const auto one = WeightFunction::parse("1");
    auto e = limsup_ratio(sampled("sin(t)", Grid::span(0, 200, 0.01)), one);
    EXPECT_EQ(e.verdict, LimsupVerdict::PositiveFinite);
    EXPECT_NEAR(e.final_estimate, 1.0, 1e-4);

    e = limsup_ratio(sampled("exp(-t)", Grid::span(0, 60, 0.01)), one);
    EXPECT_EQ(e.verdict, LimsupVerdict::Zero);

    e = limsup_ratio(sampled("t", Grid::span(0, 100, 0.01)), one);
    EXPECT_EQ(e.verdict, LimsupVerdict::Infinite);
}

TEST(Limsup, Windows) {
    LimsupPolicy p;
    EXPECT_EQ(window_count(20.0, p), 2);
    EXPECT_EQ(window_count(50.0, p), 3);
    EXPECT_EQ(window_count(200.0, p), 5);
    EXPECT_EQ(window_count(1e5, p), 6);
    const Grid g = Grid::span(0, 100, 0.5);
    const auto w = window_maxima(g, std::vector<double>(g.n, 1.0), p);
    ASSERT_EQ(w.size(), 4u);
    EXPECT_DOUBLE_EQ(w.back().t_hi, 100.0);
    EXPECT_DOUBLE_EQ(w.back().t_lo, 50.0);
    for (std::size_t i = 1; i < w.size(); ++i) EXPECT_DOUBLE_EQ(w[i].t_lo, w[i - 1].t_hi);
}

TEST(Limsup, RuleOrder) {
    auto ws = [](std::initializer_list<double> m) {
        std::vector<Window> out;
        for (double v : m) out.push_back({0, 0, v});
        return out;
    };
    LimsupPolicy p;
    EXPECT_EQ(classify_windows(ws({0.0, 0.0}), p).verdict, LimsupVerdict::Zero);
    EXPECT_EQ(classify_windows(ws({1.0, 2e6}), p).verdict, LimsupVerdict::Infinite);
    EXPECT_EQ(classify_windows(ws({1.0, 2.0}), p).verdict, LimsupVerdict::Infinite);
    EXPECT_EQ(classify_windows(ws({1.0, 1.7}), p).verdict, LimsupVerdict::Inconclusive);
    EXPECT_EQ(classify_windows(ws({0.04, 0.02, 0.01}), p).verdict, LimsupVerdict::Zero);
    EXPECT_EQ(classify_windows(ws({0.01, 0.04, 0.02, 0.01}), p).verdict, LimsupVerdict::Zero);
    EXPECT_EQ(classify_windows(ws({0.04, 0.02}), p).verdict, LimsupVerdict::Inconclusive);
    EXPECT_EQ(classify_windows(ws({1.0, 0.95}), p).verdict, LimsupVerdict::PositiveFinite);
}

TEST(BigO, Examples) {
    const Grid g = Grid::span(0, 50, 0.01);
    const auto one = verified("1");
    auto c = check_bigO(field_ratio("2*t*sin(t^2)", one, 1.0, g), one.verified());
    EXPECT_EQ(c.verdict, Verdict3::Pass);
    EXPECT_LE(c.K_hat, 2.0 + 1e-6);

    c = check_bigO(field_ratio("1", one, 1.0, g), one.verified());
    EXPECT_EQ(c.verdict, Verdict3::Pass);
    EXPECT_NEAR(c.K_hat, 1.0, 1e-12);

    c = check_bigO(field_ratio("t", one, 1.0, g), one.verified());
    EXPECT_EQ(c.verdict, Verdict3::Fail);
    // f_θ(t) = θt - θ²/2 at θ = 1, t = 50
    EXPECT_NEAR(c.K_hat, 49.5, 1e-9);

    const auto raw = WeightFunction::parse("1");
    EXPECT_EQ(check_bigO(field_ratio("1", raw, 1.0, g), raw.verified()).verdict, Verdict3::Inconclusive);
}

TEST(LittleO, Examples) {
    const auto one = verified("1");
    const Grid g = Grid::span(0, 200, 0.01);
    EXPECT_EQ(check_littleo(field_ratio("1/(1+t)", one, 1.0, g, 16), true).verdict, Verdict3::Pass);
    EXPECT_EQ(check_littleo(field_ratio("1", one, 1.0, g, 16), true).verdict, Verdict3::Fail);
    const auto quarter = verified("(1+t)^0.25");
    // Rows with small θ ramp up until tθ ≈ π/2, so the tail windows must
    // hold a full modulation period 2π/θ.
    const Grid g400 = Grid::span(0, 400, 0.01);
    const auto c = check_littleo(field_ratio("2*t*sin(t^2)", quarter, 1.0, g400, 16), quarter.verified());
    EXPECT_EQ(c.verdict, Verdict3::Pass) << c.counts.zero << " " << c.counts.positive << " " << c.counts.inconclusive;
}

TEST(ThetaProfile, Examples) {
    const auto one = verified("1");
    const Grid g = Grid::span(0, 50, 0.01);
    auto prof = theta_profile(field_ratio("-2.5", one, 1.0, g), 1.0);
    EXPECT_EQ(prof.zero_set_measure_estimate, 0.0);
    EXPECT_EQ(prof.L_hat[0], 0.0);
    for (std::size_t j = 1; j < prof.theta.size(); ++j) EXPECT_NEAR(prof.L_hat[j], 2.5 * prof.theta[j], 1e-9);

    prof = theta_profile(field_ratio("0", one, 1.0, g), 1.0);
    EXPECT_DOUBLE_EQ(prof.zero_set_measure_estimate, 1.0);

    // The full-period row θ = 1 vanishes identically; interior rows do not.
    prof = theta_profile(field_ratio("sin(2*pi*t)", one, 1.0, g), 1.0);
    ASSERT_EQ(prof.zero_rows.size(), 1u);
    EXPECT_EQ(prof.zero_rows[0], 63u);
    ASSERT_EQ(prof.isolated_zero_rows.size(), 1u);
    EXPECT_NEAR(prof.zero_set_measure_estimate, 1.0 / 63, 1e-15);
    EXPECT_EQ(prof.robust_zero_measure, 0.0);
    // Oracle: sup_t |cos 2π(t-θ) - cos 2πt|/2π = |sin πθ|/π.
    for (std::size_t j = 1; j < 63; ++j)
        EXPECT_NEAR(prof.L_hat[j], std::fabs(std::sin(std::numbers::pi * prof.theta[j])) / std::numbers::pi, 2e-4);

    EXPECT_THROW((void)theta_profile(field_ratio("1", one, 1.0, g, 8), 1.0), std::invalid_argument);
}

TEST(ThetaProfile, Subadditivity) {
    const Grid g = Grid::span(0, 50, 0.01);
    for (const char* f : {"2*t*sin(t^2)", "sin(t)", "1", "t*cos(t)", "sin(2*pi*t)"}) {
        for (const char* w : {"1", "1+t"}) {
            const auto gamma = verified(w);
            const auto rf = field_ratio(f, gamma, 1.0, g);
            const auto prof = theta_profile(rf, 1.0);
            const auto s = check_subadditivity(prof, rf, gamma);
            EXPECT_GT(s.triples, 1000u);
            EXPECT_EQ(s.violations, 0u) << f << " / " << w << " excess " << s.worst_excess;
        }
    }
}

TEST(ExactOrder, Examples) {
    const auto one = verified("1");
    const Grid g = Grid::span(0, 50, 0.01);
    auto c = check_exact_order(field_ratio("1", one, 1.0, g), one, 1.0);
    EXPECT_EQ(c.clause_a, Verdict3::Pass);
    EXPECT_EQ(c.clause_b, Verdict3::Pass);
    EXPECT_EQ(c.clause_c, Verdict3::Pass);

    c = check_exact_order(field_ratio("2*t*sin(t^2)", one, 1.0, g), one, 1.0);
    EXPECT_EQ(c.clause_a, Verdict3::Pass);
    EXPECT_EQ(c.clause_c, Verdict3::Pass);
    EXPECT_EQ(c.subadditivity.violations, 0u);

    c = check_exact_order(field_ratio("exp(-t)", one, 1.0, g), one, 1.0);
    EXPECT_EQ(c.clause_a, Verdict3::Fail);
    EXPECT_EQ(c.clause_c, Verdict3::Fail);
    EXPECT_EQ(limsup_ratio(solve_scalar(fn("exp(-t)"), 1.0, 0.0, g), one).verdict, LimsupVerdict::Zero);
}

TEST(ExactOrder, ExponentialRateNeedsEveryRowPositive) {
    const Grid g = Grid::span(0, 20, 0.01);
    const auto et = verified("exp(t)", WeightClass::ExponentialRate, 1.0);
    ASSERT_TRUE(et.verified());
    const auto c = check_exact_order(field_ratio("exp(t)*cos(t)", et, 1.0, g), et, 1.0);
    ASSERT_TRUE(c.clause_c_prime.has_value());
    EXPECT_EQ(*c.clause_c_prime, Verdict3::Pass);
    EXPECT_EQ(c.clause_a, Verdict3::Pass);
}

TEST(ExpStability, Examples) {
    const Grid g = Grid::span(0, 20, 0.01);
    auto c = check_exponential_stability(fn("exp(-2*t)"), solve_scalar(fn("exp(-2*t)"), 1.0, 0.0, g));
    EXPECT_NEAR(c.L, 0.5, 1e-12);
    EXPECT_NEAR(c.eta_hat, 2.0, 1e-6);
    EXPECT_NEAR(c.beta_hat, 1.0, 1e-3);
    EXPECT_EQ(c.side_a, Verdict3::Pass);
    EXPECT_EQ(c.side_b, Verdict3::Pass);
    EXPECT_EQ(c.consistency, Consistency::Agree);

    c = check_exponential_stability(fn("1"), solve_scalar(fn("1"), 1.0, 0.0, g));
    EXPECT_FALSE(c.L_converged);
    EXPECT_EQ(c.side_a, Verdict3::Fail);
    EXPECT_EQ(c.side_b, Verdict3::Fail);
    EXPECT_EQ(c.consistency, Consistency::Agree);

    c = check_exponential_stability(fn("0"), solve_scalar(fn("0"), 1.0, 1.0, g));
    EXPECT_TRUE(c.F_trivial);
    EXPECT_EQ(c.side_a, Verdict3::Pass);
    EXPECT_EQ(c.side_b, Verdict3::Pass);
    EXPECT_NEAR(c.beta_hat, 1.0, 1e-9);
}

TEST(LogFit, ExactLine) {
    std::vector<double> t, v;
    for (int i = 0; i < 50; ++i) {
        t.push_back(i * 0.1);
        v.push_back(3.0 * std::exp(-0.7 * i * 0.1));
    }
    const auto f = fit_log_magnitude(t, v);
    EXPECT_NEAR(f.slope, -0.7, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(Liapunov, Examples) {
    const Grid g = Grid::span(0, 30, 0.01);
    EXPECT_NEAR(estimate_liapunov(sampled("exp(2*t)", g)).estimate, 2.0, 1e-12);
    EXPECT_NEAR(estimate_liapunov(sampled("exp(-t)", g)).estimate, -1.0, 1e-12);
    const auto e = estimate_liapunov(sampled("t*exp(t)", g));
    EXPECT_GE(e.estimate, 1.0);
    EXPECT_LE(e.estimate, 1.12);
    EXPECT_LT(e.trend, 0.0);
    EXPECT_FALSE(estimate_liapunov(sampled("0", g)).defined);
}

TEST(LePreservation, Examples) {
    const Grid g = Grid::span(0, 30, 0.01);
    const std::vector<double> eps = {0.05, 0.1, 0.2};
    auto c = check_le_preservation(std::vector{fn("exp(0.5*t)"), fn("0")}, 1.0, 1.0, eps, g, 16);
    EXPECT_EQ(c.verdict, Verdict3::Pass);
    c = check_le_preservation(std::vector{fn("exp(2*t)"), fn("0")}, 1.0, 1.0, eps, g, 16);
    EXPECT_EQ(c.verdict, Verdict3::Fail);
    EXPECT_EQ(c.per_epsilon[0][0].stabilization.verdict, Verdict3::Fail);
    c = check_le_preservation(std::vector{fn("0"), fn("0")}, 1.0, 1.0, eps, g, 16);
    EXPECT_EQ(c.verdict, Verdict3::Pass);
    for (const auto& row : c.per_epsilon)
        for (const auto& comp : row) EXPECT_EQ(comp.C_hat, 0.0);
}

TEST(DerivativeBounds, Examples) {
    const Grid g = Grid::span(0, 50, 0.01);
    SystemSpec s;
    s.A = Matrix::Constant(1, 1, -1.0);
    s.zeta = Vector::Zero(1);
    const auto one = verified("1");

    s.F = {fn("1")};
    auto x = solve_system(s, g);
    auto c = check_derivative_bounds(x, derivative_trajectory(x, s), forcing_trajectory(s, g), one, std::nullopt);
    EXPECT_TRUE(is_bounded(c.x_gamma.verdict));
    EXPECT_TRUE(is_bounded(c.dx_gamma.verdict));
    EXPECT_EQ(c.F_gamma.verdict, LimsupVerdict::PositiveFinite);

    s.F = {fn("2*t*sin(t^2)")};
    x = solve_system(s, g);
    c = check_derivative_bounds(x, derivative_trajectory(x, s), forcing_trajectory(s, g), one,
                                WeightFunction::parse("1+t"));
    EXPECT_EQ(c.x_gamma.verdict, LimsupVerdict::PositiveFinite);
    EXPECT_EQ(c.F_gamma.verdict, LimsupVerdict::Infinite);
    EXPECT_EQ(c.dx_Gamma->verdict, LimsupVerdict::PositiveFinite);
    EXPECT_EQ(c.F_Gamma->verdict, LimsupVerdict::PositiveFinite);
    EXPECT_EQ(c.gamma_Gamma->verdict, LimsupVerdict::Zero);

    s.F = {fn("0")};
    x = solve_system(s, g);
    c = check_derivative_bounds(x, derivative_trajectory(x, s), forcing_trajectory(s, g), one, std::nullopt);
    EXPECT_EQ(c.x_gamma.verdict, LimsupVerdict::Zero);
    EXPECT_EQ(c.dx_gamma.verdict, LimsupVerdict::Zero);
    EXPECT_EQ(c.F_gamma.verdict, LimsupVerdict::Zero);
}

TEST(CrossCheck, ScalarExamples) {
    auto out = cross_check(scalar_scenario("4.3", "1", "1", WeightClass::NonDecreasing, 50));
    EXPECT_EQ(out.report.condition, Verdict3::Pass);
    EXPECT_EQ(out.report.consistency, Consistency::Agree);

    out = cross_check(scalar_scenario("4.12", "2*t*sin(t^2)", "1", WeightClass::NonDecreasing, 50));
    EXPECT_EQ(out.report.condition, Verdict3::Pass);
    EXPECT_EQ(out.report.simulation, Verdict3::Pass);
    EXPECT_EQ(out.report.consistency, Consistency::Agree);
    EXPECT_TRUE(out.artifacts.profile.has_value());

    out = cross_check(scalar_scenario("4.3", "t", "1", WeightClass::NonDecreasing, 50));
    EXPECT_EQ(out.report.condition, Verdict3::Fail);
    EXPECT_EQ(out.report.consistency, Consistency::Agree);

    out = cross_check(scalar_scenario("exp-stability", "exp(-2*t)", "1", WeightClass::Unverified, 20));
    EXPECT_EQ(out.report.consistency, Consistency::Agree);

    EXPECT_THROW((void)cross_check(scalar_scenario("9.9", "1", "1", WeightClass::NonDecreasing, 50)),
                 std::invalid_argument);
}

TEST(CrossCheck, UnstableDominant) {
    Scenario s;
    s.id = "ud";
    s.theorem = "unstable-dominant";
    s.A = Matrix::Zero(2, 2);
    (*s.A)(0, 0) = 1.0;
    s.zeta = Vector::Zero(2);
    s.forcing = {fn("exp(2*t)*cos(t)"), fn("0")};
    s.weight = WeightFunction::parse("exp(2*t)", WeightClass::ExponentialRate, 2.0);
    s.grid = Grid::span(0, 20, 0.01);
    auto out = cross_check(s);
    EXPECT_EQ(out.report.condition, Verdict3::Pass);
    EXPECT_EQ(out.report.simulation, Verdict3::Pass);
    EXPECT_EQ(out.report.consistency, Consistency::Agree);
    // particular solution e^{2t}(cos t + sin t)/2 has amplitude 1/√2
    EXPECT_NEAR(out.artifacts.solution_limsup->final_estimate, std::sqrt(0.5), 1e-3);

    s.forcing = {fn("0"), fn("0")};
    s.zeta = Vector::Ones(2);
    out = cross_check(s);
    EXPECT_EQ(out.report.condition, Verdict3::Fail);
    EXPECT_EQ(out.report.simulation, Verdict3::Fail);
    EXPECT_EQ(out.report.consistency, Consistency::Agree);

    Scenario one;
    one.id = "ud1";
    one.theorem = "unstable-dominant";
    one.A = Matrix::Zero(1, 1);
    one.zeta = Vector::Zero(1);
    one.forcing = {fn("exp(t)")};
    one.weight = WeightFunction::parse("exp(t)", WeightClass::ExponentialRate, 1.0);
    one.grid = Grid::span(0, 20, 0.01);
    out = cross_check(one);
    EXPECT_EQ(out.report.consistency, Consistency::Agree);
    EXPECT_EQ(out.report.simulation, Verdict3::Pass);

    one.A = Matrix::Constant(1, 1, 3.0);  // β = 1 < λ(A) = 3
    out = cross_check(one);
    EXPECT_EQ(out.report.consistency, Consistency::Inconclusive);
}

TEST(CrossCheck, LiapunovJordanBlock) {
    Scenario s;
    s.id = "le";
    s.theorem = "5.11";
    s.A = Matrix(2, 2);
    *s.A << 1, 1, 0, 1;
    s.zeta = Vector::Zero(2);
    s.forcing = {fn("sin(t)"), fn("cos(t)")};
    s.weight = WeightFunction::parse("1");
    s.grid = Grid::span(0, 30, 0.01);
    s.theta_count = 16;
    const auto out = cross_check(s);
    EXPECT_EQ(out.report.consistency, Consistency::Agree);
    const double est = out.report.clauses["liapunov"]["estimate"]["estimate"].get<double>();
    EXPECT_GE(est, 0.90);
    EXPECT_LE(est, 1.15);
}

TEST(Properties, ScaleEquivariance) {
    const Grid g = Grid::span(0, 50, 0.01);
    for (const char* f : {"1", "2*t*sin(t^2)", "exp(-t)", "t", "1/(1+t)"}) {
        for (const char* w : {"1", "1+t"}) {
            const auto base = verified(w);
            const auto rf = field_ratio(f, base, 1.0, g, 16);
            const auto y = solve_scalar(fn(f), 1.0, 0.0, g);
            const auto v0 = check_bigO(rf, true).verdict;
            const auto l0 = limsup_ratio(y, base).verdict;
            for (double c : {-3.0, 1e-4, 250.0}) {
                const auto scaled_f = ScalarFunction(detail::mul(Expr::constant(c), parse_expr(f)));
                const auto gw = base.scaled(std::fabs(c));
                const auto field = moving_average_field(scaled_f, uniform_theta_grid(1.0, 16), g);
                EXPECT_EQ(check_bigO(ratio_field(field, log_weight_samples(gw, g)), true).verdict, v0) << f << " " << c;
                EXPECT_EQ(limsup_ratio(solve_scalar(scaled_f, 1.0, 0.0, g), gw).verdict, l0) << f << " " << c;
            }
        }
    }
}

TEST(Properties, HorizonMonotonicity) {
    for (const char* f : {"1", "sin(t)", "exp(-t)", "t", "2*t*sin(t^2)", "1/(1+t)"}) {
        const auto one = WeightFunction::parse("1");
        const auto a = limsup_ratio(solve_scalar(fn(f), 1.0, 0.0, Grid::span(0, 50, 0.01)), one).verdict;
        const auto b = limsup_ratio(solve_scalar(fn(f), 1.0, 0.0, Grid::span(0, 100, 0.01)), one).verdict;
        if (a != LimsupVerdict::Inconclusive && b != LimsupVerdict::Inconclusive) {
            EXPECT_EQ(a, b) << f;
        }
    }
}
