#pragma once

// Moving averages f_θ(t) = ∫_{(t-θ)⁺}^t f(s) ds, their (θ, t) fields, the
// splitting f = f_Δ/Δ + δ with I = ∫δ, and forcings of the form β'·sin(β).

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "forcelab/expr.hpp"
#include "forcelab/quadrature.hpp"
#include "forcelab/trajectory.hpp"

namespace forcelab {

inline constexpr double kDefaultQuadTol = 1e-9;
inline constexpr int kDefaultRefinement = 8;

/// ∫_{max(t-θ, start)}^t f(s) ds by adaptive quadrature. f is taken to
/// vanish before `start`.
template <class F>
double moving_average(const F& f, double theta, double t, double quad_tol = kDefaultQuadTol, double start = 0.0) {
    if (theta < 0.0) throw std::invalid_argument("moving_average: theta must be non-negative");
    const double lo = std::max(t - theta, start);
    if (!(t > lo)) return 0.0;
    return quad::integral(f, lo, t, quad_tol);
}

/// P(t) = ∫_start^t f on a cell partition refined from a time grid.
class PrefixIntegral {
public:
    PrefixIntegral() = default;

    /// Cells are `refinement` times finer than the grid step; the partition
    /// always starts at `start` so the truncation point is a cell boundary.
    template <class F>
    PrefixIntegral(const F& f, const Grid& grid, double quad_tol, int refinement = kDefaultRefinement,
                   std::vector<double> extra_breaks = {}, double start = 0.0)
        : start_(start) {
        std::vector<double> coarse;
        const double end = grid.t_end();
        if (!(end > start)) throw std::invalid_argument("PrefixIntegral: grid must extend beyond its start");
        const auto cells = static_cast<std::size_t>(std::ceil((end - start) / grid.h - 1e-9));
        for (std::size_t k = 0; k <= cells; ++k) coarse.push_back(std::min(end, start + grid.h * static_cast<double>(k)));
        coarse.back() = end;
        const auto bp = quad::refine_breakpoints(coarse, refinement, extra_breaks);
        cum_ = std::make_shared<quad::CumulativeIntegral>(f, bp, quad_tol);
    }

    [[nodiscard]] double operator()(double t) const { return (*cum_)(t); }
    [[nodiscard]] double start() const noexcept { return start_; }
    [[nodiscard]] double upper() const { return cum_->upper(); }

    /// f_θ(t) = P(t) - P(max(t-θ, start)).
    [[nodiscard]] double moving_average(double theta, double t) const {
        if (theta <= 0.0) return 0.0;
        const double lo = std::max(t - theta, start_);
        if (!(t > lo)) return 0.0;
        return (*cum_)(t) - (*cum_)(lo);
    }

private:
    std::shared_ptr<const quad::CumulativeIntegral> cum_;
    double start_ = 0.0;
};

struct MovingAverageField {
    std::vector<double> theta;
    Grid grid;
    std::vector<double> values;  // values[j * grid.n + k] = f_{θ_j}(t_k)
    double quad_tol = kDefaultQuadTol;

    [[nodiscard]] double at(std::size_t j, std::size_t k) const { return values[j * grid.n + k]; }
    [[nodiscard]] double& at(std::size_t j, std::size_t k) { return values[j * grid.n + k]; }
    [[nodiscard]] std::size_t rows() const noexcept { return theta.size(); }

    /// Row j as a scalar trajectory.
    [[nodiscard]] Trajectory row(std::size_t j) const {
        Trajectory out(grid, 1, "f_theta");
        for (std::size_t k = 0; k < grid.n; ++k) out.at(k) = at(j, k);
        return out;
    }
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline void validate_theta_grid(const std::vector<double>& theta) {
    if (theta.empty()) throw std::invalid_argument("theta grid is empty");
    for (std::size_t j = 0; j < theta.size(); ++j) {
        if (theta[j] < 0.0) throw std::invalid_argument("theta grid must be non-negative");
        if (j > 0 && !(theta[j] > theta[j - 1])) throw std::invalid_argument("theta grid must be increasing");
    }
}

/// count equispaced values 0, Δ/(count-1), ..., Δ.
inline std::vector<double> uniform_theta_grid(double delta, int count) {
    if (count < 2) throw std::invalid_argument("theta grid needs at least two points");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) out[j] = delta * j / (count - 1);
    out.back() = delta;
    return out;
}

/// Field assembled from one prefix integral: f_θ(t) = P(t) - P((t-θ)⁺).
inline MovingAverageField moving_average_field(const PrefixIntegral& P, std::vector<double> theta_grid,
                                               const Grid& grid, double quad_tol) {
    validate_theta_grid(theta_grid);
    MovingAverageField field;
    field.theta = std::move(theta_grid);
    field.grid = grid;
    field.quad_tol = quad_tol;
    field.values.assign(field.theta.size() * grid.n, 0.0);
    std::vector<double> pt(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k) pt[k] = P(grid.t(k));
    for (std::size_t j = 0; j < field.theta.size(); ++j) {
        const double th = field.theta[j];
        if (th == 0.0) continue;
        for (std::size_t k = 0; k < grid.n; ++k) {
            const double t = grid.t(k);
            const double lo = std::max(t - th, P.start());
            field.at(j, k) = t > lo ? pt[k] - P(lo) : 0.0;
        }
    }
    return field;
}

template <class F>
MovingAverageField moving_average_field(const F& f, std::vector<double> theta_grid, const Grid& grid,
                                        double quad_tol = kDefaultQuadTol, int refinement = kDefaultRefinement) {
    validate_theta_grid(theta_grid);
    // Cell boundaries at every t_k - θ_j would be ideal; the refinement
    // factor keeps the interpolant accurate between them instead.
    const PrefixIntegral P(f, grid, quad_tol, refinement);
    return moving_average_field(P, std::move(theta_grid), grid, quad_tol);
}

/// Wide CSV: t, then one column per θ.
inline void write_field_csv(std::ostream& os, const MovingAverageField& field) {
    os << "t";
    for (double th : field.theta) os << ",theta=" << format_double(th);
    os << '\n';
    for (std::size_t k = 0; k < field.grid.n; ++k) {
        os << format_double(field.grid.t(k));
        for (std::size_t j = 0; j < field.rows(); ++j) os << ',' << format_double(field.at(j, k));
        os << '\n';
    }
}

/// δ(t) = f(t) - f_Δ(t)/Δ and I(t) = ∫_0^t δ.
struct Decomposition {
    double delta_width = 1.0;  // Δ
    Trajectory delta;
    Trajectory I;
    PrefixIntegral prefix;                              // ∫_0^t f
    std::shared_ptr<const quad::CumulativeIntegral> I_of;  // I at arbitrary s in [0, T]

    [[nodiscard]] double f_delta(double s) const { return prefix.moving_average(delta_width, s); }
    [[nodiscard]] double integral_delta(double s) const { return (*I_of)(s); }
};

template <class F>
Decomposition decompose(const F& f, double delta_width, const Grid& grid, double quad_tol = kDefaultQuadTol,
                        int refinement = kDefaultRefinement) {
    if (!(delta_width > 0.0)) throw std::invalid_argument("decompose: delta must be positive");
    Decomposition dec;
    dec.delta_width = delta_width;
    // f_Δ has a kink at s = Δ, so make it a cell boundary.
    const std::vector<double> kink = {delta_width};
    dec.prefix = PrefixIntegral(f, grid, quad_tol, refinement, kink);
    const PrefixIntegral& P = dec.prefix;
    auto delta_fn = [&f, &P, delta_width](double s) { return f(s) - P.moving_average(delta_width, s) / delta_width; };

    std::vector<double> coarse = {0.0};
    const auto cells = static_cast<std::size_t>(std::ceil(grid.t_end() / grid.h - 1e-9));
    for (std::size_t k = 1; k <= cells; ++k) coarse.push_back(std::min(grid.t_end(), grid.h * static_cast<double>(k)));
    coarse.back() = grid.t_end();
    const auto bp = quad::refine_breakpoints(coarse, refinement, kink);
    dec.I_of = std::make_shared<quad::CumulativeIntegral>(delta_fn, bp, quad_tol);

    dec.delta = Trajectory(grid, 1, "delta");
    dec.I = Trajectory(grid, 1, "I");
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.t(k);
        dec.delta.at(k) = delta_fn(t);
        dec.I.at(k) = (*dec.I_of)(t);
    }
    return dec;
}

enum class ThetaRule { GaussLegendre, Simpson };

/// Nodes for the θ-integral (1/Δ)∫_0^Δ f_θ dθ.
inline quad::Rule theta_rule(double delta_width, int count, ThetaRule kind) {
    return kind == ThetaRule::GaussLegendre ? quad::gauss_legendre(count, 0.0, delta_width)
                                            : quad::composite_simpson(count, 0.0, delta_width);
}

/// Checks I(t) = (1/Δ)∫_0^Δ f_θ(t) dθ for t ≥ Δ on the field, and
/// I(t) = f_Δ(t) - (1/Δ)∫_0^t f_Δ for t < Δ with f_Δ from independent
/// nested adaptive quadrature.
template <class F>
ResidualReport verify_decomposition_identity(const F& f, const Decomposition& dec, const MovingAverageField& field,
                                             double tol, ThetaRule kind = ThetaRule::GaussLegendre) {
    const double D = dec.delta_width;
    const int count = static_cast<int>(field.theta.size());
    if (count < 33) throw std::invalid_argument("verify_decomposition_identity: need at least 33 theta nodes");
    const quad::Rule rule = theta_rule(D, count, kind);
    for (int j = 0; j < count; ++j)
        if (std::fabs(rule.nodes[j] - field.theta[j]) > 1e-12 * std::max(1.0, D))
            throw std::invalid_argument("verify_decomposition_identity: field theta grid does not match the theta rule");
    if (field.grid.n != dec.I.grid.n || field.grid.h != dec.I.grid.h || field.grid.t_start != dec.I.grid.t_start)
        throw std::invalid_argument("verify_decomposition_identity: time grids differ");

    Residual late{"I = mean of f_theta over [0,Delta]", 0.0, 0.0, tol, 0};
    Residual early{"I = f_Delta - mean integral of f_Delta on [0,Delta)", 0.0, 0.0, tol, 0};
    const double qtol = std::min(field.quad_tol, 1e-3 * tol);
    for (std::size_t k = 0; k < field.grid.n; ++k) {
        const double t = field.grid.t(k);
        if (t >= D) {
            double s = 0.0;
            for (int j = 0; j < count; ++j) s += rule.weights[j] * field.at(j, k);
            late.observe(t, dec.I.at(k) - s / D);
        } else {
            auto fD = [&](double s) { return moving_average(f, D, s, 0.1 * qtol); };
            const double rhs = fD(t) - (t > 0.0 ? quad::integral(fD, 0.0, t, qtol) : 0.0) / D;
            early.observe(t, dec.I.at(k) - rhs);
        }
    }
    ResidualReport rep;
    rep.parts = {late, early};
    return rep;
}

/// f = β'·sin(β) with the closed-form moving average
/// f_θ(t) = cos(β(max(t-θ, start))) - cos(β(t)).
struct OscillatoryForcing {
    Expr beta;
    Expr beta_prime;
    ScalarFunction f;
    double start = 0.0;

    [[nodiscard]] double operator()(double t) const { return f(t); }
    [[nodiscard]] double exact_moving_average(double theta, double t) const {
        const double lo = std::max(t - theta, start);
        if (!(t > lo)) return 0.0;
        return std::cos(beta(lo)) - std::cos(beta(t));
    }
};

class MonotonicityError : public std::runtime_error {
public:
    MonotonicityError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    [[nodiscard]] double t() const noexcept { return t_; }

private:
    double t_;
};

/// Builds β'·sin(β) after checking on [start, t_end] that β' ≥ 0 at every
/// sample and β increases strictly between consecutive samples (isolated
/// zeros of β', like β = t² at 0, are allowed).
inline OscillatoryForcing oscillatory_forcing(const Expr& beta, double t_end, double start = 0.0,
                                              int samples = 20000) {
    OscillatoryForcing out;
    out.beta = beta;
    out.beta_prime = differentiate(beta);
    out.start = start;
    double prev = beta(start);
    for (int i = 0; i <= samples; ++i) {
        const double t = start + (t_end - start) * i / samples;
        const double d = out.beta_prime(t);
        if (d < 0.0) throw MonotonicityError("beta is decreasing near t=" + format_double(t), t);
        if (i > 0) {
            const double b = beta(t);
            if (!(b > prev)) throw MonotonicityError("beta is not strictly increasing near t=" + format_double(t), t);
            prev = b;
        }
    }
    out.f = ScalarFunction(detail::mul(out.beta_prime, Expr::unary(UnaryOp::Sin, beta)), {}, start);
    return out;
}

}  // namespace forcelab
