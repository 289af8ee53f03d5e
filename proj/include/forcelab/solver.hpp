#pragma once

// Exact-integrating-factor solvers for y' = -αy + f and x' = Ax + F,
// resolvent integrals, and residual checks of the representation
// identities that tie y, x and the moving averages together.
//
// Each step is y(t+h) = e^{rh} y(t) + ∫_0^h e^{r(h-u)} f(t+u) du, so the only
// error left is panel quadrature.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "forcelab/expr.hpp"
#include "forcelab/forcing.hpp"
#include "forcelab/linalg.hpp"
#include "forcelab/quadrature.hpp"
#include "forcelab/trajectory.hpp"

namespace forcelab {

/// Solves u' = rate·u + g on the grid with u(t_start) = u0.
template <class F>
Trajectory solve_linear_scalar(const F& g, double rate, double u0, const Grid& grid,
                               double quad_tol = kDefaultQuadTol) {
    grid.validate();
    Trajectory y(grid, 1, "y");
    y.reference = "rate=" + format_double(rate);
    const double h = grid.h;
    const double growth = std::exp(rate * h);
    y.at(0) = u0;
    for (std::size_t k = 0; k + 1 < grid.n; ++k) {
        const double tk = grid.t(k);
        auto integrand = [&](double u) { return std::exp(rate * (h - u)) * g(tk + u); };
        y.at(k + 1) = growth * y.at(k) + quad::integral(integrand, 0.0, h, quad_tol);
    }
    y.check_finite();
    return y;
}

/// y' = -αy + f, y(t_start) = y0.
template <class F>
Trajectory solve_scalar(const F& f, double alpha, double y0, const Grid& grid, double quad_tol = kDefaultQuadTol) {
    Trajectory y = solve_linear_scalar(f, -alpha, y0, grid, quad_tol);
    y.reference = "alpha=" + format_double(alpha);
    return y;
}

/// u' = +αu + g, u(t_start) = u0.
template <class F>
Trajectory solve_scalar_general_rate(const F& g, double alpha, double u0, const Grid& grid,
                                     double quad_tol = kDefaultQuadTol) {
    Trajectory u = solve_linear_scalar(g, alpha, u0, grid, quad_tol);
    u.label = "u";
    u.reference = "growth alpha=" + format_double(alpha);
    return u;
}

/// ∫_0^t exp(rate·(t-s) + log_w(s) - log_w(t)) ds, evaluated in log space so
/// fast-growing weights do not overflow. With rate = -α this is the weighted
/// exponential convolution; with log_w ≡ 0 it is the plain kernel integral.
template <class LogW>
double exp_kernel_weighted_integral(double rate, const LogW& log_w, double t, double rel_tol = 1e-10) {
    if (!(t > 0.0)) return 0.0;
    const double lw_t = log_w(t);
    auto integrand = [&](double s) { return std::exp(rate * (t - s) + log_w(s) - lw_t); };
    // Split off the kernel's boundary layer near s = t, where most of the
    // mass sits for large |rate|·t.
    const double layer = rate < 0.0 ? std::min(t, 40.0 / -rate) : t;
    double total = quad::integral_relative(integrand, t - layer, t, rel_tol);
    if (layer < t) total += quad::integral_relative(integrand, 0.0, t - layer, rel_tol);
    return total;
}

class IncommensurateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks ∫_{t-θ}^t f = y(t) - y(t-θ) + ∫_{t-θ}^t y for t ≥ θ, where y
/// solves y' = -y + f, y(t_start) = 0. The left side is direct quadrature of
/// f; ∫y over each step uses the exact step formula
///   ∫_0^h y(t_k+u) du = y_k (1-e^{-h}) + ∫_0^h (1-e^{-(h-v)}) f(t_k+v) dv.
template <class F>
Residual verify_ave_identity(const F& f, const Trajectory& y, double theta, double tol,
                             double quad_tol = kDefaultQuadTol) {
    const Grid& g = y.grid;
    const double m_real = theta / g.h;
    const double m_round = std::round(m_real);
    if (!(theta > 0.0) || std::fabs(m_real - m_round) > 1e-9 * std::max(1.0, m_round))
        throw IncommensurateError("verify_ave_identity: theta=" + format_double(theta) +
                                  " is not a multiple of the grid step");
    const auto m = static_cast<std::size_t>(m_round);
    const double h = g.h;
    const double decay = -std::expm1(-h);
    std::vector<double> step_integral(g.n, 0.0);  // ∫ over [t_{k-1}, t_k]
    for (std::size_t k = 0; k + 1 < g.n; ++k) {
        const double tk = g.t(k);
        auto kernel = [&](double v) { return -std::expm1(-(h - v)) * f(tk + v); };
        step_integral[k + 1] = y.at(k) * decay + quad::integral(kernel, 0.0, h, quad_tol);
    }
    Residual r{"ave identity theta=" + format_double(theta), 0.0, 0.0, tol, 0};
    double window = 0.0;
    for (std::size_t k = 1; k <= m && k < g.n; ++k) window += step_integral[k];
    for (std::size_t k = m; k < g.n; ++k) {
        if (k > m) window += step_integral[k] - step_integral[k - m];
        // Recompute the window sum outright now and then to cap drift.
        if (k % 1024 == 0) {
            window = 0.0;
            for (std::size_t i = k - m + 1; i <= k; ++i) window += step_integral[i];
        }
        const double t = g.t(k);
        const double lhs = quad::integral(f, t - theta, t, quad_tol);
        r.observe(t, lhs - (y.at(k) - y.at(k - m) + window));
    }
    return r;
}

/// Checks y(t) = (1/Δ)∫_0^t e^{-(t-s)} f_Δ(s) ds + I(t) - ∫_0^t e^{-(t-s)} I(s) ds
/// with y from solve_scalar (α = 1, y(0) = 0) and f_Δ, I from decompose.
template <class F>
Residual verify_representation(const F& f, double delta_width, const Grid& grid, double tol,
                               double quad_tol = kDefaultQuadTol) {
    if (grid.t_start != 0.0) throw std::invalid_argument("verify_representation: grid must start at 0");
    const Trajectory y = solve_scalar(f, 1.0, 0.0, grid, quad_tol);
    const Decomposition dec = decompose(f, delta_width, grid, quad_tol);
    auto g = [&](double s) { return dec.f_delta(s) / delta_width - dec.integral_delta(s); };
    const Trajectory conv = solve_scalar(g, 1.0, 0.0, grid, quad_tol);
    Residual r{"y representation via f_Delta and I", 0.0, 0.0, tol, 0};
    for (std::size_t k = 0; k < grid.n; ++k) r.observe(grid.t(k), y.at(k) - (conv.at(k) + dec.I.at(k)));
    return r;
}

// ---------------------------------------------------------------------------
// Systems

/// x' = Ax + F(t), x(0) = ζ.
struct SystemSpec {
    Matrix A;
    std::vector<ScalarFunction> F;
    Vector zeta;

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(A.rows()); }
    [[nodiscard]] Vector forcing(double t) const {
        Vector v(A.rows());
        for (Eigen::Index i = 0; i < A.rows(); ++i) v[i] = F[static_cast<std::size_t>(i)](t);
        return v;
    }
    void validate() const {
        if (A.rows() < 1 || A.rows() != A.cols()) throw std::invalid_argument("system matrix must be square, d >= 1");
        if (A.rows() > kMaxDimension) throw std::invalid_argument("system dimension above 50");
        if (!A.allFinite()) throw std::invalid_argument("system matrix has non-finite entries");
        if (F.size() != dim()) throw std::invalid_argument("forcing has " + std::to_string(F.size()) +
                                                          " components, system has " + std::to_string(dim()));
        if (static_cast<std::size_t>(zeta.size()) != dim())
            throw std::invalid_argument("initial condition has the wrong dimension");
    }
};

/// exp(uA) memoized on u. Adaptive panels on [0, h] land on the same local
/// offsets in every step, so the cache stays small.
class PropagatorCache {
public:
    explicit PropagatorCache(Matrix A) : A_(std::move(A)) {}
    const Matrix& operator()(double u) {
        auto it = cache_.find(u);
        if (it == cache_.end()) {
            if (cache_.size() > 200000) cache_.clear();
            it = cache_.emplace(u, matrix_exponential(A_, u)).first;
        }
        return it->second;
    }
    [[nodiscard]] const Matrix& A() const noexcept { return A_; }

private:
    Matrix A_;
    std::map<double, Matrix> cache_;
};

/// Vector analogue of solve_linear_scalar for x' = Ax + G(t).
template <class G>
Trajectory solve_linear_system(const Matrix& A, const G& forcing, const Vector& x0, const Grid& grid,
                               double quad_tol = kDefaultQuadTol) {
    grid.validate();
    const auto d = static_cast<std::size_t>(A.rows());
    Trajectory x(grid, d, "x");
    PropagatorCache phi(A);
    const double h = grid.h;
    const Matrix step = matrix_exponential(A, h);
    Vector cur = x0;
    x.set(0, cur);
    for (std::size_t k = 0; k + 1 < grid.n; ++k) {
        const double tk = grid.t(k);
        auto integrand = [&](double u) -> Vector { return phi(h - u) * forcing(tk + u); };
        const Vector inc = quad::integral(integrand, 0.0, h, quad_tol);
        cur = step * cur + inc;
        x.set(k + 1, cur);
    }
    x.check_finite();
    return x;
}

inline Trajectory solve_system(const SystemSpec& spec, const Grid& grid, double quad_tol = kDefaultQuadTol) {
    spec.validate();
    auto forcing = [&spec](double t) { return spec.forcing(t); };
    Trajectory x = solve_linear_system(spec.A, forcing, spec.zeta, grid, quad_tol);
    x.reference = "A";
    return x;
}

/// x'(t_k) = A x(t_k) + F(t_k).
inline Trajectory derivative_trajectory(const Trajectory& x, const SystemSpec& spec) {
    Trajectory dx(x.grid, x.dim, "dx");
    for (std::size_t k = 0; k < x.size(); ++k) dx.set(k, spec.A * x.vec(k) + spec.forcing(x.t(k)));
    return dx;
}

/// Largest deviation of the central difference of x from x' over interior
/// points, with the O(h²) bound it should meet.
struct DerivativeCheck {
    double max_deviation = 0.0;
    double bound = 0.0;
    bool pass = false;
};

inline DerivativeCheck check_derivative_fd(const Trajectory& x, const Trajectory& dx) {
    DerivativeCheck c;
    const double h = x.grid.h;
    double second = 0.0;  // max ‖x''‖ from second differences
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        const Vector fd = (x.vec(k + 1) - x.vec(k - 1)) / (2.0 * h);
        c.max_deviation = std::max(c.max_deviation, (fd - dx.vec(k)).cwiseAbs().maxCoeff());
        second = std::max(second, ((dx.vec(k + 1) - dx.vec(k - 1)) / (2.0 * h)).cwiseAbs().maxCoeff());
    }
    // |central difference - x'| ≤ h²/6 max|x'''| ≈ h/3 · (h max|x''|) with slack.
    c.bound = h * h * (1.0 + second / h);
    c.pass = c.max_deviation <= c.bound;
    return c;
}

/// Checks x = y + Φζ + ∫Φ(t-s)(I+A)y and y = x - e^{-t}ζ - ∫e^{-(t-s)}(I+A)x,
/// where y solves y' = -y + F, y(0) = 0 componentwise. Off-grid values of y
/// and x come from the exact step formulas (nested quadrature), so neither
/// side is interpolated.
inline ResidualReport verify_cross_representations(const SystemSpec& spec, const Grid& grid, double tol,
                                                   double quad_tol = kDefaultQuadTol) {
    spec.validate();
    if (grid.t_start != 0.0) throw std::invalid_argument("verify_cross_representations: grid must start at 0");
    const auto d = static_cast<Eigen::Index>(spec.dim());
    const Matrix IA = Matrix::Identity(d, d) + spec.A;
    const double inner_tol = 0.1 * quad_tol;

    const Trajectory x = solve_system(spec, grid, quad_tol);
    const Matrix minus_identity = -Matrix::Identity(d, d);
    auto F = [&spec](double t) { return spec.forcing(t); };
    const Trajectory y = solve_linear_system(minus_identity, F, Vector::Zero(d), grid, quad_tol);

    // Dense outputs inside step k.
    PropagatorCache phi(spec.A);
    auto y_at = [&](std::size_t k, double u) -> Vector {
        if (u <= 0.0) return y.vec(k);
        const double tk = grid.t(k);
        auto in = [&](double v) -> Vector { return std::exp(-(u - v)) * F(tk + v); };
        return std::exp(-u) * y.vec(k) + quad::integral(in, 0.0, u, inner_tol);
    };
    PropagatorCache phi_inner(spec.A);
    auto x_at = [&](std::size_t k, double u) -> Vector {
        if (u <= 0.0) return x.vec(k);
        const double tk = grid.t(k);
        auto in = [&](double v) -> Vector { return phi_inner(u - v) * F(tk + v); };
        return phi_inner(u) * x.vec(k) + quad::integral(in, 0.0, u, inner_tol);
    };

    const double h = grid.h;
    const Matrix step = matrix_exponential(spec.A, h);
    const double decay = std::exp(-h);
    Vector w = Vector::Zero(d);  // ∫_0^t Φ(t-s)(I+A)y(s) ds
    Vector z = Vector::Zero(d);  // ∫_0^t e^{-(t-s)}(I+A)x(s) ds
    Residual rx{"x = y + Phi zeta + int Phi (I+A) y", 0.0, 0.0, tol, 0};
    Residual ry{"y = x - e^-t zeta - int e^-(t-s) (I+A) x", 0.0, 0.0, tol, 0};
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.t(k);
        const Matrix phi_t = matrix_exponential(spec.A, t);
        rx.observe(t, (x.vec(k) - (y.vec(k) + phi_t * spec.zeta + w)).cwiseAbs().maxCoeff());
        ry.observe(t, (y.vec(k) - (x.vec(k) - std::exp(-t) * spec.zeta - z)).cwiseAbs().maxCoeff());
        if (k + 1 == grid.n) break;
        auto wi = [&](double u) -> Vector { return phi(h - u) * (IA * y_at(k, u)); };
        auto zi = [&](double u) -> Vector { return std::exp(-(h - u)) * (IA * x_at(k, u)); };
        w = step * w + quad::integral(wi, 0.0, h, quad_tol);
        z = decay * z + quad::integral(zi, 0.0, h, quad_tol);
    }
    ResidualReport rep;
    rep.parts = {rx, ry};
    return rep;
}

/// M(t) = ∫_0^t ‖Φ(t-s)‖ γ(s)/γ(t) ds at each t, with γ given by its log.
struct ResolventTrace {
    std::vector<double> times;
    std::vector<double> values;
    NormKind norm = NormKind::Spectral;

    /// |M(T) - M(T/2)| ≤ 1e-2·M(T/2) with T the last time.
    [[nodiscard]] bool plateau(double rel = 1e-2) const {
        if (times.size() < 2) return false;
        const double T = times.back();
        std::size_t half = 0;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (std::fabs(times[i] - 0.5 * T) < std::fabs(times[half] - 0.5 * T)) half = i;
        return std::fabs(values.back() - values[half]) <= rel * values[half];
    }
};

template <class LogW>
ResolventTrace resolvent_integral(const Matrix& A, const LogW& log_gamma, const std::vector<double>& times,
                                  NormKind norm = NormKind::Spectral, double rel_tol = 1e-10) {
    ResolventTrace out;
    out.times = times;
    out.norm = norm;
    for (double t : times) {
        if (t <= 0.0) {
            out.values.push_back(0.0);
            continue;
        }
        const double lg_t = log_gamma(t);
        // Substituting u = t - s: ∫_0^t ‖Φ(u)‖ γ(t-u)/γ(t) du.
        auto integrand = [&](double u) {
            return operator_norm(matrix_exponential(A, u), norm) * std::exp(log_gamma(t - u) - lg_t);
        };
        out.values.push_back(quad::integral_relative(integrand, 0.0, t, rel_tol));
    }
    return out;
}

}  // namespace forcelab
