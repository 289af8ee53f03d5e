#pragma once

// Uniform time grids and sampled trajectories (scalar or d-vector valued).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace forcelab {

/// Shortest text that round-trips is not stable across libraries, so every
/// number written to a report or CSV uses 17 significant digits.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Grid {
    double t_start = 0.0;
    double h = 0.0;
    std::size_t n = 0;

    Grid() = default;
    Grid(double start, double step, std::size_t count) : t_start(start), h(step), n(count) { validate(); }

    /// Grid from t_start to t_end (inclusive) with step h; (t_end - t_start)
    /// must be an integer multiple of h up to rounding.
    static Grid span(double t_start, double t_end, double h) {
        if (!(h > 0.0)) throw std::invalid_argument("grid step must be positive");
        const double steps = (t_end - t_start) / h;
        const double k = std::round(steps);
        if (std::fabs(steps - k) > 1e-8 * std::max(1.0, k))
            throw std::invalid_argument("grid span is not a multiple of the step");
        return Grid(t_start, h, static_cast<std::size_t>(k) + 1);
    }

    void validate() const {
        if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid step must be positive");
        if (n < 2) throw std::invalid_argument("grid needs at least two points");
        if (!(t_start >= 0.0)) throw std::invalid_argument("grid must start at t >= 0");
    }

    [[nodiscard]] double t(std::size_t k) const { return t_start + h * static_cast<double>(k); }
    [[nodiscard]] double t_end() const { return t(n - 1); }
    [[nodiscard]] std::vector<double> times() const {
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = t(k);
        return out;
    }
    /// Index of the grid point nearest to t (clamped).
    [[nodiscard]] std::size_t index_of(double tt) const {
        const double k = std::round((tt - t_start) / h);
        if (k <= 0) return 0;
        return std::min(n - 1, static_cast<std::size_t>(k));
    }
};

enum class NormKind { Spectral, One };

inline const char* norm_name(NormKind k) { return k == NormKind::Spectral ? "spectral" : "one"; }

struct Trajectory {
    Grid grid;
    std::size_t dim = 1;
    std::vector<double> values;  // row-major: values[k * dim + i]
    std::string label;
    std::string reference;  // e.g. "alpha=1" or the matrix A

    Trajectory() = default;
    Trajectory(Grid g, std::size_t d, std::string lbl = {})
        : grid(g), dim(d), values(g.n * d, 0.0), label(std::move(lbl)) {}

    [[nodiscard]] std::size_t size() const noexcept { return grid.n; }
    [[nodiscard]] double t(std::size_t k) const { return grid.t(k); }
    [[nodiscard]] double& at(std::size_t k, std::size_t i = 0) { return values[k * dim + i]; }
    [[nodiscard]] double at(std::size_t k, std::size_t i = 0) const { return values[k * dim + i]; }
    [[nodiscard]] double operator[](std::size_t k) const { return values[k * dim]; }

    [[nodiscard]] Eigen::VectorXd vec(std::size_t k) const {
        return Eigen::Map<const Eigen::VectorXd>(values.data() + k * dim, static_cast<Eigen::Index>(dim));
    }
    void set(std::size_t k, const Eigen::VectorXd& v) {
        for (std::size_t i = 0; i < dim; ++i) values[k * dim + i] = v[static_cast<Eigen::Index>(i)];
    }

    /// Euclidean norm for NormKind::Spectral (the vector norm it induces),
    /// sum of absolute values for NormKind::One.
    [[nodiscard]] double norm(std::size_t k, NormKind kind = NormKind::Spectral) const {
        double s = 0.0;
        if (kind == NormKind::One) {
            for (std::size_t i = 0; i < dim; ++i) s += std::fabs(at(k, i));
            return s;
        }
        for (std::size_t i = 0; i < dim; ++i) s = std::hypot(s, at(k, i));
        return s;
    }

    /// Scalar trajectory of the norm of each sample.
    [[nodiscard]] Trajectory norms(NormKind kind = NormKind::Spectral) const {
        Trajectory out(grid, 1, "|" + label + "|");
        for (std::size_t k = 0; k < grid.n; ++k) out.at(k) = norm(k, kind);
        return out;
    }

    /// Component i as a scalar trajectory.
    [[nodiscard]] Trajectory component(std::size_t i) const {
        Trajectory out(grid, 1, label + "_" + std::to_string(i + 1));
        for (std::size_t k = 0; k < grid.n; ++k) out.at(k) = at(k, i);
        return out;
    }

    void check_finite() const {
        for (std::size_t j = 0; j < values.size(); ++j)
            if (!std::isfinite(values[j]))
                throw std::runtime_error("trajectory " + label + " is not finite at t=" + format_double(t(j / dim)));
    }
};

/// Worst residual of one identity over a grid.
struct Residual {
    std::string name;
    double max_residual = 0.0;
    double worst_t = 0.0;
    double tol = 0.0;
    std::size_t points = 0;

    [[nodiscard]] bool pass() const { return std::isfinite(max_residual) && max_residual <= tol; }
    void observe(double t, double r) {
        ++points;
        r = std::fabs(r);
        if (!(r <= max_residual)) {  // NaN propagates into the report
            max_residual = r;
            worst_t = t;
        }
    }
};

struct ResidualReport {
    std::vector<Residual> parts;

    [[nodiscard]] bool pass() const {
        for (const auto& p : parts)
            if (!p.pass()) return false;
        return !parts.empty();
    }
    [[nodiscard]] double max_residual() const {
        double m = 0.0;
        for (const auto& p : parts) m = std::max(m, p.max_residual);
        return m;
    }
};

/// CSV with a header row: t, then one column per component.
inline void write_csv(std::ostream& os, const Trajectory& x) {
    const std::string name = x.label.empty() ? "x" : x.label;
    os << "t";
    if (x.dim == 1) {
        os << ',' << name;
    } else {
        for (std::size_t i = 0; i < x.dim; ++i) os << ',' << name << '_' << (i + 1);
    }
    os << '\n';
    for (std::size_t k = 0; k < x.size(); ++k) {
        os << format_double(x.t(k));
        for (std::size_t i = 0; i < x.dim; ++i) os << ',' << format_double(x.at(k, i));
        os << '\n';
    }
}

}  // namespace forcelab
