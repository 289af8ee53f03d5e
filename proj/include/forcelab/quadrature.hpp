#pragma once

// =============================================================================
// Quadrature
// =============================================================================
// - Gauss-Legendre rules of arbitrary order (Newton iteration on P_n).
// - Adaptive composite Gauss-Legendre: 15-point panels, global bisection of
//   the panel with the largest |GL15(panel) - GL15(left) - GL15(right)|.
// - CumulativeIntegral: prefix integral F(x) = ∫_a^x f on a refined cell
//   partition. Each cell keeps the Legendre expansion of the degree-14
//   interpolant of f at its GL15 nodes, so F can be evaluated anywhere
//   without new evaluations of f.
// =============================================================================

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace forcelab::quad {

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double a, double b, double err)
        : std::runtime_error(what + " (worst subinterval [" + std::to_string(a) + ", " + std::to_string(b) +
                             "], error estimate " + std::to_string(err) + ")"),
          a_(a), b_(b), err_(err) {}
    [[nodiscard]] double worst_a() const noexcept { return a_; }
    [[nodiscard]] double worst_b() const noexcept { return b_; }
    [[nodiscard]] double error_estimate() const noexcept { return err_; }

private:
    double a_, b_, err_;
};

struct Rule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

namespace detail {

inline Rule compute_gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1]; cached per n, thread safe.
inline const Rule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

/// Rule mapped to [a, b].
inline Rule gauss_legendre(int n, double a, double b) {
    Rule r = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

/// Composite Simpson weights for an odd number of equispaced nodes on [a, b].
inline Rule composite_simpson(int n, double a, double b) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("composite_simpson: need an odd node count >= 3");
    Rule r;
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(a + h * i);
        const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        r.weights.push_back(w * h / 3.0);
    }
    r.nodes.back() = b;
    return r;
}

inline constexpr int kPanelPoints = 15;

template <class V>
double magnitude(const V& v) {
    if constexpr (std::is_arithmetic_v<V>) {
        return std::fabs(static_cast<double>(v));
    } else {
        return v.cwiseAbs().maxCoeff();
    }
}

template <class V>
struct QuadResult {
    V value;
    double error = 0.0;
    int evaluations = 0;
};

struct QuadOptions {
    int max_panels = 4000;
    /// Roundoff floor, relative to ∫|f|. Stops refinement when the requested
    /// absolute tolerance is below what double arithmetic can resolve.
    double relative_floor = 64.0 * std::numeric_limits<double>::epsilon();
};

namespace detail {

template <class V>
struct PanelSum {
    V value;
    double abs_integral;
};

template <class F>
auto gl15(F& f, double a, double b, int& evals) {
    using V = std::decay_t<decltype(f(a))>;
    const Rule& rule = gauss_legendre(kPanelPoints);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    V fx = f(mid + half * rule.nodes[0]);
    V sum = rule.weights[0] * fx;
    double abs_sum = rule.weights[0] * magnitude(fx);
    for (int i = 1; i < kPanelPoints; ++i) {
        fx = f(mid + half * rule.nodes[i]);
        sum = sum + rule.weights[i] * fx;
        abs_sum += rule.weights[i] * magnitude(fx);
    }
    evals += kPanelPoints;
    return PanelSum<V>{half * sum, std::fabs(half) * abs_sum};
}

template <class V>
struct Panel {
    double a, b;
    V left, right;
    double left_abs, right_abs;
    double err;
};

}  // namespace detail

/// Adaptive composite Gauss-Legendre integration of f over [a, b] to
/// absolute tolerance abs_tol. Works for scalar and Eigen vector integrands.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(a))>> {
    using V = std::decay_t<decltype(f(a))>;
    using detail::Panel;
    if (!(std::isfinite(a) && std::isfinite(b))) throw std::invalid_argument("integrate: non-finite limits");
    int evals = 0;
    if (a == b) {
        V z = f(a);
        z = 0.0 * z;
        return {z, 0.0, 1};
    }

    auto make_panel = [&](double lo, double hi, const detail::PanelSum<V>& whole) {
        const double mid = 0.5 * (lo + hi);
        auto l = detail::gl15(f, lo, mid, evals);
        auto r = detail::gl15(f, mid, hi, evals);
        const double err = magnitude(V(whole.value - (l.value + r.value)));
        return Panel<V>{lo, hi, l.value, r.value, l.abs_integral, r.abs_integral, err};
    };
    auto by_error = [](const Panel<V>& x, const Panel<V>& y) { return x.err < y.err; };

    std::vector<Panel<V>> heap;
    heap.push_back(make_panel(a, b, detail::gl15(f, a, b, evals)));
    double total_err = heap.front().err;
    double total_abs = heap.front().left_abs + heap.front().right_abs;

    while (total_err > std::max(abs_tol, opt.relative_floor * total_abs)) {
        if (static_cast<int>(heap.size()) >= opt.max_panels) {
            const Panel<V>& worst = heap.front();
            throw QuadratureError("adaptive quadrature did not converge", worst.a, worst.b, worst.err);
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        Panel<V> worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel<V> l = make_panel(worst.a, mid, {worst.left, worst.left_abs});
        Panel<V> r = make_panel(mid, worst.b, {worst.right, worst.right_abs});
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("adaptive quadrature exhausted floating-point resolution", worst.a, worst.b, worst.err);
        }
        total_err += l.err + r.err - worst.err;
        total_abs += l.left_abs + l.right_abs + r.left_abs + r.right_abs - worst.left_abs - worst.right_abs;
        heap.push_back(std::move(l));
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(std::move(r));
        std::push_heap(heap.begin(), heap.end(), by_error);
        // Incremental sums drift; recompute once in a while.
        if (heap.size() % 64 == 0) {
            total_err = 0.0;
            total_abs = 0.0;
            for (const auto& p : heap) {
                total_err += p.err;
                total_abs += p.left_abs + p.right_abs;
            }
        }
    }

    std::sort(heap.begin(), heap.end(), [](const Panel<V>& x, const Panel<V>& y) { return x.a < y.a; });
    V sum = heap.front().left + heap.front().right;
    double err = heap.front().err;
    for (std::size_t i = 1; i < heap.size(); ++i) {
        sum = sum + (heap[i].left + heap[i].right);
        err += heap[i].err;
    }
    return {sum, err, evals};
}

/// Convenience wrapper returning only the value.
template <class F>
auto integral(F&& f, double a, double b, double abs_tol, const QuadOptions& opt = {}) {
    return integrate(std::forward<F>(f), a, b, abs_tol, opt).value;
}

/// Adaptive integration to a tolerance relative to ∫|f|, estimated first
/// from a fixed 16-panel GL15 pass. Used where the integrand's scale is
/// unknown (e^t-sized resolvents, weight ratios).
template <class F>
double integral_relative(F&& f, double a, double b, double rel_tol, const QuadOptions& opt = {}) {
    if (a == b) return 0.0;
    double scale = 0.0;
    int evals = 0;
    constexpr int kPanels = 16;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + (b - a) * i / kPanels, hi = a + (b - a) * (i + 1) / kPanels;
        scale += detail::gl15(f, lo, hi, evals).abs_integral;
    }
    const double tol = std::max(rel_tol * scale, std::numeric_limits<double>::min());
    return integrate(f, a, b, tol, opt).value;
}

/// Prefix integral F(x) = ∫_{x0}^{x} f over a cell partition of [x0, x1].
///
/// Cells start from the given breakpoints and are bisected until the GL15
/// estimate over the cell agrees with the sum over its halves to within the
/// cell's share of the tolerance. F is exact at cell ends (up to that
/// tolerance) and, inside a cell, integrates the Legendre expansion of the
/// degree-14 interpolant of f.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;

    template <class F>
    CumulativeIntegral(F&& f, std::span<const double> breakpoints, double abs_tol, const QuadOptions& opt = {}) {
        build(f, breakpoints, abs_tol, opt);
    }

    [[nodiscard]] double lower() const noexcept { return starts_.empty() ? 0.0 : starts_.front(); }
    [[nodiscard]] double upper() const noexcept { return upper_; }
    [[nodiscard]] std::size_t cell_count() const noexcept { return starts_.size(); }
    [[nodiscard]] int evaluations() const noexcept { return evals_; }

    /// ∫_{lower}^{x} f. Returns 0 for x <= lower; throws beyond upper.
    [[nodiscard]] double operator()(double x) const {
        if (starts_.empty() || x <= starts_.front()) return 0.0;
        if (x > upper_ * (1.0 + 1e-14) + 1e-300) throw std::out_of_range("CumulativeIntegral: x beyond upper limit");
        if (x >= upper_) return cumulative_.back();
        const std::size_t c = locate(x);
        const double a = starts_[c];
        const double b = c + 1 < starts_.size() ? starts_[c + 1] : upper_;
        if (x == a) return cumulative_[c];
        const double u = std::clamp(2.0 * (x - a) / (b - a) - 1.0, -1.0, 1.0);
        const double* coef = &coefficients_[c * kPanelPoints];
        // P_k(u) by recurrence up to degree 15.
        std::array<double, kPanelPoints + 1> p{};
        p[0] = 1.0;
        p[1] = u;
        for (int k = 1; k < kPanelPoints; ++k) p[k + 1] = ((2.0 * k + 1.0) * u * p[k] - k * p[k - 1]) / (k + 1.0);
        double acc = coef[0] * (u + 1.0);
        for (int k = 1; k < kPanelPoints; ++k) acc += coef[k] * (p[k + 1] - p[k - 1]) / (2.0 * k + 1.0);
        return cumulative_[c] + 0.5 * (b - a) * acc;
    }

    /// Interpolated integrand value at x.
    [[nodiscard]] double integrand(double x) const {
        if (starts_.empty() || x < starts_.front() || x > upper_) throw std::out_of_range("CumulativeIntegral::integrand");
        const std::size_t c = locate(std::min(x, std::nextafter(upper_, -1.0)));
        const double a = starts_[c];
        const double b = c + 1 < starts_.size() ? starts_[c + 1] : upper_;
        const double u = std::clamp(2.0 * (x - a) / (b - a) - 1.0, -1.0, 1.0);
        const double* coef = &coefficients_[c * kPanelPoints];
        double p0 = 1.0, p1 = u, acc = coef[0] + coef[1] * u;
        for (int k = 1; k + 1 < kPanelPoints; ++k) {
            const double p2 = ((2.0 * k + 1.0) * u * p1 - k * p0) / (k + 1.0);
            acc += coef[k + 1] * p2;
            p0 = p1;
            p1 = p2;
        }
        return acc;
    }

private:
    struct LegendreTable {
        // analysis[k][j] = (2k+1)/2 * w_j * P_k(x_j)
        std::array<std::array<double, kPanelPoints>, kPanelPoints> analysis{};
    };

    static const LegendreTable& table() {
        static const LegendreTable t = [] {
            LegendreTable tab;
            const Rule& r = gauss_legendre(kPanelPoints);
            for (int j = 0; j < kPanelPoints; ++j) {
                const double x = r.nodes[j];
                double p0 = 1.0, p1 = x;
                tab.analysis[0][j] = 0.5 * r.weights[j];
                tab.analysis[1][j] = 1.5 * r.weights[j] * x;
                for (int k = 1; k + 1 < kPanelPoints; ++k) {
                    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                    tab.analysis[k + 1][j] = 0.5 * (2.0 * (k + 1) + 1.0) * r.weights[j] * p2;
                    p0 = p1;
                    p1 = p2;
                }
            }
            return tab;
        }();
        return t;
    }

    [[nodiscard]] std::size_t locate(double x) const {
        auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
        return static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
    }

    struct Sampled {
        std::array<double, kPanelPoints> f;
        double integral;
        double abs_integral;
    };

    template <class F>
    Sampled sample(F& f, double a, double b) {
        const Rule& r = gauss_legendre(kPanelPoints);
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        Sampled s{};
        for (int j = 0; j < kPanelPoints; ++j) {
            s.f[j] = f(mid + half * r.nodes[j]);
            s.integral += r.weights[j] * s.f[j];
            s.abs_integral += r.weights[j] * std::fabs(s.f[j]);
        }
        s.integral *= half;
        s.abs_integral *= half;
        evals_ += kPanelPoints;
        return s;
    }

    void push_cell(double a, const Sampled& s) {
        const auto& tab = table();
        starts_.push_back(a);
        cumulative_.push_back(running_);
        for (int k = 0; k < kPanelPoints; ++k) {
            double c = 0.0;
            for (int j = 0; j < kPanelPoints; ++j) c += tab.analysis[k][j] * s.f[j];
            coefficients_.push_back(c);
        }
        running_ += s.integral;
    }

    template <class F>
    void refine(F& f, double a, double b, const Sampled& whole, double tol_per_length, const QuadOptions& opt,
                int depth, double parent_rel = std::numeric_limits<double>::infinity()) {
        const double mid = 0.5 * (a + b);
        Sampled l = sample(f, a, mid);
        Sampled r = sample(f, mid, b);
        const double err = std::fabs(whole.integral - (l.integral + r.integral));
        // Cells shrink until the integrand's own evaluation noise dominates
        // (e.g. sin(t^2) loses digits in the phase), so the floor here is
        // looser than the summation roundoff floor.
        const double floor = std::max(opt.relative_floor, kCellNoiseFloor) * whole.abs_integral;
        const double budget = std::max(tol_per_length * (b - a), floor);
        // A resolved cell gains many digits per halving; once the relative
        // error is tiny and stops shrinking, it is evaluation noise.
        const double rel = whole.abs_integral > 0.0 ? err / whole.abs_integral : 0.0;
        const bool noise = rel <= kNoiseStall && rel >= 0.25 * parent_rel;
        if (err <= budget || noise) {
            push_cell(a, whole);
            return;
        }
        if (depth > 50 || !(mid > a && mid < b)) {
            throw QuadratureError("cumulative integral did not converge", a, b, err);
        }
        refine(f, a, mid, l, tol_per_length, opt, depth + 1, rel);
        refine(f, mid, b, r, tol_per_length, opt, depth + 1, rel);
    }

    template <class F>
    void build(F& f, std::span<const double> breakpoints, double abs_tol, const QuadOptions& opt) {
        if (breakpoints.size() < 2) throw std::invalid_argument("CumulativeIntegral: need at least two breakpoints");
        const double total = breakpoints.back() - breakpoints.front();
        if (!(total > 0.0)) throw std::invalid_argument("CumulativeIntegral: empty range");
        const double tol_per_length = abs_tol / total;
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
            const double a = breakpoints[i], b = breakpoints[i + 1];
            if (!(b > a)) throw std::invalid_argument("CumulativeIntegral: breakpoints must increase");
            refine(f, a, b, sample(f, a, b), tol_per_length, opt, 0);
        }
        upper_ = breakpoints.back();
        cumulative_.push_back(running_);
    }

    static constexpr double kCellNoiseFloor = 1e-12;
    static constexpr double kNoiseStall = 1e-8;

    std::vector<double> starts_;
    std::vector<double> cumulative_;  // F at each cell start, plus F(upper)
    std::vector<double> coefficients_;
    double upper_ = 0.0;
    double running_ = 0.0;
    int evals_ = 0;
};

/// Breakpoints t_0 < ... < t_n subdivided `refinement` times per interval,
/// with extra points merged in.
inline std::vector<double> refine_breakpoints(std::span<const double> grid, int refinement,
                                              std::span<const double> extra = {}) {
    std::vector<double> out;
    if (grid.empty()) return out;
    out.reserve(grid.size() * static_cast<std::size_t>(std::max(refinement, 1)) + extra.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        for (int k = 0; k < refinement; ++k) out.push_back(a + (b - a) * k / refinement);
    }
    out.push_back(grid.back());
    for (double x : extra)
        if (x > grid.front() && x < grid.back()) out.push_back(x);
    std::sort(out.begin(), out.end());
    const double scale = std::max(1.0, std::fabs(grid.back()));
    out.erase(std::unique(out.begin(), out.end(), [&](double x, double y) { return std::fabs(x - y) <= 1e-13 * scale; }),
              out.end());
    return out;
}

}  // namespace forcelab::quad
