#pragma once

// Weight functions γ > 0: class checks (non-decreasing, finite-lag
// subexponential, exponential rate), the smoothed weight
// Γ_δ(t) = (1/δ)∫_t^{t+δ} γ, integral transforms, and the convolution ratio
// ∫_0^t e^{-α(t-s)}γ(s)ds / (γ(t)/α).
//
// Everything is computed from log γ so weights like exp(e^t) or e^{3t} at
// t = 10^4 stay representable.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forcelab/expr.hpp"
#include "forcelab/quadrature.hpp"
#include "forcelab/solver.hpp"

namespace forcelab {

enum class WeightClass { NonDecreasing, Subexponential, ExponentialRate, Unverified };

inline const char* weight_class_name(WeightClass c) {
    switch (c) {
        case WeightClass::NonDecreasing: return "non_decreasing";
        case WeightClass::Subexponential: return "subexponential";
        case WeightClass::ExponentialRate: return "exponential_rate";
        case WeightClass::Unverified: return "unverified";
    }
    return "unverified";
}

class WeightError : public std::runtime_error {
public:
    WeightError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    [[nodiscard]] double t() const noexcept { return t_; }

private:
    double t_;
};

enum class Verdict3 { Pass, Fail, Inconclusive };

inline const char* verdict3_name(Verdict3 v) {
    switch (v) {
        case Verdict3::Pass: return "pass";
        case Verdict3::Fail: return "fail";
        case Verdict3::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

class WeightFunction {
public:
    using LogFn = std::function<double(double)>;

    WeightFunction() : WeightFunction(Expr::constant(1.0), WeightClass::Unverified) {}

    WeightFunction(Expr e, WeightClass declared, double rate = 0.0)
        : expr_(std::move(e)), label_(expr_->str()), declared_(declared), rate_(rate) {
        const Expr ex = *expr_;
        log_ = std::make_shared<LogFn>([ex](double t) {
            const SignedLog v = ex.eval_log(t);
            if (v.sign <= 0) throw WeightError("weight " + ex.str() + " is not positive at t=" + format_double(t), t);
            return v.log_abs;
        });
    }

    /// Weight given directly by log γ (used for derived weights).
    WeightFunction(LogFn log_gamma, std::string label, WeightClass declared, double rate = 0.0)
        : label_(std::move(label)), declared_(declared), rate_(rate),
          log_(std::make_shared<LogFn>(std::move(log_gamma))) {}

    static WeightFunction parse(std::string_view text, WeightClass declared = WeightClass::Unverified,
                                double rate = 0.0) {
        return WeightFunction(parse_expr(text), declared, rate);
    }

    [[nodiscard]] double log_value(double t) const { return (*log_)(t); }
    [[nodiscard]] double operator()(double t) const { return std::exp(log_value(t)); }
    /// γ(a)/γ(b).
    [[nodiscard]] double ratio(double a, double b) const { return std::exp(log_value(a) - log_value(b)); }

    [[nodiscard]] const std::optional<Expr>& expr() const noexcept { return expr_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] WeightClass declared_class() const noexcept { return declared_; }
    [[nodiscard]] double declared_rate() const noexcept { return rate_; }
    [[nodiscard]] bool verified() const noexcept { return verified_; }
    void set_verified(bool v) noexcept { verified_ = v; }

    /// c·γ for c > 0.
    [[nodiscard]] WeightFunction scaled(double c) const {
        if (!(c > 0.0)) throw std::invalid_argument("weight scale must be positive");
        auto base = log_;
        const double lc = std::log(c);
        WeightFunction w([base, lc](double t) { return (*base)(t) + lc; }, format_double(c) + "*(" + label_ + ")",
                         declared_, rate_);
        if (expr_) w.expr_ = detail::mul(Expr::constant(c), *expr_);
        w.verified_ = verified_;
        return w;
    }

private:
    std::optional<Expr> expr_;
    std::string label_;
    WeightClass declared_ = WeightClass::Unverified;
    double rate_ = 0.0;
    bool verified_ = false;
    std::shared_ptr<const LogFn> log_;
};

struct RatioSample {
    double t;
    double theta;
    double ratio;  // γ(t-θ)/γ(t)
};

struct WeightDiagnostic {
    std::vector<RatioSample> ratio_samples;
    std::vector<double> horizons;
    std::vector<double> deviation_per_horizon;  // max_θ |ratio - 1| at each horizon
    double worst_deviation = 0.0;               // max over all samples
    double horizon = 0.0;                       // largest horizon
    double tol = 0.0;
    Verdict3 verdict = Verdict3::Inconclusive;
};

inline const std::vector<double> kDefaultLags = {0.25, 0.5, 1.0, 2.0};
inline const std::vector<double> kDefaultHorizons = {1e2, 1e3, 1e4};
inline constexpr double kDefaultWeightTol = 1e-2;

/// Samples γ on [0, t_end] and throws WeightError at the first t where γ is
/// not positive (or not finite in log space).
inline void check_positive(const WeightFunction& w, double t_end, int samples = 1000) {
    for (int i = 0; i <= samples; ++i) {
        const double t = t_end * i / samples;
        const double lv = w.log_value(t);
        if (std::isnan(lv) || lv == -std::numeric_limits<double>::infinity())
            throw WeightError("weight " + w.label() + " is not positive at t=" + format_double(t), t);
    }
}

/// Finite-horizon check of γ(t-θ)/γ(t) → 1. Pass: deviation at the last
/// horizon below tol and non-increasing across horizons. Fail: the last
/// deviation exceeds 2·tol and has stopped shrinking (≥ 90% of the previous
/// one). Otherwise inconclusive.
inline WeightDiagnostic verify_subexponential(const WeightFunction& w, const std::vector<double>& lags = kDefaultLags,
                                              const std::vector<double>& horizons = kDefaultHorizons,
                                              double tol = kDefaultWeightTol) {
    if (lags.empty() || horizons.empty()) throw std::invalid_argument("verify_subexponential: empty lag or horizon set");
    if (!(tol > 0.0)) throw std::invalid_argument("verify_subexponential: tol must be positive");
    for (double th : lags)
        if (!(th > 0.0)) throw std::invalid_argument("verify_subexponential: lags must be positive");
    for (std::size_t i = 1; i < horizons.size(); ++i)
        if (!(horizons[i] > horizons[i - 1])) throw std::invalid_argument("verify_subexponential: horizons must increase");
    check_positive(w, horizons.back());

    WeightDiagnostic d;
    d.horizons = horizons;
    d.horizon = horizons.back();
    d.tol = tol;
    for (double T : horizons) {
        double dev = 0.0;
        for (double th : lags) {
            if (th > T) throw std::invalid_argument("verify_subexponential: lag exceeds horizon");
            const double r = w.ratio(T - th, T);
            d.ratio_samples.push_back({T, th, r});
            const double e = std::isfinite(r) ? std::fabs(r - 1.0) : std::numeric_limits<double>::infinity();
            dev = std::max(dev, e);
        }
        d.deviation_per_horizon.push_back(dev);
        d.worst_deviation = std::max(d.worst_deviation, dev);
    }
    const auto& dv = d.deviation_per_horizon;
    const double last = dv.back();
    bool non_increasing = true;
    for (std::size_t i = 1; i < dv.size(); ++i)
        if (dv[i] > dv[i - 1] * (1.0 + 1e-12) + 1e-15) non_increasing = false;
    const double prev = dv.size() > 1 ? dv[dv.size() - 2] : last;
    if (last < tol && non_increasing) {
        d.verdict = Verdict3::Pass;
    } else if (last > 2.0 * tol && last >= 0.9 * prev) {
        d.verdict = Verdict3::Fail;
    } else {
        d.verdict = Verdict3::Inconclusive;
    }
    return d;
}

struct MonotoneDiagnostic {
    Verdict3 verdict = Verdict3::Inconclusive;
    double worst_drop = 0.0;  // max over t1 < t2 of 1 - γ(t2)/γ(t1), 0 if none
    double worst_t = 0.0;
};

/// γ(t2) ≥ γ(t1)(1 - tol) for consecutive samples on [0, t_end]. The relative
/// form keeps the check meaningful for weights far from unit scale.
inline MonotoneDiagnostic verify_nondecreasing(const WeightFunction& w, double t_end, int samples = 20000,
                                               double tol = 1e-12) {
    MonotoneDiagnostic m;
    double prev = w.log_value(0.0);
    for (int i = 1; i <= samples; ++i) {
        const double t = t_end * i / samples;
        const double cur = w.log_value(t);
        const double drop = -std::expm1(cur - prev);
        if (drop > m.worst_drop) {
            m.worst_drop = drop;
            m.worst_t = t;
        }
        prev = cur;
    }
    m.verdict = m.worst_drop <= tol ? Verdict3::Pass : Verdict3::Fail;
    return m;
}

/// Γ_δ(t) = (1/δ)∫_t^{t+δ} γ(s) ds, evaluated as γ(t) times the mean of
/// γ(s)/γ(t). Declared subexponential when γ was verified subexponential.
inline WeightFunction smooth_delta(const WeightFunction& w, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("smooth_delta: delta must be positive");
    const WeightFunction base = w;
    auto log_gamma_delta = [base, delta](double t) {
        const double lt = base.log_value(t);
        const double mean =
            quad::integral_relative([&](double s) { return std::exp(base.log_value(s) - lt); }, t, t + delta, 1e-13) /
            delta;
        return lt + std::log(mean);
    };
    const bool subexp = w.verified() && w.declared_class() == WeightClass::Subexponential;
    WeightFunction out(log_gamma_delta, "Gamma_" + format_double(delta) + "[" + w.label() + "]",
                       subexp ? WeightClass::Subexponential : WeightClass::Unverified);
    out.set_verified(subexp);
    return out;
}

struct IntegralTransforms {
    double gamma1 = 0.0;                // ∫_0^t γ
    std::optional<double> gamma2;       // ∫_t^∞ γ when the tail converges
    std::vector<double> tail_horizons;  // H, 2H, 4H
    std::vector<double> tail_values;    // ∫_t^H γ, ...
    std::string reason;                 // why gamma2 is absent
};

/// Γ1(t) and Γ2(t). The tail counts as converged when both doublings
/// H → 2H → 4H change ∫_t^H γ by less than 1e-8 relative.
inline IntegralTransforms integral_transforms(const WeightFunction& w, double t, double tail_horizon) {
    if (t < 0.0) throw std::invalid_argument("integral_transforms: t must be non-negative");
    IntegralTransforms out;
    auto g = [&](double s) { return w(s); };
    out.gamma1 = quad::integral_relative(g, 0.0, t, 1e-13);
    if (!(tail_horizon > t)) {
        out.reason = "tail horizon not beyond t";
        return out;
    }
    for (double H : {tail_horizon, 2.0 * tail_horizon, 4.0 * tail_horizon}) {
        double v = std::numeric_limits<double>::infinity();
        try {
            v = quad::integral_relative(g, t, H, 1e-13);
        } catch (const quad::QuadratureError&) {
        }
        out.tail_horizons.push_back(H);
        out.tail_values.push_back(v);
    }
    const auto& v = out.tail_values;
    auto close = [](double a, double b) { return std::isfinite(a) && std::isfinite(b) && std::fabs(b - a) < 1e-8 * std::fabs(b); };
    if (close(v[0], v[1]) && close(v[1], v[2])) {
        out.gamma2 = v[2];
    } else {
        out.reason = "tail integral not convergent up to t=" + format_double(out.tail_horizons.back());
    }
    return out;
}

/// d/dt log γ as an expression. Products, quotients, constant powers and
/// exp are split so log-derivatives of exp(e^t) or e^{3t} stay exact.
inline Expr log_derivative(const Expr& g) {
    using namespace detail;
    const Node& n = g.root();
    if (n.kind == Node::Kind::Unary && n.unary == UnaryOp::Exp) return differentiate(Expr(n.lhs));
    if (n.kind == Node::Kind::Binary) {
        const Expr a(n.lhs), b(n.rhs);
        switch (n.binary) {
            case BinaryOp::Mul: return add(log_derivative(a), log_derivative(b));
            case BinaryOp::Div: return sub(log_derivative(a), log_derivative(b));
            case BinaryOp::Pow:
                if (b.is_constant()) return mul(b, log_derivative(a));
                break;
            default: break;
        }
    }
    if (n.kind == Node::Kind::Constant) return Expr::constant(0.0);
    return div(differentiate(g), g);
}

enum class RateClass { Zero, Finite, Infinite };

inline const char* rate_class_name(RateClass c) {
    switch (c) {
        case RateClass::Zero: return "zero";
        case RateClass::Finite: return "finite";
        case RateClass::Infinite: return "infinite";
    }
    return "finite";
}

struct RateEstimate {
    std::vector<double> horizons;
    std::vector<double> samples;  // γ'(T)/γ(T)
    RateClass classification = RateClass::Finite;
    double value = 0.0;  // last sample, or +inf
    double tol = kDefaultWeightTol;
    double cap = 100.0;
};

/// β(T) = γ'(T)/γ(T) at each horizon. Zero when the last sample is below
/// tol in magnitude; infinite when samples never decrease and end at or
/// above cap; otherwise finite with the last sample as the value.
inline RateEstimate log_derivative_rate(const WeightFunction& w, const std::vector<double>& horizons = kDefaultHorizons,
                                        double tol = kDefaultWeightTol, double cap = 100.0) {
    if (!w.expr()) throw std::invalid_argument("log_derivative_rate: weight has no expression to differentiate");
    const Expr beta = log_derivative(*w.expr());
    RateEstimate r;
    r.horizons = horizons;
    r.tol = tol;
    r.cap = cap;
    for (double T : horizons) r.samples.push_back(beta.eval_log(T).value());
    const double last = r.samples.back();
    bool non_decreasing = true;
    for (std::size_t i = 1; i < r.samples.size(); ++i)
        if (!(r.samples[i] >= r.samples[i - 1])) non_decreasing = false;
    if (std::fabs(last) < tol) {
        r.classification = RateClass::Zero;
        r.value = 0.0;
    } else if (non_decreasing && last >= cap && r.samples.back() > r.samples.front()) {
        r.classification = RateClass::Infinite;
        r.value = std::numeric_limits<double>::infinity();
    } else {
        r.classification = RateClass::Finite;
        r.value = last;
    }
    return r;
}

/// [∫_0^t e^{-α(t-s)}γ(s)ds] / [γ(t)/α].
inline double conv_exp_ratio(const WeightFunction& w, double alpha, double t) {
    if (!(alpha > 0.0) || !(t > 0.0)) throw std::invalid_argument("conv_exp_ratio: need alpha > 0 and t > 0");
    auto lw = [&w](double s) { return w.log_value(s); };
    return alpha * exp_kernel_weighted_integral(-alpha, lw, t);
}

/// Runs the check matching the declared class and records the outcome.
struct WeightVerification {
    WeightClass declared = WeightClass::Unverified;
    Verdict3 verdict = Verdict3::Inconclusive;
    std::optional<WeightDiagnostic> subexponential;
    std::optional<MonotoneDiagnostic> monotone;
    std::optional<RateEstimate> rate;
    std::string note;
};

inline WeightVerification verify_weight(WeightFunction& w, double t_end) {
    WeightVerification v;
    v.declared = w.declared_class();
    switch (w.declared_class()) {
        case WeightClass::NonDecreasing:
            check_positive(w, t_end);
            v.monotone = verify_nondecreasing(w, t_end);
            v.verdict = v.monotone->verdict;
            break;
        case WeightClass::Subexponential:
            v.subexponential = verify_subexponential(w);
            v.verdict = v.subexponential->verdict;
            break;
        case WeightClass::ExponentialRate:
            check_positive(w, t_end);
            if (w.expr()) {
                v.rate = log_derivative_rate(w, {0.25 * t_end, 0.5 * t_end, t_end});
                const double declared = w.declared_rate();
                const double got = v.rate->value;
                const bool match = std::isinf(declared) ? v.rate->classification == RateClass::Infinite
                                                        : std::fabs(got - declared) <= 1e-2 * std::max(1.0, std::fabs(declared));
                v.verdict = match ? Verdict3::Pass : Verdict3::Fail;
            } else {
                v.note = "no expression to differentiate";
            }
            break;
        case WeightClass::Unverified:
            check_positive(w, t_end);
            v.note = "no class declared";
            break;
    }
    w.set_verified(v.verdict == Verdict3::Pass);
    return v;
}

}  // namespace forcelab
