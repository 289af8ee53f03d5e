#pragma once

// Finite-horizon verdicts for limsup statements, condition-side checks on
// the moving-average field f_θ/γ, solution-side estimates, and the
// per-theorem cross-check that compares the two.
//
// Every limsup is read off dyadic tail windows [T/2^{i+1}, T/2^i]; see
// classify_windows for the rules.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "forcelab/expr.hpp"
#include "forcelab/forcing.hpp"
#include "forcelab/linalg.hpp"
#include "forcelab/quadrature.hpp"
#include "forcelab/solver.hpp"
#include "forcelab/trajectory.hpp"
#include "forcelab/weights.hpp"

namespace forcelab {

using Json = nlohmann::ordered_json;

enum class LimsupVerdict { Zero, PositiveFinite, Infinite, Inconclusive };

inline const char* limsup_verdict_name(LimsupVerdict v) {
    switch (v) {
        case LimsupVerdict::Zero: return "zero";
        case LimsupVerdict::PositiveFinite: return "positive_finite";
        case LimsupVerdict::Infinite: return "infinite";
        case LimsupVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

enum class Consistency { Agree, Disagree, Inconclusive };

inline const char* consistency_name(Consistency c) {
    switch (c) {
        case Consistency::Agree: return "agree";
        case Consistency::Disagree: return "disagree";
        case Consistency::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

inline Consistency consistency_of(Verdict3 condition, Verdict3 simulation) {
    if (condition == Verdict3::Inconclusive || simulation == Verdict3::Inconclusive) return Consistency::Inconclusive;
    return condition == simulation ? Consistency::Agree : Consistency::Disagree;
}

/// Any disagree wins, then any inconclusive.
inline Consistency combine(Consistency a, Consistency b) {
    if (a == Consistency::Disagree || b == Consistency::Disagree) return Consistency::Disagree;
    if (a == Consistency::Inconclusive || b == Consistency::Inconclusive) return Consistency::Inconclusive;
    return Consistency::Agree;
}

struct LimsupPolicy {
    double eps_zero = 1e-3;
    double tau = 1.5;
    double rho_inf = 2.0;
    double cap = 1e6;
    double trend_ratio = 0.9;  // last three windows each shrinking by this factor → Zero
    double floor = 1e-10;      // last window below this counts as zero outright
    int min_windows = 2;
    int max_windows = 6;
    double base_horizon = 25.0;  // one more window per doubling of T beyond this
};

struct Window {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double max_ratio = 0.0;
};

struct LimsupEstimate {
    std::vector<Window> windows;  // oldest first, the last one ends at T
    double final_estimate = 0.0;  // max over the last window
    LimsupVerdict verdict = LimsupVerdict::Inconclusive;
    std::string rule;
    LimsupPolicy policy;
};

inline int window_count(double T, const LimsupPolicy& p) {
    int k = p.min_windows;
    if (T > p.base_horizon) k = 2 + static_cast<int>(std::floor(std::log2(T / p.base_horizon)));
    return std::clamp(k, p.min_windows, p.max_windows);
}

namespace detail {

/// Grid indices [first, last] with t in [lo, hi].
inline std::pair<std::size_t, std::size_t> index_range(const Grid& g, double lo, double hi) {
    const double a = std::ceil((lo - g.t_start) / g.h - 1e-9);
    const double b = std::floor((hi - g.t_start) / g.h + 1e-9);
    const auto first = static_cast<std::size_t>(std::max(0.0, a));
    const auto last = static_cast<std::size_t>(std::clamp(b, 0.0, static_cast<double>(g.n - 1)));
    return {first, last};
}

inline double range_max(const std::vector<double>& r, std::size_t first, std::size_t last) {
    double m = 0.0;
    for (std::size_t k = first; k <= last && k < r.size(); ++k) m = std::max(m, r[k]);
    return m;
}

}  // namespace detail

/// Dyadic windows [T/2^{i+1}, T/2^i] with their maxima of r, oldest first.
inline std::vector<Window> window_maxima(const Grid& g, const std::vector<double>& r, const LimsupPolicy& p) {
    const double T = g.t_end();
    const int K = window_count(T, p);
    std::vector<Window> out;
    for (int i = K - 1; i >= 0; --i) {
        Window w;
        w.t_hi = T / std::ldexp(1.0, i);
        w.t_lo = std::max(g.t_start, T / std::ldexp(1.0, i + 1));
        const auto [a, b] = detail::index_range(g, w.t_lo, w.t_hi);
        w.max_ratio = detail::range_max(r, a, b);
        out.push_back(w);
    }
    return out;
}

/// Verdict from window maxima (last = newest, prev = the one before):
///   Infinite        last > cap, or last > ε_zero and last ≥ ρ_inf·prev
///   Zero            last ≤ ε_zero and (last ≤ prev/2 or last ≤ floor),
///                   or each of the last three windows at most trend_ratio
///                   times its predecessor
///   PositiveFinite  last > ε_zero and prev/τ ≤ last ≤ τ·prev
///   Inconclusive    otherwise
inline LimsupEstimate classify_windows(std::vector<Window> windows, const LimsupPolicy& p) {
    LimsupEstimate e;
    e.policy = p;
    e.windows = std::move(windows);
    if (e.windows.size() < 2) throw std::invalid_argument("limsup needs at least two windows");
    const double last = e.windows.back().max_ratio;
    const double prev = e.windows[e.windows.size() - 2].max_ratio;
    e.final_estimate = last;

    bool shrinking = e.windows.size() >= 3;
    for (std::size_t i = e.windows.size() - 2; i < e.windows.size() && shrinking; ++i)
        if (!(e.windows[i].max_ratio <= p.trend_ratio * e.windows[i - 1].max_ratio) || e.windows[i - 1].max_ratio == 0.0)
            shrinking = false;

    if (!std::isfinite(last) || last > p.cap) {
        e.verdict = LimsupVerdict::Infinite;
        e.rule = "above cap";
    } else if (last > p.eps_zero && last >= p.rho_inf * prev) {
        e.verdict = LimsupVerdict::Infinite;
        e.rule = "window growth";
    } else if (last <= p.eps_zero && (last <= 0.5 * prev || last <= p.floor)) {
        e.verdict = LimsupVerdict::Zero;
        e.rule = "below eps_zero";
    } else if (shrinking) {
        e.verdict = LimsupVerdict::Zero;
        e.rule = "geometric decay";
    } else if (last > p.eps_zero && last <= p.tau * prev && last * p.tau >= prev) {
        e.verdict = LimsupVerdict::PositiveFinite;
        e.rule = "stable windows";
    } else {
        e.verdict = LimsupVerdict::Inconclusive;
        e.rule = "no rule applies";
    }
    return e;
}

inline LimsupEstimate limsup_of_samples(const Grid& g, const std::vector<double>& r, const LimsupPolicy& p = {}) {
    return classify_windows(window_maxima(g, r, p), p);
}

/// |v|/γ evaluated through logs.
inline double weighted_ratio(double v, double log_gamma) {
    if (v == 0.0) return 0.0;
    return std::exp(std::log(std::fabs(v)) - log_gamma);
}

inline std::vector<double> log_weight_samples(const WeightFunction& w, const Grid& g) {
    std::vector<double> out(g.n);
    for (std::size_t k = 0; k < g.n; ++k) out[k] = w.log_value(g.t(k));
    return out;
}

inline std::vector<double> ratio_samples(const Trajectory& x, const std::vector<double>& log_gamma,
                                         NormKind norm = NormKind::Spectral) {
    std::vector<double> r(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) r[k] = weighted_ratio(x.norm(k, norm), log_gamma[k]);
    return r;
}

/// limsup ‖x(t)‖/γ(t).
inline LimsupEstimate limsup_ratio(const Trajectory& x, const WeightFunction& gamma, const LimsupPolicy& p = {},
                                   NormKind norm = NormKind::Spectral) {
    return limsup_of_samples(x.grid, ratio_samples(x, log_weight_samples(gamma, x.grid), norm), p);
}

inline bool is_bounded(LimsupVerdict v) { return v == LimsupVerdict::Zero || v == LimsupVerdict::PositiveFinite; }

/// Pass when bounded, Fail when Infinite.
inline Verdict3 bounded_verdict(LimsupVerdict v) {
    if (v == LimsupVerdict::Inconclusive) return Verdict3::Inconclusive;
    return is_bounded(v) ? Verdict3::Pass : Verdict3::Fail;
}

/// Pass when Zero, Fail when PositiveFinite or Infinite.
inline Verdict3 zero_verdict(LimsupVerdict v) {
    if (v == LimsupVerdict::Inconclusive) return Verdict3::Inconclusive;
    return v == LimsupVerdict::Zero ? Verdict3::Pass : Verdict3::Fail;
}

/// Pass when PositiveFinite, Fail when Zero or Infinite.
inline Verdict3 exact_verdict(LimsupVerdict v) {
    if (v == LimsupVerdict::Inconclusive) return Verdict3::Inconclusive;
    return v == LimsupVerdict::PositiveFinite ? Verdict3::Pass : Verdict3::Fail;
}

// ---------------------------------------------------------------------------
// Condition side: the field |f_θ(t)|/γ(t)

struct RatioField {
    std::vector<double> theta;
    Grid grid;
    std::vector<double> values;  // values[j * grid.n + k]
    double noise = 0.0;          // quadrature error in ratio units on [T/2, T]

    [[nodiscard]] double at(std::size_t j, std::size_t k) const { return values[j * grid.n + k]; }
    [[nodiscard]] std::size_t rows() const noexcept { return theta.size(); }
    [[nodiscard]] std::vector<double> row(std::size_t j) const {
        return {values.begin() + static_cast<std::ptrdiff_t>(j * grid.n),
                values.begin() + static_cast<std::ptrdiff_t>((j + 1) * grid.n)};
    }
};

inline RatioField ratio_field(const MovingAverageField& f, const std::vector<double>& log_gamma) {
    RatioField r;
    r.theta = f.theta;
    r.grid = f.grid;
    r.values.resize(f.values.size());
    for (std::size_t j = 0; j < f.rows(); ++j)
        for (std::size_t k = 0; k < f.grid.n; ++k) r.values[j * f.grid.n + k] = weighted_ratio(f.at(j, k), log_gamma[k]);
    const auto [a, b] = detail::index_range(f.grid, 0.5 * f.grid.t_end(), f.grid.t_end());
    double inv = 0.0;
    for (std::size_t k = a; k <= b; ++k) inv = std::max(inv, std::exp(-log_gamma[k]));
    r.noise = 10.0 * f.quad_tol * inv;
    return r;
}

/// Pointwise norm over the components of a vector forcing.
inline MovingAverageField field_norm(const std::vector<MovingAverageField>& parts, NormKind norm = NormKind::Spectral) {
    if (parts.empty()) throw std::invalid_argument("field_norm: no components");
    MovingAverageField out = parts.front();
    for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
        double s = 0.0;
        for (const auto& p : parts) s = norm == NormKind::One ? s + std::fabs(p.values[idx]) : std::hypot(s, p.values[idx]);
        out.values[idx] = s;
    }
    return out;
}

struct BigOCheck {
    Verdict3 verdict = Verdict3::Inconclusive;
    double K_hat = 0.0;       // max of the ratio over the whole field
    double before_max = 0.0;  // max over θ and t before the last window
    std::vector<Window> windows;
    std::string reason;
};

/// sup_θ |f_θ(t)|/γ(t) is bounded: the last window's max stays within τ of
/// the running max before it.
inline BigOCheck check_bigO(const RatioField& rf, bool weight_verified, const LimsupPolicy& p = {}) {
    BigOCheck c;
    std::vector<double> rowmax(rf.grid.n, 0.0);
    for (std::size_t j = 0; j < rf.rows(); ++j)
        for (std::size_t k = 0; k < rf.grid.n; ++k) rowmax[k] = std::max(rowmax[k], rf.at(j, k));
    for (double v : rowmax) c.K_hat = std::max(c.K_hat, v);
    c.windows = window_maxima(rf.grid, rowmax, p);
    const auto [a, b] = detail::index_range(rf.grid, c.windows.back().t_lo, rf.grid.t_end());
    (void)b;
    c.before_max = a > 0 ? detail::range_max(rowmax, 0, a - 1) : 0.0;
    const double last = c.windows.back().max_ratio;
    const bool holds = std::isfinite(last) && last <= p.tau * c.before_max + rf.noise;
    if (!weight_verified) {
        c.verdict = Verdict3::Inconclusive;
        c.reason = "weight class not verified";
    } else {
        c.verdict = holds ? Verdict3::Pass : Verdict3::Fail;
        c.reason = holds ? "last window within tau of earlier maximum" : "last window exceeds tau times earlier maximum";
    }
    return c;
}

struct RowCounts {
    std::size_t zero = 0, positive = 0, infinite = 0, inconclusive = 0;
};

struct LittleOCheck {
    Verdict3 verdict = Verdict3::Inconclusive;
    std::vector<LimsupEstimate> rows;
    RowCounts counts;  // rows with θ > 0
    std::string reason;
};

inline RowCounts count_rows(const std::vector<double>& theta, const std::vector<LimsupVerdict>& v, double theta_max) {
    RowCounts c;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(theta[j] > 0.0) || theta[j] > theta_max * (1 + 1e-12)) continue;
        switch (v[j]) {
            case LimsupVerdict::Zero: ++c.zero; break;
            case LimsupVerdict::PositiveFinite: ++c.positive; break;
            case LimsupVerdict::Infinite: ++c.infinite; break;
            case LimsupVerdict::Inconclusive: ++c.inconclusive; break;
        }
    }
    return c;
}

/// f_θ(t)/γ(t) → 0 for every θ on the grid.
inline LittleOCheck check_littleo(const RatioField& rf, bool weight_verified, const LimsupPolicy& p = {}) {
    LittleOCheck c;
    std::vector<LimsupVerdict> v;
    for (std::size_t j = 0; j < rf.rows(); ++j) {
        c.rows.push_back(limsup_of_samples(rf.grid, rf.row(j), p));
        v.push_back(c.rows.back().verdict);
    }
    c.counts = count_rows(rf.theta, v, std::numeric_limits<double>::infinity());
    if (!weight_verified) {
        c.verdict = Verdict3::Inconclusive;
        c.reason = "weight class not verified";
    } else if (c.counts.positive + c.counts.infinite > 0) {
        c.verdict = Verdict3::Fail;
        c.reason = "some row does not vanish";
    } else if (c.counts.inconclusive > 0) {
        c.verdict = Verdict3::Inconclusive;
        c.reason = "some rows inconclusive";
    } else {
        c.verdict = Verdict3::Pass;
        c.reason = "every row vanishes";
    }
    return c;
}

struct ThetaProfile {
    std::vector<double> theta;
    std::vector<double> L_hat;       // last-window max per row
    std::vector<double> L_extended;  // max over [T/2 - Δ, T] per row
    std::vector<LimsupVerdict> verdicts;
    double delta = 0.0;
    double zero_set_measure_estimate = 0.0;  // Δ·#{j>0 : Zero}/(count-1)
    double robust_zero_measure = 0.0;        // same, isolated zero rows left out
    std::vector<std::size_t> zero_rows;      // j > 0
    std::vector<std::size_t> isolated_zero_rows;
};

inline ThetaProfile theta_profile(const RatioField& rf, double delta, const LimsupPolicy& p = {}) {
    if (rf.rows() < 16) throw std::invalid_argument("theta profile needs at least 16 rows");
    ThetaProfile prof;
    prof.theta = rf.theta;
    prof.delta = delta;
    const double T = rf.grid.t_end();
    for (std::size_t j = 0; j < rf.rows(); ++j) {
        const auto row = rf.row(j);
        const auto e = limsup_of_samples(rf.grid, row, p);
        const auto [a, b] = detail::index_range(rf.grid, e.windows.back().t_lo - delta, T);
        prof.verdicts.push_back(rf.theta[j] == 0.0 ? LimsupVerdict::Zero : e.verdict);
        prof.L_hat.push_back(rf.theta[j] == 0.0 ? 0.0 : e.final_estimate);
        prof.L_extended.push_back(rf.theta[j] == 0.0 ? 0.0 : detail::range_max(row, a, b));
    }
    const std::size_t n = rf.rows();
    for (std::size_t j = 1; j < n; ++j) {
        if (prof.verdicts[j] != LimsupVerdict::Zero) continue;
        prof.zero_rows.push_back(j);
        const bool left = j > 1 && prof.verdicts[j - 1] == LimsupVerdict::Zero;
        const bool right = j + 1 < n && prof.verdicts[j + 1] == LimsupVerdict::Zero;
        if (!left && !right) prof.isolated_zero_rows.push_back(j);
    }
    const double cell = delta / static_cast<double>(n - 1);
    prof.zero_set_measure_estimate = cell * static_cast<double>(prof.zero_rows.size());
    prof.robust_zero_measure = cell * static_cast<double>(prof.zero_rows.size() - prof.isolated_zero_rows.size());
    return prof;
}

struct SubadditivityCheck {
    std::size_t triples = 0;
    std::size_t violations = 0;
    double worst_excess = 0.0;  // max of L̂(θ₃) - bound, may be negative
    std::string note;
};

/// L̂(θ₁+θ₂) ≤ L̂(θ₂) + L̂_ext(θ₁)·max γ(t-θ₂)/γ(t) + 5·noise on lattice
/// triples, from |f_{θ₁+θ₂}(t)| ≤ |f_{θ₂}(t)| + |f_{θ₁}(t-θ₂)|.
inline SubadditivityCheck check_subadditivity(const ThetaProfile& prof, const RatioField& rf, const WeightFunction& gamma) {
    SubadditivityCheck c;
    c.worst_excess = -std::numeric_limits<double>::infinity();
    const std::size_t n = prof.theta.size();
    const double step = prof.theta.back() / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::fabs(prof.theta[j] - step * static_cast<double>(j)) > 1e-9 * std::max(1.0, prof.theta.back())) {
            c.note = "theta grid not uniform, no lattice triples";
            return c;
        }
    }
    const double T = rf.grid.t_end();
    const auto [a, b] = detail::index_range(rf.grid, 0.5 * T, T);
    std::vector<double> shift(n, 1.0);
    for (std::size_t j = 1; j < n; ++j) {
        double m = 0.0;
        for (std::size_t k = a; k <= b; ++k) {
            const double t = rf.grid.t(k);
            if (t - prof.theta[j] < rf.grid.t_start) continue;
            m = std::max(m, std::exp(gamma.log_value(t - prof.theta[j]) - gamma.log_value(t)));
        }
        shift[j] = m;
    }
    for (std::size_t j1 = 1; j1 < n; ++j1) {
        for (std::size_t j2 = 1; j1 + j2 < n; ++j2) {
            const std::size_t j3 = j1 + j2;
            const double bound = prof.L_hat[j2] + prof.L_extended[j1] * shift[j2] + 5.0 * rf.noise * (1.0 + shift[j2]);
            const double excess = prof.L_hat[j3] - bound;
            ++c.triples;
            c.worst_excess = std::max(c.worst_excess, excess);
            if (excess > 0.0) ++c.violations;
        }
    }
    if (c.triples == 0) c.worst_excess = 0.0;
    return c;
}

struct ExactOrderCheck {
    BigOCheck big_o;
    ThetaProfile profile;
    SubadditivityCheck subadditivity;
    Verdict3 clause_a = Verdict3::Inconclusive;  // bounded, some row positive
    Verdict3 clause_b = Verdict3::Inconclusive;  // clause A with rows θ ≤ Δ/2 only
    Verdict3 clause_c = Verdict3::Inconclusive;  // bounded, zero set of measure ~0
    std::optional<Verdict3> clause_c_prime;      // exponential-rate γ: no zero rows at all
    Verdict3 verdict = Verdict3::Inconclusive;   // clause A
};

inline ExactOrderCheck check_exact_order(const RatioField& rf, const WeightFunction& gamma, double delta,
                                         const LimsupPolicy& p = {}) {
    ExactOrderCheck c;
    c.big_o = check_bigO(rf, gamma.verified(), p);
    c.profile = theta_profile(rf, delta, p);
    c.subadditivity = check_subadditivity(c.profile, rf, gamma);
    const auto& prof = c.profile;

    auto clause_a = [&](double theta_max) {
        const RowCounts rc = count_rows(prof.theta, prof.verdicts, theta_max);
        if (c.big_o.verdict == Verdict3::Fail) return Verdict3::Fail;
        if (rc.positive > 0) return c.big_o.verdict == Verdict3::Pass ? Verdict3::Pass : Verdict3::Inconclusive;
        if (rc.zero > 0 && rc.inconclusive + rc.infinite == 0) return Verdict3::Fail;
        return Verdict3::Inconclusive;
    };
    c.clause_a = clause_a(delta);
    c.clause_b = clause_a(0.5 * delta);

    const RowCounts all = count_rows(prof.theta, prof.verdicts, delta);
    const std::size_t nonzero_rows = prof.theta.size() - 1;
    const bool mostly_positive = 2 * all.positive >= nonzero_rows;
    const double allowance = delta / static_cast<double>(prof.theta.size());
    if (c.big_o.verdict == Verdict3::Fail || prof.robust_zero_measure > allowance) {
        c.clause_c = Verdict3::Fail;
    } else if (c.big_o.verdict == Verdict3::Pass && mostly_positive) {
        c.clause_c = Verdict3::Pass;
    }

    if (gamma.declared_class() == WeightClass::ExponentialRate && gamma.verified()) {
        Verdict3 v = Verdict3::Inconclusive;
        if (c.big_o.verdict == Verdict3::Fail || !prof.zero_rows.empty()) v = Verdict3::Fail;
        else if (c.big_o.verdict == Verdict3::Pass && mostly_positive) v = Verdict3::Pass;
        c.clause_c_prime = v;
    }
    c.verdict = c.clause_a;
    return c;
}

// ---------------------------------------------------------------------------
// Exponential stability: F(t) = L - ∫_0^t f versus x itself

struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Least squares of log|v| against t, samples below 1e-30 left out.
inline LogFit fit_log_magnitude(const std::vector<double>& t, const std::vector<double>& v, double floor = 1e-30) {
    LogFit fit;
    double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(std::fabs(v[i]) > floor)) continue;
        const double y = std::log(std::fabs(v[i]));
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
        syy += y * y;
        ++fit.points;
    }
    if (fit.points < 3) return fit;
    const double n = static_cast<double>(fit.points);
    const double vt = stt - st * st / n, vy = syy - sy * sy / n, cty = sty - st * sy / n;
    fit.slope = vt > 0 ? cty / vt : 0.0;
    fit.intercept = (sy - fit.slope * st) / n;
    fit.r2 = vy > 0 ? std::clamp(cty * cty / (vt * vy), 0.0, 1.0) : 1.0;
    return fit;
}

struct ExpStabilityCheck {
    double L = 0.0;
    double tail_integral = 0.0;  // ∫_T^{2T} f
    bool L_converged = false;
    LogFit F_fit;  // η̂ = -slope
    LogFit x_fit;  // β̂ = -slope
    double eta_hat = 0.0;
    double beta_hat = 0.0;
    bool F_trivial = false;
    bool x_trivial = false;
    Verdict3 side_a = Verdict3::Inconclusive;
    Verdict3 side_b = Verdict3::Inconclusive;
    Consistency consistency = Consistency::Inconclusive;
};

struct ExpStabilityOptions {
    double r2_min = 0.9;
    double rate_min = 1e-3;       // slopes below this count as no decay
    double tail_rel_tol = 1e-6;   // |∫_T^{2T} f| ≤ this·max(1, |L|) for L to exist
    std::size_t max_fit_points = 2000;
};

inline ExpStabilityCheck check_exponential_stability(const ScalarFunction& f, const Trajectory& x,
                                                     const ExpStabilityOptions& opt = {}) {
    ExpStabilityCheck c;
    const Grid& g = x.grid;
    const double T = g.t_end();
    const double head = quad::integral_relative(f, g.t_start, T, 1e-12);
    c.tail_integral = quad::integral_relative(f, T, 2.0 * T, 1e-12);
    c.L = head + c.tail_integral;
    c.L_converged = std::fabs(c.tail_integral) <= opt.tail_rel_tol * std::max(1.0, std::fabs(c.L));

    const auto [a, b] = detail::index_range(g, 0.5 * T, T);
    const std::size_t stride = std::max<std::size_t>(1, (b - a + 1) / opt.max_fit_points);
    std::vector<std::size_t> idx;
    for (std::size_t k = a; k <= b; k += stride) idx.push_back(k);
    if (idx.back() != b) idx.push_back(b);

    // F(t_k) = ∫_{t_k}^{2T} f accumulated backwards piece by piece.
    std::vector<double> ts(idx.size()), Fv(idx.size()), xv(idx.size());
    double acc = c.tail_integral;
    double upper = T;
    for (std::size_t i = idx.size(); i-- > 0;) {
        const double t = g.t(idx[i]);
        acc += quad::integral_relative(f, t, upper, 1e-12);
        upper = t;
        ts[i] = t;
        Fv[i] = acc;
        xv[i] = std::fabs(x.at(idx[i]));
    }
    c.F_fit = fit_log_magnitude(ts, Fv);
    c.x_fit = fit_log_magnitude(ts, xv);
    c.eta_hat = -c.F_fit.slope;
    c.beta_hat = -c.x_fit.slope;
    c.F_trivial = c.F_fit.points < 3;
    c.x_trivial = c.x_fit.points < 3;

    auto decays = [&](const LogFit& fit, bool trivial, double rate) {
        if (trivial) return Verdict3::Pass;
        return rate > opt.rate_min && fit.r2 >= opt.r2_min ? Verdict3::Pass : Verdict3::Fail;
    };
    c.side_a = c.L_converged ? decays(c.F_fit, c.F_trivial, c.eta_hat) : Verdict3::Fail;
    c.side_b = decays(c.x_fit, c.x_trivial, c.beta_hat);
    c.consistency = consistency_of(c.side_a, c.side_b);
    return c;
}

// ---------------------------------------------------------------------------
// Liapunov exponents

struct LiapunovEstimate {
    std::vector<Window> windows;  // max of (1/t) log‖x(t)‖, oldest first
    double estimate = 0.0;        // last window
    double trend = 0.0;           // last minus previous
    bool defined = true;
    std::string note;
};

/// (1/t)·log‖x(t)‖ over the final fifth of the horizon, in four windows of
/// length T/20. The windows are short so the t^{n-1} factor of a Jordan
/// block shows up as log(t)/t at t ≈ T rather than at T/2.
inline LiapunovEstimate estimate_liapunov(const Trajectory& x, NormKind norm = NormKind::Spectral) {
    LiapunovEstimate e;
    const Grid& g = x.grid;
    const double T = g.t_end();
    for (int i = 0; i < 4; ++i) {
        Window w;
        w.t_lo = T * (0.8 + 0.05 * i);
        w.t_hi = T * (0.85 + 0.05 * i);
        w.max_ratio = -std::numeric_limits<double>::infinity();
        const auto [a, b] = detail::index_range(g, w.t_lo, w.t_hi);
        for (std::size_t k = a; k <= b; ++k) {
            const double t = g.t(k);
            const double nv = x.norm(k, norm);
            if (!(t > 0.0)) continue;
            if (nv == 0.0) {
                e.defined = false;
                continue;
            }
            w.max_ratio = std::max(w.max_ratio, std::log(nv) / t);
        }
        e.windows.push_back(w);
    }
    if (!e.defined) e.note = "zero norm on the tail";
    e.estimate = e.windows.back().max_ratio;
    e.trend = e.windows.back().max_ratio - e.windows[e.windows.size() - 2].max_ratio;
    return e;
}

struct LeComponent {
    double C_hat = 0.0;  // max of |F_{i,θ}(t)| e^{-(α+ε)t}
    BigOCheck stabilization;
};

struct LePreservationCheck {
    std::vector<double> epsilons;
    std::vector<std::vector<LeComponent>> per_epsilon;  // [ε][component]
    Verdict3 verdict = Verdict3::Inconclusive;
};

/// Componentwise ‖F_{i,θ}(t)‖ ≤ C_i(ε) e^{(α+ε)t}: C_i(ε) must stop growing
/// across the tail windows for every ε.
inline LePreservationCheck check_le_preservation(const std::vector<MovingAverageField>& components, double alpha,
                                                 const std::vector<double>& epsilons, const LimsupPolicy& p = {}) {
    if (components.empty()) throw std::invalid_argument("le preservation: no components");
    LePreservationCheck c;
    c.epsilons = epsilons;
    bool all = true;
    for (double eps : epsilons) {
        if (!(eps > 0.0)) throw std::invalid_argument("le preservation: epsilons must be positive");
        const Grid& g = components.front().grid;
        std::vector<double> lg(g.n);
        for (std::size_t k = 0; k < g.n; ++k) lg[k] = (alpha + eps) * g.t(k);
        std::vector<LeComponent> row;
        for (const auto& field : components) {
            LeComponent lc;
            lc.stabilization = check_bigO(ratio_field(field, lg), true, p);
            lc.C_hat = lc.stabilization.K_hat;
            all = all && lc.stabilization.verdict == Verdict3::Pass;
            row.push_back(std::move(lc));
        }
        c.per_epsilon.push_back(std::move(row));
    }
    c.verdict = all ? Verdict3::Pass : Verdict3::Fail;
    return c;
}

template <class F>
LePreservationCheck check_le_preservation(const std::vector<F>& forcing, double alpha, double delta,
                                          const std::vector<double>& epsilons, const Grid& grid, int theta_count = 64,
                                          double quad_tol = kDefaultQuadTol, const LimsupPolicy& p = {}) {
    std::vector<MovingAverageField> parts;
    for (const auto& f : forcing) parts.push_back(moving_average_field(f, uniform_theta_grid(delta, theta_count), grid, quad_tol));
    return check_le_preservation(parts, alpha, epsilons, p);
}

// ---------------------------------------------------------------------------
// Derivative bounds

struct DerivativeBoundsCheck {
    LimsupEstimate x_gamma, dx_gamma, F_gamma;
    std::optional<LimsupEstimate> x_Gamma, dx_Gamma, F_Gamma, gamma_Gamma;
    bool stable = true;  // every eigenvalue of A in the open left half plane
};

inline DerivativeBoundsCheck check_derivative_bounds(const Trajectory& x, const Trajectory& dx, const Trajectory& F,
                                                     const WeightFunction& gamma,
                                                     const std::optional<WeightFunction>& Gamma,
                                                     const LimsupPolicy& p = {}, NormKind norm = NormKind::Spectral) {
    DerivativeBoundsCheck c;
    const auto lg = log_weight_samples(gamma, x.grid);
    c.x_gamma = limsup_of_samples(x.grid, ratio_samples(x, lg, norm), p);
    c.dx_gamma = limsup_of_samples(x.grid, ratio_samples(dx, lg, norm), p);
    c.F_gamma = limsup_of_samples(x.grid, ratio_samples(F, lg, norm), p);
    if (Gamma) {
        const auto lG = log_weight_samples(*Gamma, x.grid);
        c.x_Gamma = limsup_of_samples(x.grid, ratio_samples(x, lG, norm), p);
        c.dx_Gamma = limsup_of_samples(x.grid, ratio_samples(dx, lG, norm), p);
        c.F_Gamma = limsup_of_samples(x.grid, ratio_samples(F, lG, norm), p);
        std::vector<double> r(x.grid.n);
        for (std::size_t k = 0; k < x.grid.n; ++k) r[k] = std::exp(lg[k] - lG[k]);
        c.gamma_Gamma = limsup_of_samples(x.grid, r, p);
    }
    return c;
}

inline Trajectory forcing_trajectory(const SystemSpec& spec, const Grid& grid) {
    Trajectory out(grid, spec.dim(), "F");
    for (std::size_t k = 0; k < grid.n; ++k) out.set(k, spec.forcing(grid.t(k)));
    return out;
}

// ---------------------------------------------------------------------------
// Scenarios and the cross-check

struct ClassifyOptions {
    LimsupPolicy limsup;
    ExpStabilityOptions exp_stability;
    double quad_tol = kDefaultQuadTol;
    std::vector<double> epsilons = {0.05, 0.1, 0.2};
    double liapunov_margin = 0.05;  // on top of (n-1)·log(T)/T
    NormKind norm = NormKind::Spectral;
};

struct Scenario {
    std::string id;
    std::string theorem;
    std::vector<ScalarFunction> forcing;
    WeightFunction weight;
    std::optional<WeightFunction> aux_weight;  // Γ
    std::optional<double> alpha;               // scalar equation y' = -αy + f
    std::optional<Matrix> A;                   // system x' = Ax + F
    Vector zeta;
    double y0 = 0.0;
    Grid grid = Grid::span(0.0, 10.0, 0.01);
    double delta = 1.0;
    int theta_count = 64;
    ClassifyOptions options;

    [[nodiscard]] bool is_system() const { return A.has_value(); }

    [[nodiscard]] double scalar_rate() const {
        if (alpha) return *alpha;
        if (A && A->rows() == 1) return -(*A)(0, 0);
        throw std::invalid_argument("scenario " + id + ": theorem needs a scalar equation (alpha)");
    }
    [[nodiscard]] double scalar_start() const {
        if (!alpha && A && zeta.size() == 1) return zeta[0];
        return y0;
    }
    [[nodiscard]] SystemSpec system() const {
        SystemSpec s;
        if (A) {
            s.A = *A;
            s.zeta = zeta.size() == A->rows() ? zeta : Vector::Zero(A->rows());
        } else {
            s.A = Matrix::Constant(1, 1, -scalar_rate());
            s.zeta = Vector::Constant(1, y0);
        }
        s.F = forcing;
        s.validate();
        return s;
    }
};

inline const std::vector<std::string>& supported_theorems() {
    static const std::vector<std::string> ids = {"4.3",  "4.4",  "4.5",  "4.6",  "4.8",  "4.12", "4.13",
                                                 "5.1",  "5.7",  "5.8",  "5.10", "5.11", "unstable-dominant",
                                                 "exp-stability"};
    return ids;
}

inline bool is_supported_theorem(const std::string& id) {
    const auto& ids = supported_theorems();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

struct ClassificationReport {
    std::string scenario;
    std::string theorem;
    Verdict3 condition = Verdict3::Inconclusive;
    Verdict3 simulation = Verdict3::Inconclusive;
    Consistency consistency = Consistency::Inconclusive;
    Json clauses = Json::object();
    std::vector<std::string> notes;
};

struct ScenarioArtifacts {
    std::optional<Trajectory> solution;
    std::vector<double> log_gamma;
    std::optional<MovingAverageField> field;  // scalar field, or its norm for systems
    std::optional<ThetaProfile> profile;
    std::optional<LimsupEstimate> solution_limsup;
};

struct ScenarioOutcome {
    ClassificationReport report;
    ScenarioArtifacts artifacts;
};

// Evidence as JSON. Doubles go in as numbers; the report writer fixes their
// formatting.

inline Json to_json(const std::vector<Window>& ws) {
    Json out = Json::array();
    for (const auto& w : ws) out.push_back(Json::array({w.t_lo, w.t_hi, w.max_ratio}));
    return out;
}

inline Json to_json(const LimsupEstimate& e) {
    Json j;
    j["verdict"] = limsup_verdict_name(e.verdict);
    j["final_estimate"] = e.final_estimate;
    j["rule"] = e.rule;
    j["windows"] = to_json(e.windows);
    return j;
}

inline Json to_json(const BigOCheck& c) {
    Json j;
    j["verdict"] = verdict3_name(c.verdict);
    j["K_hat"] = c.K_hat;
    j["before_max"] = c.before_max;
    j["windows"] = to_json(c.windows);
    j["reason"] = c.reason;
    return j;
}

inline Json to_json(const RowCounts& c) {
    Json j;
    j["zero"] = c.zero;
    j["positive_finite"] = c.positive;
    j["infinite"] = c.infinite;
    j["inconclusive"] = c.inconclusive;
    return j;
}

inline Json to_json(const LittleOCheck& c) {
    Json j;
    j["verdict"] = verdict3_name(c.verdict);
    j["rows"] = to_json(c.counts);
    j["reason"] = c.reason;
    double worst = 0.0;
    for (const auto& r : c.rows) worst = std::max(worst, r.final_estimate);
    j["max_final_estimate"] = worst;
    return j;
}

inline Json to_json(const ThetaProfile& p) {
    Json j;
    j["rows"] = to_json(count_rows(p.theta, p.verdicts, p.delta));
    j["zero_set_measure_estimate"] = p.zero_set_measure_estimate;
    j["robust_zero_measure"] = p.robust_zero_measure;
    j["zero_rows"] = p.zero_rows;
    j["isolated_zero_rows"] = p.isolated_zero_rows;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 1; i < p.L_hat.size(); ++i) {
        lo = std::min(lo, p.L_hat[i]);
        hi = std::max(hi, p.L_hat[i]);
    }
    j["L_hat_min"] = p.L_hat.size() > 1 ? lo : 0.0;
    j["L_hat_max"] = hi;
    return j;
}

inline Json to_json(const ExactOrderCheck& c) {
    Json j;
    j["verdict"] = verdict3_name(c.verdict);
    j["clause_a"] = verdict3_name(c.clause_a);
    j["clause_b"] = verdict3_name(c.clause_b);
    j["clause_c"] = verdict3_name(c.clause_c);
    if (c.clause_c_prime) j["clause_c_prime"] = verdict3_name(*c.clause_c_prime);
    j["big_o"] = to_json(c.big_o);
    j["profile"] = to_json(c.profile);
    Json s;
    s["triples"] = c.subadditivity.triples;
    s["violations"] = c.subadditivity.violations;
    s["worst_excess"] = c.subadditivity.worst_excess;
    if (!c.subadditivity.note.empty()) s["note"] = c.subadditivity.note;
    j["subadditivity"] = s;
    return j;
}

inline Json to_json(const LogFit& f) {
    Json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r2"] = f.r2;
    j["points"] = f.points;
    return j;
}

inline Json to_json(const ExpStabilityCheck& c) {
    Json j;
    j["L"] = c.L;
    j["tail_integral"] = c.tail_integral;
    j["L_converged"] = c.L_converged;
    j["eta_hat"] = c.eta_hat;
    j["beta_hat"] = c.beta_hat;
    j["F_fit"] = to_json(c.F_fit);
    j["x_fit"] = to_json(c.x_fit);
    j["F_trivial"] = c.F_trivial;
    j["x_trivial"] = c.x_trivial;
    j["side_a"] = verdict3_name(c.side_a);
    j["side_b"] = verdict3_name(c.side_b);
    return j;
}

inline Json to_json(const LiapunovEstimate& e) {
    Json j;
    j["estimate"] = e.estimate;
    j["trend"] = e.trend;
    j["defined"] = e.defined;
    j["windows"] = to_json(e.windows);
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

inline Json to_json(const LePreservationCheck& c) {
    Json j;
    j["verdict"] = verdict3_name(c.verdict);
    Json per = Json::array();
    for (std::size_t e = 0; e < c.epsilons.size(); ++e) {
        Json row;
        row["epsilon"] = c.epsilons[e];
        Json comps = Json::array();
        for (const auto& lc : c.per_epsilon[e]) {
            Json cj;
            cj["C_hat"] = lc.C_hat;
            cj["verdict"] = verdict3_name(lc.stabilization.verdict);
            cj["last_window_max"] = lc.stabilization.windows.back().max_ratio;
            cj["before_max"] = lc.stabilization.before_max;
            comps.push_back(cj);
        }
        row["components"] = comps;
        per.push_back(row);
    }
    j["per_epsilon"] = per;
    return j;
}

inline Json to_json(const WeightVerification& v) {
    Json j;
    j["declared"] = weight_class_name(v.declared);
    j["verdict"] = verdict3_name(v.verdict);
    if (v.subexponential) {
        j["deviation_per_horizon"] = v.subexponential->deviation_per_horizon;
        j["horizons"] = v.subexponential->horizons;
    }
    if (v.monotone) j["monotone"] = verdict3_name(v.monotone->verdict);
    if (v.rate) {
        j["rate_class"] = rate_class_name(v.rate->classification);
        j["rate"] = v.rate->value;
    }
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

namespace detail {

inline void require_scalar(const Scenario& s) {
    if (s.forcing.size() != 1)
        throw std::invalid_argument("scenario " + s.id + ": theorem " + s.theorem + " needs a scalar forcing");
}

inline std::vector<MovingAverageField> component_fields(const Scenario& s) {
    std::vector<MovingAverageField> out;
    const auto theta = uniform_theta_grid(s.delta, s.theta_count);
    for (const auto& f : s.forcing) out.push_back(moving_average_field(f, theta, s.grid, s.options.quad_tol));
    return out;
}

inline Verdict3 all_of(std::initializer_list<Verdict3> vs) {
    bool inconclusive = false;
    for (Verdict3 v : vs) {
        if (v == Verdict3::Fail) return Verdict3::Fail;
        if (v == Verdict3::Inconclusive) inconclusive = true;
    }
    return inconclusive ? Verdict3::Inconclusive : Verdict3::Pass;
}

}  // namespace detail

/// Runs the condition side and the solution side for the scenario's theorem
/// and compares them. Throws std::invalid_argument for unknown theorem ids.
inline ScenarioOutcome cross_check(Scenario s) {
    if (!is_supported_theorem(s.theorem))
        throw std::invalid_argument("scenario " + s.id + ": unknown theorem id '" + s.theorem + "'");
    ScenarioOutcome out;
    auto& rep = out.report;
    auto& art = out.artifacts;
    rep.scenario = s.id;
    rep.theorem = s.theorem;
    const auto& opt = s.options;
    const auto& p = opt.limsup;
    const Grid& g = s.grid;
    const std::string& th = s.theorem;

    const auto wv = verify_weight(s.weight, g.t_end());
    rep.clauses["weight"] = to_json(wv);
    rep.clauses["weight"]["expr"] = s.weight.label();
    if (s.aux_weight) {
        const auto av = verify_weight(*s.aux_weight, g.t_end());
        rep.clauses["aux_weight"] = to_json(av);
        rep.clauses["aux_weight"]["expr"] = s.aux_weight->label();
    }
    art.log_gamma = log_weight_samples(s.weight, g);

    const bool scalar_theorem = th.rfind("4.", 0) == 0 || th == "exp-stability";
    if (scalar_theorem) {
        detail::require_scalar(s);
        const double alpha = s.scalar_rate();
        if (!(alpha > 0.0)) throw std::invalid_argument("scenario " + s.id + ": alpha must be positive");
        art.solution = solve_scalar(s.forcing[0], alpha, s.scalar_start(), g, opt.quad_tol);
    } else {
        art.solution = solve_system(s.system(), g, opt.quad_tol);
    }
    art.solution->check_finite();
    const Trajectory& x = *art.solution;
    const auto sim = limsup_of_samples(g, ratio_samples(x, art.log_gamma, opt.norm), p);
    art.solution_limsup = sim;

    if (th == "4.3" || th == "4.4" || th == "4.5" || th == "4.6" || th == "4.8" || th == "4.12" || th == "4.13") {
        const auto field = moving_average_field(s.forcing[0], uniform_theta_grid(s.delta, s.theta_count), g, opt.quad_tol);
        const auto rf = ratio_field(field, art.log_gamma);
        art.field = field;
        rep.clauses["solution"] = to_json(sim);
        if ((th == "4.4" || th == "4.13") && !(s.weight.expr() && s.weight.expr()->is_constant()))
            rep.notes.push_back("theorem " + th + " is stated for a constant weight");
        if (th == "4.3" || th == "4.4" || th == "4.5") {
            const auto c = check_bigO(rf, s.weight.verified(), p);
            rep.clauses["condition"] = to_json(c);
            rep.condition = c.verdict;
            rep.simulation = bounded_verdict(sim.verdict);
        } else if (th == "4.6" || th == "4.8") {
            const auto c = check_littleo(rf, s.weight.verified(), p);
            rep.clauses["condition"] = to_json(c);
            rep.condition = c.verdict;
            rep.simulation = zero_verdict(sim.verdict);
        } else {
            const auto c = check_exact_order(rf, s.weight, s.delta, p);
            art.profile = c.profile;
            rep.clauses["condition"] = to_json(c);
            rep.condition = c.verdict;
            rep.simulation = exact_verdict(sim.verdict);
            Consistency extra = consistency_of(c.clause_c, rep.simulation);
            if (c.clause_c_prime) extra = combine(extra, consistency_of(*c.clause_c_prime, rep.simulation));
            rep.consistency = combine(consistency_of(rep.condition, rep.simulation),
                                      extra == Consistency::Disagree ? extra : Consistency::Agree);
            if (!c.profile.isolated_zero_rows.empty())
                rep.notes.push_back("isolated zero rows in the theta profile");
            if (c.subadditivity.violations > 0) rep.notes.push_back("subadditivity violations in the theta profile");
            rep.clauses["consistency"] = consistency_name(rep.consistency);
            return out;
        }
    } else if (th == "5.1" || th == "unstable-dominant") {
        const auto spec = s.system();
        const auto field = field_norm(detail::component_fields(s), opt.norm);
        const auto rf = ratio_field(field, art.log_gamma);
        art.field = field;
        rep.clauses["solution"] = to_json(sim);
        if (th == "5.1") {
            const auto c = check_bigO(rf, s.weight.verified(), p);
            rep.clauses["condition"] = to_json(c);
            rep.condition = c.verdict;
            rep.simulation = bounded_verdict(sim.verdict);
        } else {
            const auto sd = spectral_data(spec.A);
            RateEstimate rate;
            bool applicable = false;
            if (s.weight.expr()) {
                const double T = g.t_end();
                rate = log_derivative_rate(s.weight, {0.25 * T, 0.5 * T, T});
                applicable = rate.value > sd.abscissa && sd.abscissa >= 0.0;
            }
            Json u;
            u["lambda"] = sd.abscissa;
            u["multiplicity"] = sd.dominant_multiplicity;
            u["beta"] = rate.value;
            u["applicable"] = applicable;
            rep.clauses["spectrum"] = u;
            const auto c = check_exact_order(rf, s.weight, s.delta, p);
            art.profile = c.profile;
            rep.clauses["condition"] = to_json(c);
            if (!applicable) {
                rep.notes.push_back("inapplicable: need beta > lambda(A) >= 0");
                rep.condition = Verdict3::Inconclusive;
            } else {
                rep.condition = c.clause_a;
            }
            rep.simulation = exact_verdict(sim.verdict);
        }
    } else if (th == "5.7" || th == "5.8") {
        const auto spec = s.system();
        const auto sd = spectral_data(spec.A);
        const auto dx = derivative_trajectory(x, spec);
        const auto F = forcing_trajectory(spec, g);
        const auto c = check_derivative_bounds(x, dx, F, s.weight, s.aux_weight, p, opt.norm);
        Json d;
        d["stable"] = sd.abscissa < 0.0;
        d["x_over_gamma"] = to_json(c.x_gamma);
        d["dx_over_gamma"] = to_json(c.dx_gamma);
        d["F_over_gamma"] = to_json(c.F_gamma);
        if (c.x_Gamma) {
            d["x_over_Gamma"] = to_json(*c.x_Gamma);
            d["dx_over_Gamma"] = to_json(*c.dx_Gamma);
            d["F_over_Gamma"] = to_json(*c.F_Gamma);
            d["gamma_over_Gamma"] = to_json(*c.gamma_Gamma);
        }
        rep.clauses["derivative_bounds"] = d;
        if (!(sd.abscissa < 0.0)) rep.notes.push_back("A is not stable; the theorem does not apply");
        if (th == "5.7") {
            rep.condition = bounded_verdict(c.F_gamma.verdict);
            rep.simulation = detail::all_of({bounded_verdict(c.x_gamma.verdict), bounded_verdict(c.dx_gamma.verdict)});
        } else {
            if (!s.aux_weight) throw std::invalid_argument("scenario " + s.id + ": theorem 5.8 needs aux_weight");
            const auto field = field_norm(detail::component_fields(s), opt.norm);
            const auto rf = ratio_field(field, art.log_gamma);
            art.field = field;
            const auto eo = check_exact_order(rf, s.weight, s.delta, p);
            art.profile = eo.profile;
            rep.clauses["condition"] = to_json(eo);
            if (c.gamma_Gamma->verdict != LimsupVerdict::Zero)
                rep.notes.push_back("gamma/Gamma does not vanish on the horizon");
            rep.condition = detail::all_of({eo.clause_a, exact_verdict(c.F_Gamma->verdict)});
            rep.simulation = detail::all_of({exact_verdict(c.x_gamma.verdict), exact_verdict(c.dx_Gamma->verdict)});
        }
        if (!(sd.abscissa < 0.0)) {
            rep.condition = Verdict3::Inconclusive;
        }
    } else if (th == "5.10" || th == "5.11") {
        const auto spec = s.system();
        const auto sd = spectral_data(spec.A);
        const auto le = check_le_preservation(detail::component_fields(s), sd.abscissa, opt.epsilons, p);
        const auto est = estimate_liapunov(x, opt.norm);
        const double T = g.t_end();
        const double slack = (sd.dominant_multiplicity - 1) * std::log(T) / T + opt.liapunov_margin;
        Json l;
        l["lambda"] = sd.abscissa;
        l["multiplicity"] = sd.dominant_multiplicity;
        l["slack"] = slack;
        l["estimate"] = to_json(est);
        rep.clauses["liapunov"] = l;
        rep.clauses["condition"] = to_json(le);
        rep.condition = le.verdict;
        if (!est.defined) rep.notes.push_back("solution vanishes on the tail; exponent is -inf");
        rep.simulation = (!est.defined || est.estimate <= sd.abscissa + slack) ? Verdict3::Pass : Verdict3::Fail;
    } else if (th == "exp-stability") {
        const auto c = check_exponential_stability(s.forcing[0], x, opt.exp_stability);
        rep.clauses["exp_stability"] = to_json(c);
        if (c.F_trivial) rep.notes.push_back("F identically below 1e-30 on the tail");
        if (c.x_trivial) rep.notes.push_back("x identically below 1e-30 on the tail");
        rep.condition = c.side_a;
        rep.simulation = c.side_b;
    }
    rep.consistency = consistency_of(rep.condition, rep.simulation);
    rep.clauses["consistency"] = consistency_name(rep.consistency);
    return out;
}

}  // namespace forcelab
