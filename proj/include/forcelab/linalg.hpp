#pragma once

// Fundamental matrix Φ(t) = exp(tA), spectral abscissa and dominant
// multiplicity, operator norms. Dense Eigen matrices throughout.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "forcelab/trajectory.hpp"

namespace forcelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxDimension = 50;

class OverflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double operator_norm(const Matrix& m, NormKind kind = NormKind::Spectral) {
    if (m.size() == 0) return 0.0;
    if (kind == NormKind::One) return m.cwiseAbs().colwise().sum().maxCoeff();
    if (m.rows() == 1 && m.cols() == 1) return std::fabs(m(0, 0));
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

/// exp(tA) by scaling and squaring with the degree-13 Padé approximant.
inline Matrix matrix_exponential(const Matrix& A, double t) {
    if (A.rows() != A.cols()) throw std::invalid_argument("matrix_exponential: matrix must be square");
    if (A.rows() > kMaxDimension) throw std::invalid_argument("matrix_exponential: dimension above 50");
    if (!A.allFinite() || !std::isfinite(t)) throw std::invalid_argument("matrix_exponential: non-finite input");
    const Eigen::Index d = A.rows();
    const Matrix X = t * A;
    const double norm1 = X.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 == 0.0) return Matrix::Identity(d, d);

    // Largest 1-norm for which Padé(13) meets unit roundoff without scaling.
    constexpr double theta13 = 5.371920351148152;
    constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
                            129060195264000.0,   10559470521600.0,    670442572800.0,    33522128640.0,
                            1323241920.0,        40840800.0,          960960.0,          16380.0,
                            182.0,               1.0};
    int s = 0;
    if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    if (s > 1020) throw OverflowError("matrix_exponential: |tA| too large; rescale time or A");
    const Matrix Xs = X / std::ldexp(1.0, s);
    const Matrix I = Matrix::Identity(d, d);
    const Matrix X2 = Xs * Xs;
    const Matrix X4 = X2 * X2;
    const Matrix X6 = X4 * X2;
    const Matrix U =
        Xs * (X6 * (b[13] * X6 + b[11] * X4 + b[9] * X2) + b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * I);
    const Matrix V = X6 * (b[12] * X6 + b[10] * X4 + b[8] * X2) + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * I;
    Matrix R = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < s; ++k) {
        R = R * R;
        if (!R.allFinite()) break;
    }
    if (!R.allFinite()) throw OverflowError("matrix_exponential: result overflows at t=" + format_double(t) + "; rescale time or A");
    return R;
}

struct SpectralData {
    std::vector<std::complex<double>> eigenvalues;
    double abscissa = 0.0;       // λ(A), largest real part
    int dominant_multiplicity = 1;  // largest algebraic multiplicity among eigenvalues with real part λ(A)
    double cluster_tol = 1e-6;
};

inline SpectralData spectral_data(const Matrix& A, double cluster_tol = 1e-6) {
    if (A.rows() != A.cols() || A.rows() == 0) throw std::invalid_argument("spectral_data: matrix must be square");
    if (A.rows() > kMaxDimension) throw std::invalid_argument("spectral_data: dimension above 50");
    Eigen::EigenSolver<Matrix> es(A, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_data: eigenvalue iteration did not converge");
    SpectralData out;
    out.cluster_tol = cluster_tol;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(es.eigenvalues()[i]);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    out.abscissa = out.eigenvalues.front().real();
    for (const auto& e : out.eigenvalues) out.abscissa = std::max(out.abscissa, e.real());

    // Single-linkage clusters: defective eigenvalues come back split by
    // O(sqrt(eps)), far inside the tolerance.
    const std::size_t m = out.eigenvalues.size();
    std::vector<std::size_t> parent(m);
    for (std::size_t i = 0; i < m; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (std::abs(out.eigenvalues[i] - out.eigenvalues[j]) <= cluster_tol) parent[find(i)] = find(j);
    std::vector<int> count(m, 0);
    for (std::size_t i = 0; i < m; ++i) ++count[find(i)];
    out.dominant_multiplicity = 1;
    for (std::size_t i = 0; i < m; ++i)
        if (std::fabs(out.eigenvalues[i].real() - out.abscissa) <= cluster_tol)
            out.dominant_multiplicity = std::max(out.dominant_multiplicity, count[find(i)]);
    return out;
}

/// Fit of ‖Φ(t)‖ ≤ C (1+t)^(n-1) e^(λ t) on sample times.
struct GrowthEnvelope {
    double C = 0.0;
    double abscissa = 0.0;
    int multiplicity = 1;
    std::vector<double> times;
    std::vector<double> ratios;  // ‖Φ(t)‖ / ((1+t)^(n-1) e^(λ t))
    double first_half_max = 0.0;
    double second_half_max = 0.0;
    bool holds = false;  // the ratio does not grow over the second half
};

inline GrowthEnvelope growth_envelope(const Matrix& A, const std::vector<double>& times,
                                      NormKind norm = NormKind::Spectral) {
    const SpectralData sd = spectral_data(A);
    GrowthEnvelope g;
    g.abscissa = sd.abscissa;
    g.multiplicity = sd.dominant_multiplicity;
    g.times = times;
    for (double t : times) {
        const double scale = (g.multiplicity - 1) * std::log1p(t) + g.abscissa * t;
        // Compare in log space so large t does not overflow.
        const double ratio = std::exp(std::log(operator_norm(matrix_exponential(A, t), norm)) - scale);
        g.ratios.push_back(ratio);
        g.C = std::max(g.C, ratio);
    }
    const std::size_t half = times.size() / 2;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double& slot = i < half ? g.first_half_max : g.second_half_max;
        slot = std::max(slot, g.ratios[i]);
    }
    g.holds = std::isfinite(g.C) && g.second_half_max <= 1.05 * g.first_half_max;
    return g;
}

}  // namespace forcelab
