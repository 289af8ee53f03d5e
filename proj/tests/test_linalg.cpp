#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "forcelab/linalg.hpp"

using forcelab::Matrix;
using forcelab::matrix_exponential;
using forcelab::spectral_data;

namespace {

double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

// exp(tA) for symmetric A through the eigendecomposition.
Matrix symmetric_oracle(const Matrix& A, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    const Eigen::VectorXd e = (t * es.eigenvalues().array()).exp();
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
}

Matrix random_symmetric(int d, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = n(rng);
    return 0.5 * (m + m.transpose());
}

}  // namespace

TEST(MatrixExponential, ClosedForms) {
    EXPECT_TRUE(matrix_exponential(Matrix::Zero(3, 3), 2.0).isIdentity(0.0));

    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = -1;
    D(1, 1) = -2;
    Matrix eD = Matrix::Zero(2, 2);
    eD(0, 0) = std::exp(-1.0);
    eD(1, 1) = std::exp(-2.0);
    EXPECT_LE(rel_err(matrix_exponential(D, 1.0), eD), 1e-14);

    Matrix N = Matrix::Zero(2, 2);
    N(0, 1) = 1;
    Matrix eN = Matrix::Identity(2, 2);
    eN(0, 1) = 3;
    EXPECT_LE(rel_err(matrix_exponential(N, 3.0), eN), 1e-14);

    Matrix R(2, 2);
    R << 0, 1, -1, 0;
    for (double t : {0.3, 1.0, 7.5, 100.0}) {
        Matrix eR(2, 2);
        eR << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
        EXPECT_LE(rel_err(matrix_exponential(R, t), eR), 1e-12) << t;
    }
}

TEST(MatrixExponential, RandomSymmetricAgainstEigendecomposition) {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const Matrix S = random_symmetric(5, seed);
        for (double t : {0.1, 1.0, 3.0}) EXPECT_LE(rel_err(matrix_exponential(S, t), symmetric_oracle(S, t)), 1e-12);
    }
}

TEST(MatrixExponential, SemigroupProperty) {
    const Matrix S = random_symmetric(5, 42);
    Matrix J(2, 2);
    J << 1, 1, 0, 1;
    for (const Matrix& A : {S, J}) {
        for (double t : {0.2, 1.3}) {
            for (double s : {0.7, 2.1}) {
                const Matrix lhs = matrix_exponential(A, t + s);
                const Matrix rhs = matrix_exponential(A, t) * matrix_exponential(A, s);
                EXPECT_LE(rel_err(rhs, lhs), 1e-9);
            }
        }
    }
}

TEST(MatrixExponential, OverflowIsReported) {
    Matrix A = Matrix::Identity(2, 2);
    EXPECT_THROW((void)matrix_exponential(A, 1e6), forcelab::OverflowError);
    EXPECT_THROW((void)matrix_exponential(Matrix::Zero(2, 3), 1.0), std::invalid_argument);
}

TEST(Spectral, Examples) {
    Matrix R(2, 2);
    R << 0, 1, -1, 0;
    auto sd = spectral_data(R);
    ASSERT_EQ(sd.eigenvalues.size(), 2u);
    EXPECT_NEAR(sd.abscissa, 0.0, 1e-12);
    EXPECT_EQ(sd.dominant_multiplicity, 1);
    EXPECT_NEAR(std::abs(sd.eigenvalues[0].imag()), 1.0, 1e-12);

    Matrix J(2, 2);
    J << 1, 1, 0, 1;
    sd = spectral_data(J);
    EXPECT_NEAR(sd.abscissa, 1.0, 1e-9);
    EXPECT_EQ(sd.dominant_multiplicity, 2);

    sd = spectral_data(-Matrix::Identity(3, 3));
    EXPECT_NEAR(sd.abscissa, -1.0, 1e-12);
    EXPECT_EQ(sd.dominant_multiplicity, 3);

    // Jordan block of size 3 with a perturbed-looking spectrum still counts 3.
    Matrix J3 = 2.0 * Matrix::Identity(3, 3);
    J3(0, 1) = 1;
    J3(1, 2) = 1;
    sd = spectral_data(J3);
    EXPECT_EQ(sd.dominant_multiplicity, 3);
}

TEST(Spectral, AbscissaMatchesSymmetricSolver) {
    for (unsigned seed = 10; seed < 15; ++seed) {
        const Matrix S = random_symmetric(6, seed);
        Eigen::SelfAdjointEigenSolver<Matrix> es(S);
        EXPECT_NEAR(spectral_data(S).abscissa, es.eigenvalues().maxCoeff(), 1e-9);
    }
}

TEST(OperatorNorm, SpectralAndOne) {
    Matrix M(2, 2);
    M << 1, -2, 3, 4;
    EXPECT_NEAR(forcelab::operator_norm(M, forcelab::NormKind::One), 6.0, 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(M.transpose() * M);
    EXPECT_NEAR(forcelab::operator_norm(M), std::sqrt(es.eigenvalues().maxCoeff()), 1e-12);
}

TEST(GrowthEnvelope, HoldsWithSpectralMultiplicity) {
    std::vector<double> times;
    for (int i = 1; i <= 40; ++i) times.push_back(0.5 * i);
    Matrix J(2, 2);
    J << 1, 1, 0, 1;
    auto g = forcelab::growth_envelope(J, times);
    EXPECT_EQ(g.multiplicity, 2);
    EXPECT_TRUE(g.holds);
    // ‖exp(tJ)‖ / ((1+t) e^t) stays below a constant; with n = 1 it would not.
    Matrix R(2, 2);
    R << 0, 1, -1, 0;
    g = forcelab::growth_envelope(R, times);
    EXPECT_TRUE(g.holds);
    EXPECT_NEAR(g.C, 1.0, 1e-12);
    const Matrix S = random_symmetric(5, 7);
    EXPECT_TRUE(forcelab::growth_envelope(S, times).holds);
}
