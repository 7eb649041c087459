#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include <urv/urv.hpp>

#include "oracles.hpp"

using urv::Index;
using urv::Matrix;

TEST(Gaussian, FrozenStream)
{
    // reference values from a separate Python implementation of the generator
    const Matrix g = urv::gaussian_matrix(2, 2, {42, 0});
    EXPECT_DOUBLE_EQ(g(0, 0), 0.6488364481780695);
    EXPECT_DOUBLE_EQ(g(1, 0), -0.7357943603690954);
    EXPECT_DOUBLE_EQ(g(0, 1), -0.9908395128275465);
    EXPECT_DOUBLE_EQ(g(1, 1), 1.623535076533881);
    EXPECT_EQ(urv::GaussianStream({0, 0}).word(0), 6235967106033911276ULL);
}

TEST(Gaussian, Deterministic)
{
    EXPECT_EQ(urv::gaussian_matrix(13, 7, {5, 2}), urv::gaussian_matrix(13, 7, {5, 2}));
}

TEST(Gaussian, StreamsAndSeedsDiffer)
{
    EXPECT_NE(urv::gaussian_matrix(4, 4, {5, 0}), urv::gaussian_matrix(4, 4, {5, 1}));
    EXPECT_NE(urv::gaussian_matrix(4, 4, {5, 0}), urv::gaussian_matrix(4, 4, {6, 0}));
    EXPECT_NE(urv::derive({5, 0}, 1), urv::derive({5, 0}, 2));
}

TEST(Gaussian, ColumnPrefixProperty)
{
    const Matrix full = urv::gaussian_matrix(30, 30, {9, 1});
    const Matrix part = urv::gaussian_matrix(30, 11, {9, 1});
    EXPECT_EQ(Matrix(full.block(0, 0, 30, 11)), part);
}

TEST(Gaussian, PooledMoments)
{
    const Matrix g = urv::gaussian_matrix(1000, 100, {2024, 0});
    double mean = 0;
    for (double v : g.values()) {
        mean += v;
    }
    mean /= static_cast<double>(g.size());
    double var = 0;
    double m4 = 0;
    for (double v : g.values()) {
        var += (v - mean) * (v - mean);
        m4 += std::pow(v - mean, 4);
    }
    var /= static_cast<double>(g.size() - 1);
    m4 /= static_cast<double>(g.size());
    EXPECT_LE(std::abs(mean), 0.02);
    EXPECT_GE(var, 0.98);
    EXPECT_LE(var, 1.02);
    EXPECT_NEAR(m4, 3.0, 0.1); // sd of the 4th moment estimate is ~0.03
    EXPECT_TRUE(g.all_finite());
}

TEST(Gaussian, TailFrequencies)
{
    const Matrix g = urv::gaussian_matrix(100000, 1, {7, 3});
    int beyond1 = 0;
    int beyond2 = 0;
    for (double v : g.values()) {
        beyond1 += std::abs(v) > 1.0;
        beyond2 += std::abs(v) > 2.0;
    }
    // P(|z|>1) = 0.3173, P(|z|>2) = 0.0455
    EXPECT_NEAR(beyond1 / 1e5, 0.3173, 0.005);
    EXPECT_NEAR(beyond2 / 1e5, 0.0455, 0.002);
}

TEST(Gaussian, RejectsEmpty)
{
    EXPECT_THROW(urv::gaussian_matrix(0, 3, {}), urv::invalid_input);
    EXPECT_THROW(urv::haar_orthogonal(0, {}), urv::invalid_input);
}

TEST(Haar, OrthogonalWithUnitDeterminant)
{
    for (Index n : {1, 2, 5, 17, 64}) {
        for (std::uint64_t s = 0; s < 3; ++s) {
            const Matrix q = urv::haar_orthogonal(n, {s, 9});
            EXPECT_LE(oracle::orthogonality(q), 10.0 * static_cast<double>(n) * urv::eps);
            // |det Q| as the product of |diag R| of a QR factorization of Q
            const oracle::MgsQr f = oracle::mgs_qr(q);
            double det = 1;
            for (Index i = 0; i < n; ++i) {
                det *= f.r(i, i);
            }
            EXPECT_NEAR(std::abs(det), 1.0, 1e-12);
        }
    }
}

TEST(Haar, IsQOfTheGaussianDraw)
{
    const Matrix q = urv::haar_orthogonal(12, {3, 4});
    const Matrix g = urv::gaussian_matrix(12, 12, {3, 4});
    const Matrix r = oracle::matmul(oracle::transpose(q), g);
    for (Index j = 0; j < 12; ++j) {
        EXPECT_GT(r(j, j), 0.0);
        for (Index i = j + 1; i < 12; ++i) {
            EXPECT_NEAR(r(i, j), 0.0, 1e-13);
        }
    }
}

TEST(Haar, OneByOneSignsAreBalanced)
{
    int plus = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const double v = urv::haar_orthogonal(1, {s, 0})(0, 0);
        ASSERT_EQ(std::abs(v), 1.0);
        plus += v > 0;
    }
    EXPECT_NEAR(plus / 1e4, 0.5, 0.015);
}

TEST(Haar, TwoByTwoMarginalMoment)
{
    double sum = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const double v = urv::haar_orthogonal(2, {s, 0})(0, 0);
        sum += v * v;
    }
    EXPECT_NEAR(sum / 1e4, 0.5, 0.015);
}

TEST(Haar, LeftInvarianceOfMoments)
{
    // W Q has the same law as Q: E|(WQ)_ij|^2 = 1/n for fixed orthogonal W
    const Index n = 4;
    const Matrix w_rot = urv::haar_orthogonal(n, {123, 456});
    Matrix w_perm(n, n);
    for (Index i = 0; i < n; ++i) {
        w_perm((i + 1) % n, i) = 1.0;
    }
    for (const Matrix* w : std::array<const Matrix*, 2>{&w_rot, &w_perm}) {
        Matrix acc(n, n);
        const int draws = 4000;
        for (int s = 0; s < draws; ++s) {
            const Matrix wq = urv::multiply(*w, urv::haar_orthogonal(n, {static_cast<std::uint64_t>(s), 1}));
            for (Index e = 0; e < acc.size(); ++e) {
                acc.data()[e] += wq.data()[e] * wq.data()[e];
            }
        }
        for (Index e = 0; e < acc.size(); ++e) {
            // q^2 ~ Beta(1/2, 3/2): sd of the mean is 0.25 / sqrt(4000) ~ 0.004
            EXPECT_NEAR(acc.data()[e] / draws, 0.25, 0.015);
        }
    }
}

TEST(Haar, FirstColumnIsNormalizedGaussianColumn)
{
    // consequence of diag(R) >= 0
    const Matrix g = urv::gaussian_matrix(6, 6, {77, 0});
    const Matrix q = urv::haar_orthogonal(6, {77, 0});
    const double ng = urv::kernels::nrm2(g.col_ptr(0), 6);
    for (Index i = 0; i < 6; ++i) {
        EXPECT_NEAR(q(i, 0), g(i, 0) / ng, 1e-14);
    }
}
