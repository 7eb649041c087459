#ifndef URV_TEST_MATRICES_HPP
#define URV_TEST_MATRICES_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qr.hpp"
#include "random.hpp"

namespace urv {

enum class MatrixKind { fast_decay, slow_decay, s_shaped, boundary_integral, kahan };

inline constexpr double kahan_default_theta = 1.2;

//
// Recipe for one benchmark matrix. Defaults reproduce the benchmark sizes:
// 200 x 160 for the three synthetic spectra, 200 x 200 for the integral
// operator.
//
struct TestMatrixSpec
{
    MatrixKind kind = MatrixKind::slow_decay;
    Index m = 200;
    Index n = 160;
    RngSeed seed{};
    double theta = kahan_default_theta; // Kahan only
    bool literal_decay = false;         // fast_decay only

    static TestMatrixSpec defaults(MatrixKind kind, RngSeed seed = {})
    {
        TestMatrixSpec s;
        s.kind = kind;
        s.seed = seed;
        if (kind == MatrixKind::boundary_integral) {
            s.m = s.n = 200;
        } else if (kind == MatrixKind::kahan) {
            s.m = s.n = 96;
        }
        return s;
    }
};

inline std::string_view to_string(MatrixKind k)
{
    switch (k) {
    case MatrixKind::fast_decay: return "fast";
    case MatrixKind::slow_decay: return "slow";
    case MatrixKind::s_shaped: return "sshape";
    case MatrixKind::boundary_integral: return "bie";
    case MatrixKind::kahan: return "kahan";
    }
    return "?";
}

inline MatrixKind parse_matrix_kind(std::string_view s)
{
    for (auto k : {MatrixKind::fast_decay, MatrixKind::slow_decay, MatrixKind::s_shaped,
                   MatrixKind::boundary_integral, MatrixKind::kahan}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw invalid_input("unknown matrix kind '" + std::string(s) + "'");
}

// A matrix together with its exact singular values when the recipe fixes them.
struct GeneratedMatrix
{
    Matrix a;
    std::optional<std::vector<double>> true_sigma;
};

namespace detail {

// A = U diag(d) V^T, U the thin factor of a Haar m x m matrix, V Haar n x n.
inline Matrix synthesize(Index m, Index n, const std::vector<double>& d, RngSeed seed)
{
    require(m >= n && n >= 1, "test matrix: requires m >= n >= 1");
    Matrix u = householder_qr(gaussian_matrix(m, n, derive(seed, 1))).q;
    Matrix v = haar_orthogonal(n, derive(seed, 2));
    for (Index j = 0; j < n; ++j) {
        kernels::scal(d[static_cast<std::size_t>(j)], u.col_ptr(j), m);
    }
    return multiply(u, v, Op::none, Op::trans);
}

} // namespace detail

//
// D(k,k) = (1e-20)^(k-1) when literal (zero from k = 17 on in double
// precision), otherwise the geometric grading 10^(-20 (k-1)/(n-1)) that
// reaches 1e-20 at k = n.
//
inline std::vector<double> fast_decay_spectrum(Index n, bool literal)
{
    std::vector<double> d(static_cast<std::size_t>(n));
    for (Index k = 1; k <= n; ++k) {
        const double expo = literal ? -20.0 * static_cast<double>(k - 1)
                                    : (n > 1 ? -20.0 * static_cast<double>(k - 1) / static_cast<double>(n - 1) : 0.0);
        d[static_cast<std::size_t>(k - 1)] = std::pow(10.0, expo);
    }
    return d;
}

inline std::vector<double> slow_decay_spectrum(Index n)
{
    std::vector<double> d(static_cast<std::size_t>(n));
    for (Index k = 1; k <= n; ++k) {
        d[static_cast<std::size_t>(k - 1)] = 1.0 / static_cast<double>(k);
    }
    return d;
}

// 10^-(1 + tanh(5(2k/n - 1))) up to k = n/2, then the 1e-2 plateau to k = n.
inline std::vector<double> s_shaped_spectrum(Index n)
{
    std::vector<double> d(static_cast<std::size_t>(n));
    for (Index k = 1; k <= n; ++k) {
        const double x = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n);
        d[static_cast<std::size_t>(k - 1)] = 2 * k <= n ? std::pow(10.0, -(1.0 + std::tanh(5.0 * x))) : 1e-2;
    }
    return d;
}

inline GeneratedMatrix gen_fast_decay(Index m, Index n, RngSeed seed, bool literal = false)
{
    auto d = fast_decay_spectrum(n, literal);
    return {detail::synthesize(m, n, d, seed), std::move(d)};
}

inline GeneratedMatrix gen_slow_decay(Index m, Index n, RngSeed seed)
{
    auto d = slow_decay_spectrum(n);
    return {detail::synthesize(m, n, d, seed), std::move(d)};
}

inline GeneratedMatrix gen_s_shaped(Index m, Index n, RngSeed seed)
{
    auto d = s_shaped_spectrum(n);
    return {detail::synthesize(m, n, d, seed), std::move(d)};
}

//
// Nystrom discretization of the interior Dirichlet problem for the Laplace
// equation with a double-layer potential on the star r(t) = 1 + 0.3 cos(5t),
// trapezoidal rule on n equispaced nodes, h = 2 pi / n:
//
//   A = I/2 - h K,  K(t,s) = <x(t) - x(s), nu(s)> / (2 pi |x(t) - x(s)|^2) * |x'(s)|
//   K(t,t) = -kappa(t) |x'(t)| / (4 pi)
//
// with nu the outward normal and kappa the signed curvature. K maps constants
// to -1/2, so I/2 - hK is the nonsingular interior operator (up to sign).
//
inline Matrix gen_bie(Index n_points)
{
    detail::require(n_points >= 50 && n_points % 2 == 0, "gen_bie: n_points must be even and >= 50");
    const Index n = n_points;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);

    std::vector<double> x(n), y(n), dx(n), dy(n), nx(n), ny(n), speed(n), kappa(n);
    for (Index i = 0; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        const double r = 1.0 + 0.3 * std::cos(5.0 * t);
        const double dr = -1.5 * std::sin(5.0 * t);
        const double ddr = -7.5 * std::cos(5.0 * t);
        const double c = std::cos(t);
        const double s = std::sin(t);
        const auto k = static_cast<std::size_t>(i);
        x[k] = r * c;
        y[k] = r * s;
        dx[k] = dr * c - r * s;
        dy[k] = dr * s + r * c;
        const double ddx = ddr * c - 2.0 * dr * s - r * c;
        const double ddy = ddr * s + 2.0 * dr * c - r * s;
        speed[k] = std::hypot(dx[k], dy[k]);
        nx[k] = dy[k] / speed[k];
        ny[k] = -dx[k] / speed[k];
        kappa[k] = (dx[k] * ddy - dy[k] * ddx) / (speed[k] * speed[k] * speed[k]);
    }

    Matrix a(n, n);
    const double inv2pi = 0.5 / std::numbers::pi;
    for (Index j = 0; j < n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        for (Index i = 0; i < n; ++i) {
            const auto si = static_cast<std::size_t>(i);
            double kern;
            if (i == j) {
                kern = -kappa[sj] * speed[sj] * 0.5 * inv2pi;
            } else {
                const double rx = x[si] - x[sj];
                const double ry = y[si] - y[sj];
                kern = inv2pi * (rx * nx[sj] + ry * ny[sj]) / (rx * rx + ry * ry) * speed[sj];
            }
            a(i, j) = (i == j ? 0.5 : 0.0) - h * kern;
        }
    }
    return a;
}

// diag(1, s, ..., s^(n-1)) * T, T unit upper triangular with -cos(theta) above.
inline Matrix gen_kahan(Index n, double theta = kahan_default_theta)
{
    detail::require(n >= 2, "gen_kahan: n must be at least 2");
    detail::require(theta > 0.0 && theta < std::numbers::pi / 2, "gen_kahan: theta must lie in (0, pi/2)");
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    Matrix a(n, n);
    double scale = 1.0;
    for (Index i = 0; i < n; ++i) {
        a(i, i) = scale;
        for (Index j = i + 1; j < n; ++j) {
            a(i, j) = -c * scale;
        }
        scale *= s;
    }
    return a;
}

inline GeneratedMatrix generate(const TestMatrixSpec& spec)
{
    switch (spec.kind) {
    case MatrixKind::fast_decay: return gen_fast_decay(spec.m, spec.n, spec.seed, spec.literal_decay);
    case MatrixKind::slow_decay: return gen_slow_decay(spec.m, spec.n, spec.seed);
    case MatrixKind::s_shaped: return gen_s_shaped(spec.m, spec.n, spec.seed);
    case MatrixKind::boundary_integral:
        detail::require(spec.m == spec.n, "bie matrix is square");
        return {gen_bie(spec.n), std::nullopt};
    case MatrixKind::kahan:
        detail::require(spec.m == spec.n, "kahan matrix is square");
        return {gen_kahan(spec.n, spec.theta), std::nullopt};
    }
    throw invalid_input("generate: unknown kind");
}

} // namespace urv

#endif // URV_TEST_MATRICES_HPP
