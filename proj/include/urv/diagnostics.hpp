#ifndef URV_DIAGNOSTICS_HPP
#define URV_DIAGNOSTICS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factorizations.hpp"
#include "svd.hpp"

namespace urv {

inline constexpr double not_applicable = std::numeric_limits<double>::quiet_NaN();

//
// Rank-k approximation errors for k = 0..n. sigma_ref[k] is sigma_{k+1}(A)
// (zero past the last singular value).
//
struct ErrorProfile
{
    std::vector<Index> k;
    std::vector<double> abs_spectral;
    std::vector<double> abs_frobenius;
    std::vector<double> rel_spectral;
    std::vector<double> rel_frobenius;
    std::vector<double> sigma_ref;
    std::string algorithm;
};

// Block singular values of R for every split point k = 0..n; entries for an
// empty block are NaN (R11 at k = 0) or 0 (R22 at k = n).
struct RevealProfile
{
    std::vector<Index> k;
    std::vector<double> smin_r11;
    std::vector<double> smax_r22;
    std::vector<double> sigma_ref;
};

inline std::vector<double> reference_sigma(std::span<const double> sigma, Index n)
{
    std::vector<double> ref(static_cast<std::size_t>(n + 1), 0.0);
    for (Index k = 0; k < n && k < static_cast<Index>(sigma.size()); ++k) {
        ref[static_cast<std::size_t>(k)] = sigma[static_cast<std::size_t>(k)];
    }
    return ref;
}

//
// Errors of A - U(:, 0:k') * M(0:k', :) with k' = min(k, U.cols), for
// k = 0..A.cols. Residual spectral norms are exact (Gram eigenvalue, no
// estimator). `sigma` holds the singular values of A.
//
inline ErrorProfile low_rank_error_profile(ConstMatrixView a, ConstMatrixView u, ConstMatrixView rows,
                                           std::span<const double> sigma, std::string algorithm = {})
{
    const Index m = a.rows();
    const Index n = a.cols();
    detail::require(u.rows() == m && rows.cols() == n && rows.rows() >= u.cols(),
                    "error_profile: factor dimensions inconsistent with A");

    ErrorProfile p;
    p.algorithm = std::move(algorithm);
    p.sigma_ref = reference_sigma(sigma, n);
    const double norm_sp = spectral_norm(a);
    const double norm_fro = frobenius_norm(a);

    Matrix resid(a);
    for (Index k = 0; k <= n; ++k) {
        if (k > 0 && k <= u.cols()) {
            // resid -= u_k * rows_k
            for (Index j = 0; j < n; ++j) {
                const double rkj = rows(k - 1, j);
                if (rkj != 0.0) {
                    kernels::axpy(-rkj, u.col_ptr(k - 1), resid.col_ptr(j), m);
                }
            }
        }
        const double sp = spectral_norm(resid);
        const double fro = frobenius_norm(resid);
        p.k.push_back(k);
        p.abs_spectral.push_back(sp);
        p.abs_frobenius.push_back(fro);
        p.rel_spectral.push_back(norm_sp > 0.0 ? sp / norm_sp : 0.0);
        p.rel_frobenius.push_back(norm_fro > 0.0 ? fro / norm_fro : 0.0);
    }
    return p;
}

inline ErrorProfile error_profile(ConstMatrixView a, const UrvFactorization& f, std::span<const double> sigma)
{
    const Matrix rows = multiply(f.r, f.v, Op::none, Op::trans);
    return low_rank_error_profile(a, f.u, rows, sigma, f.provenance.algorithm);
}

inline ErrorProfile error_profile(ConstMatrixView a, const UrvFactorization& f)
{
    return error_profile(a, f, singular_values(a));
}

inline ErrorProfile error_profile(ConstMatrixView a, const RsvdFactorization& f, std::span<const double> sigma)
{
    Matrix rows = f.v.transposed();
    for (Index i = 0; i < rows.rows(); ++i) {
        for (Index j = 0; j < rows.cols(); ++j) {
            rows(i, j) *= f.sigma[static_cast<std::size_t>(i)];
        }
    }
    return low_rank_error_profile(a, f.u, rows, sigma, f.provenance.algorithm);
}

namespace detail {

// Inverse of an upper-triangular matrix by column back substitution.
inline Matrix upper_triangular_inverse(ConstMatrixView r)
{
    const Index n = r.rows();
    Matrix x(n, n);
    for (Index j = 0; j < n; ++j) {
        x(j, j) = 1.0 / r(j, j);
        for (Index i = j - 1; i >= 0; --i) {
            double s = 0.0;
            for (Index l = i + 1; l <= j; ++l) {
                s += r(i, l) * x(l, j);
            }
            x(i, j) = -s / r(i, i);
        }
    }
    return x;
}

// sigma_min of a square upper-triangular matrix as 1 / ||R^-1||_2.
inline double triangular_min_singular_value(ConstMatrixView r)
{
    for (Index i = 0; i < r.rows(); ++i) {
        if (r(i, i) == 0.0) {
            return 0.0;
        }
    }
    const Matrix inv = upper_triangular_inverse(r);
    if (!inv.all_finite()) {
        return 0.0;
    }
    const double ninv = spectral_norm(inv);
    return ninv > 0.0 ? 1.0 / ninv : std::numeric_limits<double>::infinity();
}

} // namespace detail

inline RevealProfile reveal_profile(const UrvFactorization& f, std::span<const double> sigma)
{
    const Index n = f.r.cols();
    RevealProfile p;
    p.sigma_ref = reference_sigma(sigma, n);
    for (Index k = 0; k <= n; ++k) {
        p.k.push_back(k);
        p.smin_r11.push_back(k == 0 ? not_applicable : detail::triangular_min_singular_value(f.r.block(0, 0, k, k)));
        p.smax_r22.push_back(k == n ? 0.0 : spectral_norm(f.r.block(k, k, n - k, n - k)));
    }
    return p;
}

inline RevealProfile reveal_profile(const UrvFactorization& f, ConstMatrixView a)
{
    return reveal_profile(f, singular_values(a));
}

// ||A - U(:, 0:k) U(:, 0:k)^T A||_2
inline double projection_error(ConstMatrixView a, ConstMatrixView u, Index k)
{
    detail::require(k >= 0 && k <= u.cols() && u.rows() == a.rows(), "projection_error: k out of range");
    if (k == 0) {
        return spectral_norm(a);
    }
    const ConstMatrixView uk = u.block(0, 0, u.rows(), k);
    Matrix resid(a);
    const Matrix coef = multiply(uk, a, Op::trans, Op::none);
    gemm(Op::none, Op::none, -1.0, uk, coef, 1.0, resid.view());
    return spectral_norm(resid);
}

// projection_error for k = 0..kmax.
inline std::vector<double> projection_error_curve(ConstMatrixView a, ConstMatrixView u, Index kmax)
{
    detail::require(kmax >= 0 && kmax <= u.cols(), "projection_error_curve: kmax out of range");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(kmax + 1));
    const Matrix coef = multiply(u.block(0, 0, u.rows(), kmax), a, Op::trans, Op::none);
    Matrix resid(a);
    out.push_back(spectral_norm(resid));
    for (Index k = 1; k <= kmax; ++k) {
        for (Index j = 0; j < a.cols(); ++j) {
            kernels::axpy(-coef(k - 1, j), u.col_ptr(k - 1), resid.col_ptr(j), a.rows());
        }
        out.push_back(spectral_norm(resid));
    }
    return out;
}

struct LemmaResult
{
    double discrepancy = 0.0; // ||P_urv A - P_rsvd A||_F / ||A||_F
    Index sample_rank = 0;    // numerical rank of A (A^T A)^q G(:, 0:ell)
    bool rank_deficient = false;
};

//
// Runs PowerURV and the RSVD from the same Gaussian draw and compares the
// projections of A onto U(:, 0:ell) and onto U_rsvd. The two ranges agree in
// exact arithmetic whenever the sample has full rank ell.
//
inline LemmaResult lemma_check(ConstMatrixView a, Index ell, int q, RngSeed seed, bool reorth = true)
{
    detail::require(ell >= 1 && ell < std::min(a.rows(), a.cols()), "lemma_check: ell must satisfy 1 <= ell < min(m, n)");
    const UrvFactorization purv = power_urv(a, q, reorth, seed);
    const RsvdFactorization rs = rsvd(a, ell, q, seed, reorth);

    const ConstMatrixView ul = purv.u.block(0, 0, purv.u.rows(), ell);
    Matrix diff = multiply(ul, multiply(ul, a, Op::trans, Op::none));
    const Matrix proj_rsvd = multiply(rs.u, multiply(rs.u, a, Op::trans, Op::none));
    for (Index j = 0; j < diff.cols(); ++j) {
        kernels::axpy(-1.0, proj_rsvd.col_ptr(j), diff.col_ptr(j), diff.rows());
    }

    LemmaResult out;
    const double na = frobenius_norm(a);
    out.discrepancy = na > 0.0 ? frobenius_norm(diff) / na : 0.0;

    // rank of the sample A (A^T A)^q G_ell, read from its singular values
    Provenance scratch{"lemma_check", q, reorth, seed, ell, {}};
    Matrix y = detail::power_sample(a, gaussian_matrix(a.cols(), ell, seed), q, reorth, scratch);
    const auto sv = singular_values(multiply(a, y));
    const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * eps * sv.front();
    for (double s : sv) {
        out.sample_rank += s > tol ? 1 : 0;
    }
    out.rank_deficient = out.sample_rank < ell;
    return out;
}

//
// Leading-order flop counts, split by kernel class as (matrix multiply or
// unpivoted QR, column-pivoted QR, other level-2 BLAS).
//
enum class FlopAlgorithm { golub_reinsch, qlp, rand_utv, power_urv };

struct FlopModel
{
    FlopAlgorithm algorithm;
    double gemm_qr = 0.0;
    double cpqr = 0.0;
    double other = 0.0;

    double total() const { return gemm_qr + cpqr + other; }
};

inline std::string_view to_string(FlopAlgorithm a)
{
    switch (a) {
    case FlopAlgorithm::golub_reinsch: return "golub-reinsch";
    case FlopAlgorithm::qlp: return "qlp";
    case FlopAlgorithm::rand_utv: return "randutv";
    case FlopAlgorithm::power_urv: return "powerurv";
    }
    return "?";
}

inline FlopAlgorithm parse_flop_algorithm(std::string_view s)
{
    for (auto a : {FlopAlgorithm::golub_reinsch, FlopAlgorithm::qlp, FlopAlgorithm::rand_utv, FlopAlgorithm::power_urv}) {
        if (s == to_string(a)) {
            return a;
        }
    }
    throw invalid_input("unknown flop-model algorithm '" + std::string(s) + "'");
}

inline FlopModel flop_estimate(FlopAlgorithm alg, double m, double n, double q = 0)
{
    detail::require(m >= n && n >= 1 && q >= 0, "flop_estimate: requires m >= n >= 1, q >= 0");
    FlopModel f{alg};
    switch (alg) {
    case FlopAlgorithm::golub_reinsch:
        f.other = 4 * m * m * n + 8 * m * n * n + 9 * n * n * n;
        break;
    case FlopAlgorithm::qlp:
        f.cpqr = 2 * m * n * n + 2.0 / 3.0 * n * n * n;
        break;
    case FlopAlgorithm::rand_utv:
        f.gemm_qr = (5 + 2 * q) * m * n * n - 1.0 / 3.0 * (3 + 2 * q) * n * n * n;
        break;
    case FlopAlgorithm::power_urv:
        f.gemm_qr = 2 * (2 * q + 1) * m * m * n + (4 * q + 2) * m * n * n - 2.0 / 3.0 * (2 * q + 1) * n * n * n;
        break;
    }
    return f;
}

} // namespace urv

#endif // URV_DIAGNOSTICS_HPP
