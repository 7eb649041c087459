#ifndef URV_FACTORIZATIONS_HPP
#define URV_FACTORIZATIONS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpqr.hpp"
#include "qr.hpp"
#include "random.hpp"
#include "svd.hpp"

namespace urv {

// Algorithm tag and parameters a factorization was produced with.
struct Provenance
{
    std::string algorithm;
    int q = 0;
    bool reorth = true;
    std::optional<RngSeed> seed;
    std::optional<Index> ell;
    std::vector<std::string> warnings;
};

//
// A = U R V^T with U (m x n) orthonormal columns, R (n x n) upper triangular
// with exact zeros below the diagonal, V (n x n) orthogonal.
//
struct UrvFactorization
{
    Matrix u;
    Matrix r;
    Matrix v;
    Provenance provenance;
};

// A ~ U diag(sigma) V^T with U (m x l), V (n x l).
struct RsvdFactorization
{
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
    Provenance provenance;
};

namespace detail {

// Q factor of an unpivoted QR of y. Columns whose R diagonal falls below
// eps * ||y||_F are flagged in the provenance; an all-zero y is an error.
inline Matrix orthonormalize(ConstMatrixView y, Provenance& prov, const char* stage)
{
    const double ny = frobenius_norm(y);
    if (ny == 0.0 || !std::isfinite(ny)) {
        throw numerical_failure(std::string(prov.algorithm) + ": rank collapse at " + stage +
                                (ny == 0.0 ? " (sample matrix is zero)" : " (sample matrix overflowed)"));
    }
    QrResult f = householder_qr(y);
    Index deficient = 0;
    for (Index j = 0; j < f.r.rows(); ++j) {
        if (f.r(j, j) < eps * ny) {
            ++deficient;
        }
    }
    if (deficient > 0) {
        prov.warnings.push_back(std::string(stage) + ": sample matrix numerically rank deficient (" +
                                std::to_string(deficient) + " of " + std::to_string(f.r.rows()) +
                                " columns)");
    }
    return std::move(f.q);
}

inline void require_tall(ConstMatrixView a, const char* who)
{
    require(a.rows() >= a.cols(), std::string(who) + ": requires rows >= cols (transpose first)");
    require(a.cols() >= 1, std::string(who) + ": matrix must have at least one column");
    require_finite(a, who);
}

//
// Right sample for PowerURV and RSVD: (A^T A)^q G, with an unpivoted-QR
// re-orthonormalization after every application of A and of A^T when reorth
// is set. The re-orthonormalization after the final A^T is left to the caller,
// whose own QR defines the basis.
//
inline Matrix power_sample(ConstMatrixView a, Matrix g, int q, bool reorth, Provenance& prov)
{
    Matrix y = std::move(g);
    for (int it = 0; it < q; ++it) {
        Matrix z = multiply(a, y);
        if (reorth) {
            z = orthonormalize(z, prov, "power iteration (after A)");
        }
        y = multiply(a, z, Op::trans, Op::none);
        if (reorth && it + 1 < q) {
            y = orthonormalize(y, prov, "power iteration (after A^T)");
        }
    }
    if (!y.all_finite()) {
        throw numerical_failure(prov.algorithm + ": power iteration overflowed");
    }
    return y;
}

} // namespace detail

//
// PowerURV. V is the Q factor of (A^T A)^q G for an n x n Gaussian G, then
// A V = U R by unpivoted QR. q = 0 is DDH-URV.
//
inline UrvFactorization power_urv(ConstMatrixView a, int q, bool reorth, RngSeed seed)
{
    detail::require_tall(a, "power_urv");
    detail::require(q >= 0, "power_urv: q must be nonnegative");
    const Index n = a.cols();

    Provenance prov{"powerurv", q, reorth, seed, std::nullopt, {}};
    Matrix y = detail::power_sample(a, gaussian_matrix(n, n, seed), q, reorth, prov);
    Matrix v = detail::orthonormalize(y, prov, "right basis");
    QrResult f = householder_qr(multiply(a, v));
    return {std::move(f.q), std::move(f.r), std::move(v), std::move(prov)};
}

// DDH-URV: V Haar, A V = U R. Same code path as power_urv with q = 0.
inline UrvFactorization ddh_urv(ConstMatrixView a, RngSeed seed)
{
    UrvFactorization f = power_urv(a, 0, true, seed);
    f.provenance.algorithm = "ddh";
    return f;
}

//
// Stewart's QLP on the transpose: A^T = Q1 R1 P1^T, (R1 P1^T)^T = Q2 R2 P2^T,
// then U = Q2, R = R2, V = Q1 P2.
//
inline UrvFactorization qlp(ConstMatrixView a)
{
    detail::require_tall(a, "qlp");
    const Index m = a.rows();
    const Index n = a.cols();

    CpqrResult first = cpqr(Matrix(a).transposed()); // q: n x n, r: n x m
    // B = (R1 P1^T)^T, so B(perm1[j], :) = R1(:, j)^T
    Matrix b(m, n);
    for (Index j = 0; j < m; ++j) {
        const Index row = first.perm[static_cast<std::size_t>(j)];
        for (Index i = 0; i < n; ++i) {
            b(row, i) = first.r(i, j);
        }
    }
    CpqrResult second = cpqr(b);
    Matrix v = permute_columns(first.q, second.perm);
    return {std::move(second.q), std::move(second.r), std::move(v), Provenance{"qlp", 0, false, {}, {}, {}}};
}

// CPQR read as a URV factorization: U = Q, R, V = P.
inline UrvFactorization cpqr_urv(ConstMatrixView a)
{
    detail::require_tall(a, "cpqr_urv");
    CpqrResult f = cpqr(a);
    const Index n = a.cols();
    Matrix v(n, n);
    for (Index j = 0; j < n; ++j) {
        v(f.perm[static_cast<std::size_t>(j)], j) = 1.0;
    }
    return {std::move(f.q), std::move(f.r), std::move(v), Provenance{"cpqr", 0, false, {}, {}, {}}};
}

//
// Randomized SVD with q power steps. The Gaussian start is G(:, 0:ell) of the
// n x n draw PowerURV uses under the same seed.
//
inline RsvdFactorization rsvd(ConstMatrixView a, Index ell, int q, RngSeed seed, bool reorth = true)
{
    require_finite(a, "rsvd");
    detail::require(ell >= 1 && ell < std::min(a.rows(), a.cols()), "rsvd: ell must satisfy 1 <= ell < min(m, n)");
    detail::require(q >= 0, "rsvd: q must be nonnegative");
    const Index n = a.cols();

    Provenance prov{"rsvd", q, reorth, seed, ell, {}};
    Matrix y = detail::power_sample(a, gaussian_matrix(n, ell, seed), q, reorth, prov);
    if (reorth && q > 0) {
        y = detail::orthonormalize(y, prov, "power iteration (after A^T)");
    }
    Matrix basis = detail::orthonormalize(multiply(a, y), prov, "range basis");

    // (Q^T A)^T = A^T Q = X S W^T, hence Q^T A = W S X^T
    SvdResult inner = svd(multiply(a, basis, Op::trans, Op::none));
    return {multiply(basis, inner.v), std::move(inner.sigma), std::move(inner.u), std::move(prov)};
}

struct Truncation
{
    Matrix u;   // m x k
    Matrix row; // k x n, R(0:k, :) V^T
};

// Rank-k approximant U(:, 0:k) * (R(0:k, :) V^T).
inline Truncation truncate(const UrvFactorization& f, Index k)
{
    const Index n = f.r.cols();
    detail::require(k >= 0 && k <= n, "truncate: k must lie in [0, n]");
    Truncation t{copy(f.u.block(0, 0, f.u.rows(), k)), Matrix(k, f.v.rows())};
    if (k > 0) {
        gemm(Op::none, Op::trans, 1.0, f.r.block(0, 0, k, n), f.v, 0.0, t.row.view());
    }
    return t;
}

inline Matrix reconstruct(const UrvFactorization& f)
{
    return multiply(multiply(f.u, f.r), f.v, Op::none, Op::trans);
}

} // namespace urv

#endif // URV_FACTORIZATIONS_HPP
