#ifndef URV_CPQR_HPP
#define URV_CPQR_HPP

#include <numeric>
#include <utility>
#include <vector>

#include "qr.hpp"

namespace urv {

struct CpqrResult
{
    Matrix q;                // m x min(m,n), orthonormal columns
    Matrix r;                // min(m,n) x n, upper trapezoidal, diag(r) >= 0
    std::vector<Index> perm; // A(:, perm[j]) = (Q R)(:, j)
};

// Downdated squared norms below this fraction of their reference are recomputed.
inline constexpr double cpqr_recompute_fraction = 1e-2;

// Squared norms within this relative distance of the maximum count as tied,
// so roundoff in the downdated norms cannot break an exact tie.
inline constexpr double cpqr_tie_tolerance = 1e-13;

//
// Householder QR with column pivoting. At step j the column with the largest
// trailing norm is moved to position j; ties (up to cpqr_tie_tolerance) go
// to the lowest index.
// Works for any shape.
//
inline CpqrResult cpqr(ConstMatrixView a)
{
    require_finite(a, "cpqr");
    const Index m = a.rows();
    const Index n = a.cols();
    const Index kmax = std::min(m, n);

    Matrix w(a);
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::vector<double> tau(static_cast<std::size_t>(kmax));

    // squared trailing norms and the value they were last computed from scratch
    std::vector<double> norm2(static_cast<std::size_t>(n));
    std::vector<double> ref2(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        const double c = kernels::nrm2(w.col_ptr(j), m);
        norm2[static_cast<std::size_t>(j)] = ref2[static_cast<std::size_t>(j)] = c * c;
    }

    for (Index k = 0; k < kmax; ++k) {
        Index piv = k;
        for (Index j = k + 1; j < n; ++j) {
            if (norm2[static_cast<std::size_t>(j)] > norm2[static_cast<std::size_t>(piv)]) {
                piv = j;
            }
        }
        // lowest index among the columns tied with the maximum
        const double floor2 = norm2[static_cast<std::size_t>(piv)] * (1.0 - cpqr_tie_tolerance);
        for (Index j = k; j < piv; ++j) {
            if (norm2[static_cast<std::size_t>(j)] >= floor2) {
                piv = j;
                break;
            }
        }
        if (piv != k) {
            std::swap_ranges(w.col_ptr(k), w.col_ptr(k) + m, w.col_ptr(piv));
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(piv)]);
            std::swap(norm2[static_cast<std::size_t>(k)], norm2[static_cast<std::size_t>(piv)]);
            std::swap(ref2[static_cast<std::size_t>(k)], ref2[static_cast<std::size_t>(piv)]);
        }

        double* col = w.col_ptr(k);
        double& tk = tau[static_cast<std::size_t>(k)];
        if (k + 1 < m) {
            detail::make_reflector(col[k], col + k + 1, m - k - 1, tk);
        } else {
            tk = 0.0;
        }
        if (k + 1 < n) {
            detail::apply_reflector_left(col + k + 1, tk, w.block(k, k + 1, m - k, n - k - 1));
        }

        // level-2 norm downdate
        for (Index j = k + 1; j < n; ++j) {
            auto& nj = norm2[static_cast<std::size_t>(j)];
            auto& rj = ref2[static_cast<std::size_t>(j)];
            if (nj == 0.0) {
                continue;
            }
            const double rkj = w(k, j);
            nj -= rkj * rkj;
            if (nj <= cpqr_recompute_fraction * rj) {
                const double c = k + 1 < m ? kernels::nrm2(w.col_ptr(j) + k + 1, m - k - 1) : 0.0;
                nj = rj = c * c;
            }
        }
    }

    CpqrResult out{Matrix::identity(m, kmax), Matrix(kmax, n), std::move(perm)};
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i <= std::min(j, kmax - 1); ++i) {
            out.r(i, j) = w(i, j);
        }
    }
    for (Index k = kmax - 1; k >= 0; --k) {
        if (k + 1 < m) {
            detail::apply_reflector_left(w.col_ptr(k) + k + 1, tau[static_cast<std::size_t>(k)],
                                         out.q.block(k, k, m - k, kmax - k));
        }
    }
    for (Index i = 0; i < kmax; ++i) {
        if (out.r(i, i) < 0.0) {
            for (Index j = i; j < n; ++j) {
                out.r(i, j) = -out.r(i, j);
            }
            kernels::scal(-1.0, out.q.col_ptr(i), m);
        }
    }
    return out;
}

// Columns of `a` reordered as a(:, perm[j]).
inline Matrix permute_columns(ConstMatrixView a, const std::vector<Index>& perm)
{
    Matrix out(a.rows(), static_cast<Index>(perm.size()));
    for (Index j = 0; j < out.cols(); ++j) {
        std::copy_n(a.col_ptr(perm[static_cast<std::size_t>(j)]), a.rows(), out.col_ptr(j));
    }
    return out;
}

} // namespace urv

#endif // URV_CPQR_HPP
