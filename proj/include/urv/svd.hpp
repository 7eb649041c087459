#ifndef URV_SVD_HPP
#define URV_SVD_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "cpqr.hpp"
#include "qr.hpp"

namespace urv {

struct SvdResult
{
    Matrix u;                  // m x p, orthonormal columns, p = min(m, n)
    std::vector<double> sigma; // p values, nonincreasing, >= 0
    Matrix v;                  // n x p, orthonormal columns
    int sweeps = 0;
};

inline constexpr int jacobi_sweep_limit = 30;

namespace detail {

// Fill the zero columns of `u` so all columns are orthonormal (u has
// orthonormal or zero columns on entry).
inline void complete_orthonormal(Matrix& u, const std::vector<bool>& zero)
{
    const Index m = u.rows();
    Index probe = 0;
    for (Index j = 0; j < u.cols(); ++j) {
        if (!zero[static_cast<std::size_t>(j)]) {
            continue;
        }
        for (; probe < m; ++probe) {
            std::vector<double> x(static_cast<std::size_t>(m), 0.0);
            x[static_cast<std::size_t>(probe)] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (Index l = 0; l < u.cols(); ++l) {
                    if (l == j || (zero[static_cast<std::size_t>(l)] && l > j)) {
                        continue;
                    }
                    const double c = kernels::dot(u.col_ptr(l), x.data(), m);
                    kernels::axpy(-c, u.col_ptr(l), x.data(), m);
                }
            }
            const double nx = kernels::nrm2(x.data(), m);
            if (nx > 0.5) {
                kernels::scal(1.0 / nx, x.data(), m);
                std::copy(x.begin(), x.end(), u.col_ptr(j));
                ++probe;
                break;
            }
        }
    }
}

} // namespace detail

//
// Singular value decomposition by the one-sided (Hestenes) Jacobi method.
// The input is first reduced by column-pivoted QR, A P = Q R, and the Jacobi
// sweeps run on R^T; on strongly graded matrices this cuts the sweep count
// from dozens to about ten. A pair of columns (i, j) is rotated while
// |x_i^T x_j| > sqrt(n) * eps * |x_i| |x_j|; the sweep limit is a hard error.
// Wide input is handled through the transpose.
//
inline SvdResult svd(ConstMatrixView a)
{
    require_finite(a, "svd");
    if (a.rows() < a.cols()) {
        SvdResult t = svd(Matrix(a).transposed());
        std::swap(t.u, t.v);
        return t;
    }

    const Index m = a.rows();
    const Index n = a.cols();
    CpqrResult pre = cpqr(a);
    Matrix x = pre.r.transposed(); // n x n
    Matrix j_acc = Matrix::identity(n);
    const double tol = std::sqrt(static_cast<double>(n)) * eps;

    double cs = 1.0;
    double sn = 0.0;
    auto rotate = [&](double* p, double* q) {
        for (Index r = 0; r < n; ++r) {
            const double pr = p[r];
            const double qr = q[r];
            p[r] = cs * pr - sn * qr;
            q[r] = sn * pr + cs * qr;
        }
    };

    int sweep = 0;
    bool rotated = true;
    while (rotated) {
        if (sweep == jacobi_sweep_limit) {
            throw numerical_failure("svd: one-sided Jacobi did not converge in " +
                                    std::to_string(jacobi_sweep_limit) + " sweeps");
        }
        ++sweep;
        rotated = false;
        for (Index i = 0; i + 1 < n; ++i) {
            for (Index j = i + 1; j < n; ++j) {
                double* xi = x.col_ptr(i);
                double* xj = x.col_ptr(j);
                const double alpha = kernels::dot(xi, xi, n);
                const double beta = kernels::dot(xj, xj, n);
                const double gamma = kernels::dot(xi, xj, n);
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                cs = 1.0 / std::hypot(1.0, t);
                sn = cs * t;
                rotate(xi, xj);
                rotate(j_acc.col_ptr(i), j_acc.col_ptr(j));
            }
        }
    }

    // R^T = X_u S J^T, so A = (Q J) S (P X_u)^T
    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        sigma[static_cast<std::size_t>(j)] = kernels::nrm2(x.col_ptr(j), n);
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index p, Index q) {
        return sigma[static_cast<std::size_t>(p)] > sigma[static_cast<std::size_t>(q)];
    });

    SvdResult out{Matrix(m, n), std::vector<double>(static_cast<std::size_t>(n)), Matrix(n, n), sweep};
    Matrix xu(n, n);
    Matrix js(n, n);
    std::vector<bool> zero(static_cast<std::size_t>(n), false);
    for (Index j = 0; j < n; ++j) {
        const Index src = order[static_cast<std::size_t>(j)];
        const double s = sigma[static_cast<std::size_t>(src)];
        out.sigma[static_cast<std::size_t>(j)] = s;
        std::copy_n(j_acc.col_ptr(src), n, js.col_ptr(j));
        if (s > 0.0) {
            for (Index r = 0; r < n; ++r) {
                xu(r, j) = x(r, src) / s;
            }
        } else {
            zero[static_cast<std::size_t>(j)] = true;
        }
    }
    detail::complete_orthonormal(xu, zero);
    gemm(Op::none, Op::none, 1.0, pre.q, js, 0.0, out.u.view());
    for (Index j = 0; j < n; ++j) {
        for (Index r = 0; r < n; ++r) {
            out.v(pre.perm[static_cast<std::size_t>(r)], j) = xu(r, j);
        }
    }
    return out;
}

inline std::vector<double> singular_values(ConstMatrixView a) { return svd(a).sigma; }

//
// Largest eigenvalue of a symmetric matrix (full storage): Householder
// tridiagonalization followed by Sturm-sequence bisection.
//
inline double symmetric_max_eigenvalue(Matrix g)
{
    const Index n = g.rows();
    detail::require(n == g.cols(), "symmetric_max_eigenvalue: matrix must be square");
    if (n == 0) {
        return 0.0;
    }
    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<double> e(static_cast<std::size_t>(std::max<Index>(n - 1, 0)));
    std::vector<double> v(static_cast<std::size_t>(n));
    std::vector<double> p(static_cast<std::size_t>(n));

    for (Index k = 0; k + 2 < n; ++k) {
        const Index len = n - k - 1;
        double* x = g.col_ptr(k) + k + 1;
        double alpha = x[0];
        double tau = 0.0;
        std::copy_n(x + 1, len - 1, v.begin() + 1);
        const double beta = detail::make_reflector(alpha, v.data() + 1, len - 1, tau);
        d[static_cast<std::size_t>(k)] = g(k, k);
        e[static_cast<std::size_t>(k)] = beta;
        if (tau == 0.0) {
            continue;
        }
        v[0] = 1.0;
        MatrixView sub = g.block(k + 1, k + 1, len, len);
        // p = tau * S v
        std::fill_n(p.begin(), len, 0.0);
        for (Index j = 0; j < len; ++j) {
            kernels::axpy(tau * v[static_cast<std::size_t>(j)], sub.col_ptr(j), p.data(), len);
        }
        const double coef = 0.5 * tau * kernels::dot(p.data(), v.data(), len);
        kernels::axpy(-coef, v.data(), p.data(), len); // p is now w
        for (Index j = 0; j < len; ++j) {
            double* sj = sub.col_ptr(j);
            kernels::axpy(-p[static_cast<std::size_t>(j)], v.data(), sj, len);
            kernels::axpy(-v[static_cast<std::size_t>(j)], p.data(), sj, len);
        }
    }
    if (n >= 2) {
        d[static_cast<std::size_t>(n - 2)] = g(n - 2, n - 2);
        e[static_cast<std::size_t>(n - 2)] = g(n - 1, n - 2);
    }
    d[static_cast<std::size_t>(n - 1)] = g(n - 1, n - 1);

    double lo = d[0];
    double hi = d[0];
    double emax = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(e[static_cast<std::size_t>(i - 1)]) : 0.0) +
                         (i + 1 < n ? std::abs(e[static_cast<std::size_t>(i)]) : 0.0);
        lo = std::min(lo, d[static_cast<std::size_t>(i)] - r);
        hi = std::max(hi, d[static_cast<std::size_t>(i)] + r);
        if (i + 1 < n) {
            emax = std::max(emax, std::abs(e[static_cast<std::size_t>(i)]));
        }
    }
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax * emax);

    // number of eigenvalues strictly below x
    auto count_below = [&](double x) {
        Index count = 0;
        double q = d[0] - x;
        if (std::abs(q) < pivmin) {
            q = -pivmin;
        }
        if (q < 0.0) {
            ++count;
        }
        for (Index i = 1; i < n; ++i) {
            const double ei = e[static_cast<std::size_t>(i - 1)];
            q = d[static_cast<std::size_t>(i)] - x - ei * ei / q;
            if (std::abs(q) < pivmin) {
                q = -pivmin;
            }
            if (q < 0.0) {
                ++count;
            }
        }
        return count;
    };

    // invariant: count_below(lo) <= n - 1, count_below(hi) == n
    const double span = std::max(std::abs(lo), std::abs(hi));
    hi += 2.0 * eps * span + pivmin;
    lo -= 2.0 * eps * span + pivmin;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi))) {
            break;
        }
        if (count_below(mid) == n) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

//
// Largest singular value: sqrt of the top eigenvalue of the smaller Gram
// matrix. The top eigenvalue of a Gram matrix is computed to relative
// accuracy O(n eps), hence so is sigma_1.
//
inline double spectral_norm(ConstMatrixView a)
{
    require_finite(a, "spectral_norm");
    if (a.rows() == 0 || a.cols() == 0) {
        return 0.0;
    }
    const double scale = frobenius_norm(a);
    if (scale == 0.0) {
        return 0.0;
    }
    // scale first so the Gram matrix neither underflows nor overflows
    Matrix s(a);
    for (Index j = 0; j < s.cols(); ++j) {
        kernels::scal(1.0 / scale, s.col_ptr(j), s.rows());
    }
    const bool tall = s.rows() >= s.cols();
    const Index p = tall ? s.cols() : s.rows();
    Matrix g(p, p);
    if (tall) {
        for (Index j = 0; j < p; ++j) {
            for (Index i = 0; i <= j; ++i) {
                g(i, j) = g(j, i) = kernels::dot(s.col_ptr(i), s.col_ptr(j), s.rows());
            }
        }
    } else {
        g = multiply(s, s, Op::none, Op::trans);
    }
    const double lambda = symmetric_max_eigenvalue(std::move(g));
    return scale * std::sqrt(std::max(lambda, 0.0));
}

} // namespace urv

#endif // URV_SVD_HPP
