#ifndef URV_QR_HPP
#define URV_QR_HPP

#include <cmath>
#include <vector>

#include "matrix.hpp"

namespace urv {

struct QrResult
{
    Matrix q; // m x n, orthonormal columns
    Matrix r; // n x n, upper triangular, diag(r) >= 0
};

inline constexpr Index default_block_size = 32;

namespace detail {

//
// Generate an elementary reflector H = I - tau * v * v^T with v(0) = 1 such
// that H * [alpha; x] = [beta; 0]. On exit x holds v(1:), the return value is
// beta. A zero tail gives tau = 0 (H = I).
//
inline double make_reflector(double& alpha, double* x, Index n, double& tau)
{
    const double xnorm = kernels::nrm2(x, n);
    if (xnorm == 0.0) {
        tau = 0.0;
        return alpha;
    }
    const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
    tau = (beta - alpha) / beta;
    kernels::scal(1.0 / (alpha - beta), x, n);
    alpha = beta;
    return beta;
}

// Apply H = I - tau v v^T from the left to C, with v stored as [1; tail].
inline void apply_reflector_left(const double* tail, double tau, MatrixView c)
{
    if (tau == 0.0) {
        return;
    }
    const Index m = c.rows();
    for (Index j = 0; j < c.cols(); ++j) {
        double* cj = c.col_ptr(j);
        const double w = cj[0] + kernels::dot(tail, cj + 1, m - 1);
        cj[0] -= tau * w;
        kernels::axpy(-tau * w, tail, cj + 1, m - 1);
    }
}

// Unit lower-trapezoidal copy of the reflectors stored below the diagonal.
inline Matrix unit_lower(ConstMatrixView packed)
{
    Matrix v(packed.rows(), packed.cols());
    for (Index j = 0; j < packed.cols(); ++j) {
        v(j, j) = 1.0;
        for (Index i = j + 1; i < packed.rows(); ++i) {
            v(i, j) = packed(i, j);
        }
    }
    return v;
}

// Upper-triangular T with H_0 H_1 ... H_{b-1} = I - V T V^T (forward, columnwise).
inline Matrix block_reflector_factor(const Matrix& v, const std::vector<double>& tau)
{
    const Index b = v.cols();
    Matrix t(b, b);
    std::vector<double> w(static_cast<std::size_t>(b));
    for (Index i = 0; i < b; ++i) {
        const double ti = tau[static_cast<std::size_t>(i)];
        t(i, i) = ti;
        if (i == 0 || ti == 0.0) {
            continue;
        }
        for (Index p = 0; p < i; ++p) {
            w[static_cast<std::size_t>(p)] = -ti * kernels::dot(v.col_ptr(p), v.col_ptr(i), v.rows());
        }
        for (Index p = 0; p < i; ++p) {
            double s = 0.0;
            for (Index l = p; l < i; ++l) {
                s += t(p, l) * w[static_cast<std::size_t>(l)];
            }
            t(p, i) = s;
        }
    }
    return t;
}

// C <- (I - V T V^T) C when `transpose_t` is false, (I - V T^T V^T) C otherwise.
inline void apply_block_reflector(const Matrix& v, const Matrix& t, bool transpose_t, MatrixView c)
{
    if (c.cols() == 0) {
        return;
    }
    Matrix w = multiply(v, c, Op::trans, Op::none);
    w = multiply(t, w, transpose_t ? Op::trans : Op::none, Op::none);
    gemm(Op::none, Op::none, -1.0, v, w, 1.0, c);
}

struct Panel
{
    Index offset;
    Matrix v;
    Matrix t;
};

} // namespace detail

//
// Unpivoted Householder QR of a tall matrix, blocked with compact-WY updates
// of the trailing matrix. Returns the thin factor Q (m x n) and R (n x n) with
// the sign convention diag(R) >= 0, so Q is unique for full-rank input.
//
inline QrResult householder_qr(ConstMatrixView a, Index block_size = default_block_size)
{
    const Index m = a.rows();
    const Index n = a.cols();
    detail::require(m >= n, "householder_qr: requires rows >= cols");
    detail::require(block_size >= 1, "householder_qr: block_size must be positive");
    require_finite(a, "householder_qr");

    Matrix w(a);
    std::vector<detail::Panel> panels;

    for (Index j0 = 0; j0 < n; j0 += block_size) {
        const Index b = std::min(block_size, n - j0);
        std::vector<double> tau(static_cast<std::size_t>(b));

        // panel: unblocked, level-2
        for (Index jj = 0; jj < b; ++jj) {
            const Index j = j0 + jj;
            double* col = w.col_ptr(j);
            detail::make_reflector(col[j], col + j + 1, m - j - 1, tau[static_cast<std::size_t>(jj)]);
            if (jj + 1 < b) {
                detail::apply_reflector_left(col + j + 1, tau[static_cast<std::size_t>(jj)],
                                             w.block(j, j + 1, m - j, b - jj - 1));
            }
        }

        Matrix v = detail::unit_lower(w.block(j0, j0, m - j0, b));
        Matrix t = detail::block_reflector_factor(v, tau);
        if (j0 + b < n) {
            detail::apply_block_reflector(v, t, true, w.block(j0, j0 + b, m - j0, n - j0 - b));
        }
        panels.push_back({j0, std::move(v), std::move(t)});
    }

    QrResult out{Matrix::identity(m, n), Matrix(n, n)};
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i <= j; ++i) {
            out.r(i, j) = w(i, j);
        }
    }
    for (auto it = panels.rbegin(); it != panels.rend(); ++it) {
        const Index j0 = it->offset;
        detail::apply_block_reflector(it->v, it->t, false, out.q.block(j0, j0, m - j0, n - j0));
    }

    for (Index j = 0; j < n; ++j) {
        if (out.r(j, j) < 0.0) {
            for (Index l = j; l < n; ++l) {
                out.r(j, l) = -out.r(j, l);
            }
            kernels::scal(-1.0, out.q.col_ptr(j), m);
        }
    }
    return out;
}

} // namespace urv

#endif // URV_QR_HPP
