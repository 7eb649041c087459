#ifndef URV_MATRIX_HPP
#define URV_MATRIX_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "error.hpp"

namespace urv {

using Index = std::ptrdiff_t;

inline constexpr double eps = std::numeric_limits<double>::epsilon();

//
// Non-owning column-major views. `ld` is the distance between the starts of
// consecutive columns, so a view can address any rectangular block of a
// larger matrix.
//
template <typename T>
class BasicMatrixView
{
public:
    BasicMatrixView() = default;
    BasicMatrixView(T* data, Index rows, Index cols, Index ld)
        : data_(data), rows_(rows), cols_(cols), ld_(ld)
    {
    }

    // mutable view -> const view
    template <typename U>
        requires std::is_same_v<T, const U>
    BasicMatrixView(const BasicMatrixView<U>& other)
        : data_(other.data()), rows_(other.rows()), cols_(other.cols()), ld_(other.ld())
    {
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index ld() const { return ld_; }
    T* data() const { return data_; }

    T& operator()(Index i, Index j) const
    {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return data_[i + j * ld_];
    }

    T* col_ptr(Index j) const { return data_ + j * ld_; }
    std::span<T> col(Index j) const { return {col_ptr(j), static_cast<std::size_t>(rows_)}; }

    BasicMatrixView block(Index i, Index j, Index r, Index c) const
    {
        assert(i >= 0 && j >= 0 && i + r <= rows_ && j + c <= cols_);
        return {data_ + i + j * ld_, r, c, ld_};
    }

    BasicMatrixView cols_range(Index j, Index c) const { return block(0, j, rows_, c); }

private:
    T* data_ = nullptr;
    Index rows_ = 0;
    Index cols_ = 0;
    Index ld_ = 0;
};

using MatrixView = BasicMatrixView<double>;
using ConstMatrixView = BasicMatrixView<const double>;

//
// Dense real matrix, column-major, owning its storage.
//
class Matrix
{
public:
    Matrix() = default;
    Matrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(checked_size(rows, cols), 0.0) {}
    Matrix(Index rows, Index cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data))
    {
        detail::require(data_.size() == checked_size(rows, cols), "matrix data length must equal rows*cols");
    }

    // Row-wise nested initializer, for small literals in tests.
    Matrix(std::initializer_list<std::initializer_list<double>> rows)
    {
        rows_ = static_cast<Index>(rows.size());
        cols_ = rows_ ? static_cast<Index>(rows.begin()->size()) : 0;
        data_.assign(checked_size(rows_, cols_), 0.0);
        Index i = 0;
        for (const auto& r : rows) {
            detail::require(static_cast<Index>(r.size()) == cols_, "ragged matrix literal");
            Index j = 0;
            for (double v : r) {
                (*this)(i, j++) = v;
            }
            ++i;
        }
    }

    explicit Matrix(ConstMatrixView v) : Matrix(v.rows(), v.cols())
    {
        for (Index j = 0; j < cols_; ++j) {
            std::copy_n(v.col_ptr(j), rows_, col_ptr(j));
        }
    }

    static Matrix identity(Index n) { return identity(n, n); }
    static Matrix identity(Index rows, Index cols)
    {
        Matrix m(rows, cols);
        for (Index i = 0; i < std::min(rows, cols); ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static Matrix diagonal(std::span<const double> d, Index rows, Index cols)
    {
        Matrix m(rows, cols);
        for (Index i = 0; i < std::min({rows, cols, static_cast<Index>(d.size())}); ++i) {
            m(i, i) = d[static_cast<std::size_t>(i)];
        }
        return m;
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return rows_ * cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(Index i, Index j)
    {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return data_[static_cast<std::size_t>(i + j * rows_)];
    }
    double operator()(Index i, Index j) const
    {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return data_[static_cast<std::size_t>(i + j * rows_)];
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }

    double* col_ptr(Index j) { return data_.data() + j * rows_; }
    const double* col_ptr(Index j) const { return data_.data() + j * rows_; }
    std::span<double> col(Index j) { return {col_ptr(j), static_cast<std::size_t>(rows_)}; }
    std::span<const double> col(Index j) const { return {col_ptr(j), static_cast<std::size_t>(rows_)}; }

    MatrixView view() { return {data(), rows_, cols_, rows_}; }
    ConstMatrixView view() const { return {data(), rows_, cols_, rows_}; }
    operator ConstMatrixView() const { return view(); }

    MatrixView block(Index i, Index j, Index r, Index c) { return view().block(i, j, r, c); }
    ConstMatrixView block(Index i, Index j, Index r, Index c) const { return view().block(i, j, r, c); }

    Matrix transposed() const
    {
        Matrix t(cols_, rows_);
        for (Index j = 0; j < cols_; ++j) {
            for (Index i = 0; i < rows_; ++i) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    bool all_finite() const
    {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    static std::size_t checked_size(Index rows, Index cols)
    {
        detail::require(rows >= 0 && cols >= 0, "matrix dimensions must be nonnegative");
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }

    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<double> data_;
};

inline Matrix copy(ConstMatrixView v) { return Matrix(v); }

inline void copy_into(ConstMatrixView src, MatrixView dst)
{
    assert(src.rows() == dst.rows() && src.cols() == dst.cols());
    for (Index j = 0; j < src.cols(); ++j) {
        std::copy_n(src.col_ptr(j), src.rows(), dst.col_ptr(j));
    }
}

namespace kernels {

inline double dot(const double* x, const double* y, Index n)
{
    // four partial sums so the loop vectorizes without -ffast-math
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    Index i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += x[i] * y[i];
        s1 += x[i + 1] * y[i + 1];
        s2 += x[i + 2] * y[i + 2];
        s3 += x[i + 3] * y[i + 3];
    }
    for (; i < n; ++i) {
        s0 += x[i] * y[i];
    }
    return (s0 + s1) + (s2 + s3);
}

inline void axpy(double alpha, const double* x, double* y, Index n)
{
    for (Index i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

inline void scal(double alpha, double* x, Index n)
{
    for (Index i = 0; i < n; ++i) {
        x[i] *= alpha;
    }
}

// Euclidean norm; falls back to a scaled sum when squares would under/overflow.
inline double nrm2(const double* x, Index n)
{
    const double ss = dot(x, x, n);
    if (ss > 1e-280 && ss < 1e280) {
        return std::sqrt(ss);
    }
    double scale = 0.0;
    for (Index i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(x[i]));
    }
    if (scale == 0.0 || !std::isfinite(scale)) {
        return scale;
    }
    double s = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double t = x[i] / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

} // namespace kernels

enum class Op { none, trans };

//
// C <- alpha * op(A) * op(B) + beta * C
//
inline void gemm(Op opa, Op opb, double alpha, ConstMatrixView a, ConstMatrixView b, double beta,
                 MatrixView c)
{
    const Index m = c.rows();
    const Index n = c.cols();
    const Index k = opa == Op::none ? a.cols() : a.rows();
    assert((opa == Op::none ? a.rows() : a.cols()) == m);
    assert((opb == Op::none ? b.rows() : b.cols()) == k);
    assert((opb == Op::none ? b.cols() : b.rows()) == n);

    for (Index j = 0; j < n; ++j) {
        double* cj = c.col_ptr(j);
        if (beta == 0.0) {
            std::fill_n(cj, m, 0.0);
        } else if (beta != 1.0) {
            kernels::scal(beta, cj, m);
        }
    }
    if (alpha == 0.0 || k == 0) {
        return;
    }

    if (opa == Op::none) {
        // column sweeps: C(:,j) += A(:,p) * op(B)(p,j)
        for (Index j = 0; j < n; ++j) {
            double* cj = c.col_ptr(j);
            for (Index p = 0; p < k; ++p) {
                const double bpj = opb == Op::none ? b(p, j) : b(j, p);
                if (bpj != 0.0) {
                    kernels::axpy(alpha * bpj, a.col_ptr(p), cj, m);
                }
            }
        }
        return;
    }

    if (opb == Op::none) {
        // C(i,j) += dot(A(:,i), B(:,j))
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < m; ++i) {
                c(i, j) += alpha * kernels::dot(a.col_ptr(i), b.col_ptr(j), k);
            }
        }
        return;
    }

    const Matrix bt = Matrix(b).transposed();
    gemm(Op::trans, Op::none, alpha, a, bt, 1.0, c);
}

inline Matrix multiply(ConstMatrixView a, ConstMatrixView b, Op opa = Op::none, Op opb = Op::none)
{
    const Index m = opa == Op::none ? a.rows() : a.cols();
    const Index ka = opa == Op::none ? a.cols() : a.rows();
    const Index kb = opb == Op::none ? b.rows() : b.cols();
    const Index n = opb == Op::none ? b.cols() : b.rows();
    detail::require(ka == kb, "multiply: inner dimensions differ");
    Matrix c(m, n);
    gemm(opa, opb, 1.0, a, b, 0.0, c.view());
    return c;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }

inline Matrix operator-(const Matrix& a, const Matrix& b)
{
    detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "subtract: shape mismatch");
    Matrix c = a;
    for (Index j = 0; j < a.cols(); ++j) {
        kernels::axpy(-1.0, b.col_ptr(j), c.col_ptr(j), a.rows());
    }
    return c;
}

inline double frobenius_norm(ConstMatrixView a)
{
    // column norms combined with scaling, safe for tiny and huge entries
    double scale = 0.0;
    double ssq = 1.0;
    for (Index j = 0; j < a.cols(); ++j) {
        const double cn = kernels::nrm2(a.col_ptr(j), a.rows());
        if (cn == 0.0) {
            continue;
        }
        if (scale < cn) {
            ssq = 1.0 + ssq * (scale / cn) * (scale / cn);
            scale = cn;
        } else {
            ssq += (cn / scale) * (cn / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

// ||Q^T Q - I||_F
inline double orthogonality_error(ConstMatrixView q)
{
    Matrix g = multiply(q, q, Op::trans, Op::none);
    for (Index i = 0; i < g.rows(); ++i) {
        g(i, i) -= 1.0;
    }
    return frobenius_norm(g);
}

inline void require_finite(ConstMatrixView a, const char* who)
{
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j))) {
                throw invalid_input(std::string(who) + ": non-finite input entry");
            }
        }
    }
}

} // namespace urv

#endif // URV_MATRIX_HPP
