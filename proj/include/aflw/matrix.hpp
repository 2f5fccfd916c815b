#pragma once

#include "aflw/poly.hpp"
#include "aflw/trunc.hpp"

#include <vector>

namespace aflw {

// Dense matrix over a commutative coefficient ring.
template <class R>
class Matrix {
public:
    Matrix(int rows, int cols, const R& fill)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

    static Matrix zero(int rows, int cols, const R& like) {
        return Matrix(rows, cols, ring_zero_like(like));
    }

    static Matrix identity(int n, const R& like) {
        Matrix m = zero(n, n, like);
        for (int i = 0; i < n; ++i) m.at(i, i) = ring_one_like(like);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    R& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const R& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    R like() const { return ring_zero_like(a_[0]); }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        Matrix r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] + y.a_[i];
        return r;
    }

    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        Matrix r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] - y.a_[i];
        return r;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& v : r.a_) v = ring_zero_like(v) - v;
        return r;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix r = zero(x.rows_, y.cols_, x.a_[0]);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                const R& v = x.at(i, k);
                if (ring_is_zero(v)) continue;
                for (int j = 0; j < y.cols_; ++j) r.at(i, j) = r.at(i, j) + v * y.at(k, j);
            }
        return r;
    }

    Matrix scaled(const R& s) const {
        Matrix r = *this;
        for (auto& v : r.a_) v = v * s;
        return r;
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
        for (size_t i = 0; i < x.a_.size(); ++i)
            if (!(x.a_[i] == y.a_[i])) return false;
        return true;
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!ring_is_zero(v)) return false;
        return true;
    }

    Matrix block(int i0, int j0, int h, int w) const {
        Matrix r = zero(h, w, a_[0]);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) r.at(i, j) = at(i0 + i, j0 + j);
        return r;
    }

    void set_block(int i0, int j0, const Matrix& b) {
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) at(i0 + i, j0 + j) = b.at(i, j);
    }

    Matrix transposed() const {
        Matrix r = zero(cols_, rows_, a_[0]);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

private:
    int rows_, cols_;
    std::vector<R> a_;
};

// Characteristic polynomial det(X I - A) by the Samuelson-Berkowitz scheme;
// division-free, valid over any commutative ring.
template <class R>
Poly<R> charpoly(const Matrix<R>& A) {
    if (A.rows() != A.cols()) throw domain_error("charpoly: matrix not square");
    int n = A.rows();
    R zero = A.like();
    R one = ring_one_like(zero);
    std::vector<R> coeffs{one}; // descending, for the 0x0 matrix
    for (int r = 1; r <= n; ++r) {
        // Toeplitz column: 1, -a, -(R S), -(R M S), -(R M^2 S), ...
        std::vector<R> t(static_cast<size_t>(r) + 1, zero);
        t[0] = one;
        t[1] = zero - A.at(r - 1, r - 1);
        if (r >= 2) {
            int m = r - 1;
            std::vector<R> w(static_cast<size_t>(m));
            for (int i = 0; i < m; ++i) w[static_cast<size_t>(i)] = A.at(i, r - 1);
            for (int k = 2; k <= r; ++k) {
                R dot = zero;
                for (int i = 0; i < m; ++i) dot = dot + A.at(r - 1, i) * w[static_cast<size_t>(i)];
                t[static_cast<size_t>(k)] = zero - dot;
                if (k < r) {
                    std::vector<R> w2(static_cast<size_t>(m), zero);
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < m; ++j) w2[static_cast<size_t>(i)] = w2[static_cast<size_t>(i)] + A.at(i, j) * w[static_cast<size_t>(j)];
                    w = std::move(w2);
                }
            }
        }
        std::vector<R> next(t.size() + coeffs.size() - 1, zero);
        for (size_t i = 0; i < t.size(); ++i)
            for (size_t j = 0; j < coeffs.size(); ++j) next[i + j] = next[i + j] + t[i] * coeffs[j];
        // only the leading r+1 entries are the Toeplitz product
        next.resize(static_cast<size_t>(r) + 1, zero);
        coeffs = std::move(next);
    }
    std::vector<R> ascending(coeffs.rbegin(), coeffs.rend());
    return Poly<R>(std::move(ascending));
}

template <class R>
R determinant(const Matrix<R>& A) {
    Poly<R> cp = charpoly(A);
    R c0 = cp.coeff(0);
    return A.rows() % 2 == 0 ? c0 : A.like() - c0;
}

// Resultant via the Sylvester matrix.
template <class R>
R resultant(const Poly<R>& P, const Poly<R>& Q) {
    int dp = P.deg(), dq = Q.deg();
    R zero = P.zero_like();
    if (dp < 0 || dq < 0) throw domain_error("resultant: zero polynomial");
    if (dp == 0 && dq == 0) return ring_one_like(zero);
    if (dp == 0) { // Res(c, Q) = c^{deg Q}
        R acc = ring_one_like(zero);
        for (int i = 0; i < dq; ++i) acc = acc * P.coeff(0);
        return acc;
    }
    if (dq == 0) {
        R acc = ring_one_like(zero);
        for (int i = 0; i < dp; ++i) acc = acc * Q.coeff(0);
        return acc;
    }
    int n = dp + dq;
    Matrix<R> S = Matrix<R>::zero(n, n, zero);
    for (int i = 0; i < dq; ++i)
        for (int k = 0; k <= dp; ++k) S.at(i, i + k) = P.coeff(static_cast<size_t>(dp - k));
    for (int i = 0; i < dp; ++i)
        for (int k = 0; k <= dq; ++k) S.at(dq + i, i + k) = Q.coeff(static_cast<size_t>(dq - k));
    return determinant(S);
}

enum class InverseStatus { ok, not_invertible, insufficient_precision };

// Gauss-Jordan inverse with unit pivots. Works over fields and over the
// truncated series ring (where it refuses non-unit determinants).
template <class R>
InverseStatus try_inverse(const Matrix<R>& A, Matrix<R>& out) {
    if (A.rows() != A.cols()) throw domain_error("inverse: matrix not square");
    int n = A.rows();
    Matrix<R> M = A;
    Matrix<R> I = Matrix<R>::identity(n, A.like());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        bool any_nonzero = false;
        for (int i = col; i < n; ++i) {
            if (!ring_is_zero(M.at(i, col))) any_nonzero = true;
            if (ring_is_unit(M.at(i, col))) {
                piv = i;
                break;
            }
        }
        if (piv < 0) {
            if (any_nonzero || ring_exact(A.like())) return InverseStatus::not_invertible;
            return InverseStatus::insufficient_precision;
        }
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(M.at(piv, j), M.at(col, j));
                std::swap(I.at(piv, j), I.at(col, j));
            }
        R pinv = ring_inv(M.at(col, col));
        for (int j = 0; j < n; ++j) {
            M.at(col, j) = M.at(col, j) * pinv;
            I.at(col, j) = I.at(col, j) * pinv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || ring_is_zero(M.at(i, col))) continue;
            R f = M.at(i, col);
            for (int j = 0; j < n; ++j) {
                M.at(i, j) = M.at(i, j) - f * M.at(col, j);
                I.at(i, j) = I.at(i, j) - f * I.at(col, j);
            }
        }
    }
    out = I;
    return InverseStatus::ok;
}

template <class R>
Matrix<R> inverse(const Matrix<R>& A) {
    Matrix<R> out = A;
    switch (try_inverse(A, out)) {
        case InverseStatus::ok: return out;
        case InverseStatus::not_invertible: throw not_invertible();
        default: throw precision_error("inverse undecidable at this precision");
    }
}

// Inverse over the truncated series ring, distinguishing genuine
// non-invertibility from precision starvation.
inline Matrix<TruncSeries> trunc_inverse(const Matrix<TruncSeries>& A) { return inverse(A); }

using TSMatrix = Matrix<TruncSeries>;
using TSPoly = Poly<TruncSeries>;
using GFMatrix = Matrix<GFElem>;

} // namespace aflw
