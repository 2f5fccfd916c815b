#pragma once

#include "aflw/matrix.hpp"

#include <optional>
#include <string>

namespace aflw {

// Linear algebra over the chain ring O/t^D (with elements carried at a
// higher working precision). Lattices are O-spans of column vectors together
// with t^D * (standard basis); the canonical basis below is the Howell-type
// triangular form: pivot t^{e_i} in row i of column i (e_i <= D), zeros
// above each pivot, entries below reduced mod the pivot of their row.

inline TruncSeries ts_reduce(const TruncSeries& x, int D) { return x.reduced_mod_tpow(D); }

// Canonical triangular basis of span(columns of G) + t^D * O^n.
inline TSMatrix lattice_hnf(const TSMatrix& G, int D) {
    int n = G.rows();
    TruncSeries z = G.like();
    const GFContext* ctx = z.ctx();
    int P = z.precision();
    if (P <= D) throw domain_error("lattice_hnf: working precision too small");

    std::vector<std::vector<TruncSeries>> cols;
    for (int j = 0; j < G.cols(); ++j) {
        std::vector<TruncSeries> c;
        c.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) c.push_back(ts_reduce(G.at(i, j), D));
        cols.push_back(std::move(c));
    }
    for (int i = 0; i < n; ++i) {
        std::vector<TruncSeries> c(static_cast<size_t>(n), TruncSeries(ctx, P));
        c[static_cast<size_t>(i)] = TruncSeries::t_power(ctx, P, D);
        cols.push_back(std::move(c));
    }

    size_t placed = 0;
    for (int row = 0; row < n; ++row) {
        int best = -1, best_val = P + 1;
        for (size_t j = placed; j < cols.size(); ++j) {
            Valuation v = cols[j][static_cast<size_t>(row)].valuation();
            if (!v.exact) continue;
            if (v.v < best_val) {
                best_val = v.v;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) throw domain_error("lattice_hnf: missing pivot");
        std::swap(cols[placed], cols[static_cast<size_t>(best)]);
        auto& pc = cols[placed];
        int e = best_val;
        TruncSeries unit = pc[static_cast<size_t>(row)].div_tpow(e);
        TruncSeries uinv = unit.inv();
        for (auto& x : pc) x = ts_reduce(x * uinv, D);
        pc[static_cast<size_t>(row)] = TruncSeries::t_power(ctx, P, e); // now exactly t^e
        for (size_t j = placed + 1; j < cols.size(); ++j) {
            TruncSeries& entry = cols[j][static_cast<size_t>(row)];
            if (entry.is_zero()) continue;
            TruncSeries f = entry.div_tpow(e);
            for (int i = 0; i < n; ++i)
                cols[j][static_cast<size_t>(i)] =
                    ts_reduce(cols[j][static_cast<size_t>(i)] - f * pc[static_cast<size_t>(i)], D);
        }
        ++placed;
    }

    TSMatrix B = TSMatrix::zero(n, n, TruncSeries(ctx, P));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) B.at(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];

    // Reduce below-diagonal entries modulo the pivot of their row.
    for (int j = 0; j < n; ++j)
        for (int i = j + 1; i < n; ++i) {
            Valuation ei = B.at(i, i).valuation();
            TruncSeries rem = B.at(i, j).reduced_mod_tpow(ei.v);
            TruncSeries g = (B.at(i, j) - rem).div_tpow(ei.v);
            if (g.is_zero()) continue;
            for (int k = i; k < n; ++k) B.at(k, j) = ts_reduce(B.at(k, j) - g * B.at(k, i), D);
        }
    return B;
}

inline std::vector<int> hnf_pivot_exponents(const TSMatrix& B) {
    std::vector<int> e;
    for (int i = 0; i < B.rows(); ++i) e.push_back(B.at(i, i).valuation().value_or_throw());
    return e;
}

// Deterministic serialization of a canonical basis, for dedup keys.
inline std::string hnf_key(const TSMatrix& B, int D) {
    std::string s;
    for (int j = 0; j < B.cols(); ++j)
        for (int i = 0; i < B.rows(); ++i) {
            for (int k = 0; k < D; ++k) {
                s.push_back(static_cast<char>('0' + B.at(i, j).coeff(k).index()));
            }
            s.push_back('|');
        }
    return s;
}

// Does w lie in span(B) + t^D O^n?
inline bool lattice_contains(const TSMatrix& B, int D, std::vector<TruncSeries> w) {
    int n = B.rows();
    for (auto& x : w) x = ts_reduce(x, D);
    for (int row = 0; row < n; ++row) {
        const TruncSeries& piv = B.at(row, row);
        int e = piv.valuation().value_or_throw();
        Valuation vw = w[static_cast<size_t>(row)].valuation();
        if (vw.exact && vw.v < e) return false;
        if (!vw.exact && vw.v < e) return false; // cannot certify divisibility
        TruncSeries f = w[static_cast<size_t>(row)].div_tpow(e);
        for (int i = row; i < n; ++i)
            w[static_cast<size_t>(i)] = ts_reduce(w[static_cast<size_t>(i)] - f * B.at(i, row), D);
    }
    return true;
}

// Val of det of a square TruncSeries matrix; throws on zero-at-precision.
inline int det_valuation(const TSMatrix& A) {
    TruncSeries d = determinant(A);
    return d.valuation().value_or_throw();
}

// Kernel of (A mod t): vectors over the residue field.
inline std::vector<std::vector<GFElem>> residue_kernel(const TSMatrix& A) {
    int m = A.rows(), n = A.cols();
    GFElem z = GFElem::zero(A.like().ctx());
    GFMatrix M = GFMatrix::zero(m, n, z);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) M.at(i, j) = A.at(i, j).coeff(0);

    std::vector<int> pivot_col_of_row(static_cast<size_t>(m), -1);
    std::vector<bool> is_pivot_col(static_cast<size_t>(n), false);
    int r = 0;
    for (int col = 0; col < n && r < m; ++col) {
        int piv = -1;
        for (int i = r; i < m; ++i)
            if (!M.at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < n; ++j) std::swap(M.at(piv, j), M.at(r, j));
        GFElem pinv = M.at(r, col).inv();
        for (int j = 0; j < n; ++j) M.at(r, j) = M.at(r, j) * pinv;
        for (int i = 0; i < m; ++i) {
            if (i == r || M.at(i, col).is_zero()) continue;
            GFElem f = M.at(i, col);
            for (int j = 0; j < n; ++j) M.at(i, j) = M.at(i, j) - f * M.at(r, j);
        }
        pivot_col_of_row[static_cast<size_t>(r)] = col;
        is_pivot_col[static_cast<size_t>(col)] = true;
        ++r;
    }
    std::vector<std::vector<GFElem>> basis;
    for (int col = 0; col < n; ++col) {
        if (is_pivot_col[static_cast<size_t>(col)]) continue;
        std::vector<GFElem> v(static_cast<size_t>(n), z);
        v[static_cast<size_t>(col)] = GFElem::one(z.ctx());
        for (int i = 0; i < r; ++i) {
            int pc = pivot_col_of_row[static_cast<size_t>(i)];
            v[static_cast<size_t>(pc)] = -M.at(i, col);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

struct SmithKernel {
    std::vector<std::vector<TruncSeries>> free_basis; // exact solutions mod t^P
    std::vector<int> torsion_exponents;               // nonzero elementary divisors' exponents
};

// Kernel of A over O/t^P via Smith-type elimination with unit pivots of
// minimal valuation. The free part corresponds to saturated solutions.
inline SmithKernel smith_kernel(TSMatrix A) {
    int m = A.rows(), n = A.cols();
    TruncSeries z = A.like();
    int P = z.precision();
    TSMatrix V = TSMatrix::identity(n, z);
    int k = 0;
    std::vector<int> exps;
    while (k < std::min(m, n)) {
        int bi = -1, bj = -1, bv = P + 1;
        for (int i = k; i < m; ++i)
            for (int j = k; j < n; ++j) {
                Valuation v = A.at(i, j).valuation();
                if (v.exact && v.v < bv) {
                    bv = v.v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        if (bi != k)
            for (int j = 0; j < n; ++j) std::swap(A.at(bi, j), A.at(k, j));
        if (bj != k)
            for (int i = 0; i < m; ++i) {
                std::swap(A.at(i, bj), A.at(i, k));
            }
        if (bj != k)
            for (int i = 0; i < n; ++i) std::swap(V.at(i, bj), V.at(i, k));
        const TruncSeries piv = A.at(k, k);
        for (int j = k + 1; j < n; ++j) {
            if (A.at(k, j).is_zero()) continue;
            TruncSeries f = ring_div_exact(A.at(k, j), piv);
            for (int i = 0; i < m; ++i) A.at(i, j) = A.at(i, j) - f * A.at(i, k);
            for (int i = 0; i < n; ++i) V.at(i, j) = V.at(i, j) - f * V.at(i, k);
        }
        for (int i = k + 1; i < m; ++i) {
            if (A.at(i, k).is_zero()) continue;
            TruncSeries f = ring_div_exact(A.at(i, k), piv);
            for (int j = 0; j < n; ++j) A.at(i, j) = A.at(i, j) - f * A.at(k, j);
        }
        exps.push_back(bv);
        ++k;
    }
    SmithKernel out;
    for (int e : exps)
        if (e > 0) out.torsion_exponents.push_back(e);
    for (int j = k; j < n; ++j) {
        std::vector<TruncSeries> v;
        v.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) v.push_back(V.at(i, j));
        out.free_basis.push_back(std::move(v));
    }
    return out;
}

} // namespace aflw
