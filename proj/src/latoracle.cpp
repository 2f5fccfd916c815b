#include "aflw/latoracle.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <set>
#include <thread>

namespace aflw {

namespace {

// --- joint commutant --------------------------------------------------------

// Rows of the linear system [X, A] = 0 on the flattened unknown X.
void append_commutator_rows(TSMatrix& sys, int& row, const TSMatrix& A) {
    int n = A.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    TruncSeries c = ring_zero_like(sys.like());
                    if (i == a) c = c + A.at(b, j);
                    if (j == b) c = c - A.at(i, a);
                    sys.at(row, a * n + b) = c;
                }
            ++row;
        }
}

TSMatrix unflatten(const std::vector<TruncSeries>& v, int n) {
    TSMatrix m = TSMatrix::zero(n, n, ring_zero_like(v[0]));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = v[static_cast<size_t>(i * n + j)];
    return m;
}

// Solve c1*K1 + c2*K2 = W coordinatewise, via a unit 2x2 minor.
bool solve_two(const TSMatrix& K1, const TSMatrix& K2, const TSMatrix& W, TruncSeries& c1,
               TruncSeries& c2, int check_prec) {
    int n = K1.rows();
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pos.emplace_back(i, j);
    for (size_t s = 0; s < pos.size(); ++s)
        for (size_t t = s + 1; t < pos.size(); ++t) {
            auto [i1, j1] = pos[s];
            auto [i2, j2] = pos[t];
            TruncSeries det = K1.at(i1, j1) * K2.at(i2, j2) - K1.at(i2, j2) * K2.at(i1, j1);
            if (!det.is_unit()) continue;
            TruncSeries dinv = det.inv();
            c1 = dinv * (W.at(i1, j1) * K2.at(i2, j2) - W.at(i2, j2) * K2.at(i1, j1));
            c2 = dinv * (K1.at(i1, j1) * W.at(i2, j2) - K1.at(i2, j2) * W.at(i1, j1));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    TruncSeries r = K1.at(a, b) * c1 + K2.at(a, b) * c2 - W.at(a, b);
                    if (!r.truncated(check_prec).is_zero()) return false;
                }
            return true;
        }
    return false;
}

} // namespace

CommutantAlgebra joint_commutant(const TSMatrix& t1z, const TSMatrix& t2z) {
    int n = t1z.rows();
    TruncSeries zero = ring_zero_like(t1z.like());
    int P = zero.precision();
    TSMatrix sys = TSMatrix::zero(2 * n * n, n * n, zero);
    int row = 0;
    append_commutator_rows(sys, row, t1z);
    append_commutator_rows(sys, row, t2z);
    SmithKernel K = smith_kernel(sys);

    CommutantAlgebra out;
    out.free_rank = static_cast<int>(K.free_basis.size());
    out.torsion = K.torsion_exponents;
    if (out.free_rank != 2)
        throw domain_error("joint_commutant: pair not regular (free rank " +
                           std::to_string(out.free_rank) + ")");
    int torsion_max = 0;
    for (int e : out.torsion) torsion_max = std::max(torsion_max, e);
    int check_prec = P - torsion_max - 2;
    if (check_prec < 4) throw precision_error("joint_commutant: precision too small");

    TSMatrix K1 = unflatten(K.free_basis[0], n);
    TSMatrix K2 = unflatten(K.free_basis[1], n);
    TSMatrix I = TSMatrix::identity(n, zero);
    TruncSeries c1 = zero, c2 = zero;
    if (!solve_two(K1, K2, I, c1, c2, check_prec))
        throw precision_error("joint_commutant: identity not expressible in the kernel basis");
    if (c1.is_unit()) {
        out.beta = K2;
    } else if (c2.is_unit()) {
        out.beta = K1;
    } else {
        throw precision_error("joint_commutant: identity not primitive in the kernel");
    }

    // minimal quadratic beta^2 = a beta + b
    TSMatrix B2 = out.beta * out.beta;
    TruncSeries a = zero, b = zero;
    if (!solve_two(out.beta, I, B2, a, b, check_prec))
        throw domain_error("joint_commutant: beta satisfies no integral quadratic");
    out.min_a = a;
    out.min_b = b;

    // greedy digit search maximizing val(c^2 - a c - b) over c in O; the
    // mismatch at an even level is always repaired by one t-digit of c, so a
    // single ascending pass reaches the supremum
    const GFContext* ctx = zero.ctx();
    TruncSeries c = zero;
    auto mval = [&](const TruncSeries& x) { return (x * x - a * x - b).valuation(); };
    for (int j = 0; 2 * j <= check_prec; ++j) {
        Valuation best = mval(c);
        int best_r = 0;
        for (int r = 1; r < ctx->order(); ++r) {
            TruncSeries cand = c;
            cand.coeff(j) = GFElem(ctx, r);
            Valuation w = mval(cand);
            bool better = (!w.exact && best.exact) || (w.exact && best.exact && w.v > best.v);
            if (better) {
                best = w;
                best_r = r;
            }
        }
        if (best_r != 0) c.coeff(j) = GFElem(ctx, best_r);
    }
    Valuation vs = mval(c);
    if (!vs.exact || vs.v > check_prec - 2)
        throw precision_error("joint_commutant: quadratic splits to working precision");
    out.cstar = c;
    out.vstar = vs.v;
    out.ramified = (vs.v % 2 != 0);
    if (out.ramified) out.ustar = (vs.v - 1) / 2;
    return out;
}

// --- stable lattice enumeration ----------------------------------------------

namespace {

struct LatticeCtx {
    const GFContext* gf;
    int D;
    int P;
    TSMatrix x0m, xm;

    LatticeCtx(const MatchedPair& pair, int window)
        : gf(pair.x0.x.like().ctx()), D(window), P(pair.x0.x.like().precision()),
          x0m(pair.x0.x), xm(pair.x.x) {}
};

std::vector<TruncSeries> matrix_column(const TSMatrix& M, int j) {
    std::vector<TruncSeries> col;
    col.reserve(static_cast<size_t>(M.rows()));
    for (int i = 0; i < M.rows(); ++i) col.push_back(M.at(i, j));
    return col;
}

TSMatrix columns_to_matrix(const std::vector<std::vector<TruncSeries>>& cols) {
    int n = static_cast<int>(cols[0].size());
    TSMatrix G = TSMatrix::zero(n, static_cast<int>(cols.size()), ring_zero_like(cols[0][0]));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < n; ++i) G.at(i, static_cast<int>(j)) = cols[j][static_cast<size_t>(i)];
    return G;
}

// Closure of span(B) + O w under both operators.
TSMatrix stable_closure(const LatticeCtx& lc, const TSMatrix& B,
                        const std::vector<TruncSeries>& w) {
    std::vector<std::vector<TruncSeries>> cols;
    for (int j = 0; j < B.cols(); ++j) cols.push_back(matrix_column(B, j));
    cols.push_back(w);
    TSMatrix cur = lattice_hnf(columns_to_matrix(cols), lc.D);
    while (true) {
        std::vector<std::vector<TruncSeries>> next;
        for (int j = 0; j < cur.cols(); ++j) next.push_back(matrix_column(cur, j));
        TSMatrix im0 = lc.x0m * cur, im1 = lc.xm * cur;
        for (int j = 0; j < cur.cols(); ++j) {
            next.push_back(matrix_column(im0, j));
            next.push_back(matrix_column(im1, j));
        }
        TSMatrix grown = lattice_hnf(columns_to_matrix(next), lc.D);
        if (hnf_key(grown, lc.D) == hnf_key(cur, lc.D)) return cur;
        cur = grown;
    }
}

bool is_primitive(const TSMatrix& B) {
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j)
            if (B.at(i, j).is_unit()) return true;
    return false;
}

bool contains_tpow_std(const TSMatrix& B, int D, int k) {
    int n = B.rows();
    const TruncSeries like = B.like();
    for (int i = 0; i < n; ++i) {
        std::vector<TruncSeries> w(static_cast<size_t>(n), ring_zero_like(like));
        w[static_cast<size_t>(i)] = TruncSeries::t_power(like.ctx(), like.precision(), k);
        if (!lattice_contains(B, D, w)) return false;
    }
    return true;
}

// Every operator-stable submodule of Lambda_0 / t^D Lambda_0, via iterated
// socle extension: any strictly larger stable module contains an element w
// with t w inside the current one.
std::map<std::string, TSMatrix> all_stable_submodules(const LatticeCtx& lc) {
    std::map<std::string, TSMatrix> seen;
    std::deque<TSMatrix> queue;
    TSMatrix bottom = lattice_hnf(TSMatrix::zero(4, 1, TruncSeries(lc.gf, lc.P)), lc.D);
    seen.emplace(hnf_key(bottom, lc.D), bottom);
    queue.push_back(bottom);
    while (!queue.empty()) {
        TSMatrix B = queue.front();
        queue.pop_front();
        // generators of W = {w : t w in Lambda}
        std::vector<std::vector<TruncSeries>> wgens;
        for (const auto& k : residue_kernel(B)) {
            std::vector<TruncSeries> bk(4, TruncSeries(lc.gf, lc.P));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    TruncSeries scal(lc.gf, lc.P);
                    scal.coeff(0) = k[static_cast<size_t>(j)];
                    bk[static_cast<size_t>(i)] = bk[static_cast<size_t>(i)] + B.at(i, j) * scal;
                }
            for (auto& x : bk) x = x.div_tpow(1);
            wgens.push_back(std::move(bk));
        }
        for (int j = 0; j < 4; ++j) wgens.push_back(matrix_column(B, j));
        for (int i = 0; i < 4; ++i) {
            std::vector<TruncSeries> e(4, TruncSeries(lc.gf, lc.P));
            e[static_cast<size_t>(i)] = TruncSeries::t_power(lc.gf, lc.P, lc.D - 1);
            wgens.push_back(std::move(e));
        }
        TSMatrix W = lattice_hnf(columns_to_matrix(wgens), lc.D);
        // walk the finite quotient W / Lambda by residue combinations
        int q = lc.gf->order();
        int total = q * q * q * q;
        for (int code = 1; code < total; ++code) {
            int rest = code;
            std::vector<TruncSeries> w(4, TruncSeries(lc.gf, lc.P));
            bool nonzero = false;
            for (int j = 0; j < 4; ++j) {
                int digit = rest % q;
                rest /= q;
                if (digit == 0) continue;
                nonzero = true;
                TruncSeries scal(lc.gf, lc.P);
                scal.coeff(0) = GFElem(lc.gf, digit);
                for (int i = 0; i < 4; ++i)
                    w[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] + W.at(i, j) * scal;
            }
            if (!nonzero || lattice_contains(B, lc.D, w)) continue;
            TSMatrix grown = stable_closure(lc, B, w);
            std::string key = hnf_key(grown, lc.D);
            if (seen.emplace(key, grown).second) queue.push_back(grown);
        }
    }
    return seen;
}

// Lattice move: Lambda -> mat * Lambda, renormalized to the primitive
// representative of its t-power class.
TSMatrix apply_move(const TSMatrix& mat, const TSMatrix& B, int D) {
    TSMatrix C = mat * B;
    int e = -1;
    for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < C.cols(); ++j) {
            Valuation v = C.at(i, j).valuation();
            if (v.exact && (e < 0 || v.v < e)) e = v.v;
        }
    if (e < 0) throw precision_error("apply_move: image vanished at precision");
    if (e > 0)
        for (int i = 0; i < C.rows(); ++i)
            for (int j = 0; j < C.cols(); ++j) C.at(i, j) = C.at(i, j).div_tpow(e);
    return lattice_hnf(C, D);
}

// Residue-level generators of O_L^x modulo O_F^x and deep units:
// 1 + r * pi_L * t^j with pi_L = (beta - c*) t^{-ustar}.
std::vector<TSMatrix> unit_moves(const CommutantAlgebra& comm, int D) {
    const TruncSeries like = comm.beta.like();
    const GFContext* gf = like.ctx();
    int P = like.precision();
    TSMatrix I = TSMatrix::identity(comm.beta.rows(), like);
    TSMatrix betac = comm.beta - I.scaled(comm.cstar);
    int ustar = static_cast<int>(comm.ustar);
    int J = ustar + D + 2;
    std::vector<TSMatrix> moves;
    for (int r = 1; r < gf->order(); ++r) {
        TruncSeries rs(gf, P);
        rs.coeff(0) = GFElem(gf, r);
        for (int j = 0; j <= J; ++j) {
            if (j >= ustar) {
                moves.push_back(I + betac.scaled(rs * TruncSeries::t_power(gf, P, j - ustar)));
            } else {
                moves.push_back(I.scaled(TruncSeries::t_power(gf, P, ustar - j)) + betac.scaled(rs));
            }
        }
    }
    return moves;
}

long long triangular_exponent_sum(const TSMatrix& B) {
    long long s = 0;
    for (int e : hnf_pivot_exponents(B)) s += e;
    return s;
}

// max k with M * Lambda <= t^k Lambda (possibly negative), 2x2 case: the
// minimal valuation of adj(B) (M B) minus the pivot sum.
long long relative_valuation(const TSMatrix& M, const TSMatrix& B) {
    TruncSeries like = B.like();
    TSMatrix adj = TSMatrix::zero(2, 2, like);
    adj.at(0, 0) = B.at(1, 1);
    adj.at(0, 1) = ring_zero_like(like) - B.at(0, 1);
    adj.at(1, 0) = ring_zero_like(like) - B.at(1, 0);
    adj.at(1, 1) = B.at(0, 0);
    TSMatrix N = adj * (M * B);
    int minv = -1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Valuation v = N.at(i, j).valuation();
            if (v.exact && (minv < 0 || v.v < minv)) minv = v.v;
        }
    if (minv < 0) throw precision_error("relative_valuation: image vanishes at precision");
    return minv - triangular_exponent_sum(B);
}

TSMatrix component_basis(const TSMatrix& B, int which, int D) {
    TSMatrix G = TSMatrix::zero(2, B.cols(), B.like());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < B.cols(); ++j) G.at(i, j) = B.at(2 * which + i, j);
    return lattice_hnf(G, D);
}

// Does some residue combination w of the basis generate the component as an
// R_m-module? R_m = O + O t^m pi_L, and t^m pi_L = t^{m-ustar} (beta - c*).
bool component_principal(const TSMatrix& Bc, const TSMatrix& betac_block, long long m,
                         long long ustar, int D) {
    const GFContext* gf = Bc.like().ctx();
    int P = Bc.like().precision();
    int q = gf->order();
    for (int code = 1; code < q * q; ++code) {
        int r0 = code % q, r1 = code / q;
        std::vector<TruncSeries> w(2, TruncSeries(gf, P));
        for (int i = 0; i < 2; ++i) {
            TruncSeries s0(gf, P), s1(gf, P);
            s0.coeff(0) = GFElem(gf, r0);
            s1.coeff(0) = GFElem(gf, r1);
            w[static_cast<size_t>(i)] = Bc.at(i, 0) * s0 + Bc.at(i, 1) * s1;
        }
        std::vector<TruncSeries> z(2, TruncSeries(gf, P));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                z[static_cast<size_t>(i)] =
                    z[static_cast<size_t>(i)] + betac_block.at(i, j) * w[static_cast<size_t>(j)];
        long long shift = m - ustar;
        bool ok = true;
        for (auto& x : z) {
            if (shift >= 0) {
                x = x.mul_tpow(static_cast<int>(shift));
            } else {
                for (int k = 0; k < -shift && ok; ++k)
                    if (!x.coeff(k).is_zero()) ok = false;
                if (ok) x = x.div_tpow(static_cast<int>(-shift));
            }
        }
        if (!ok) continue;
        TSMatrix G = TSMatrix::zero(2, 2, TruncSeries(gf, P));
        for (int i = 0; i < 2; ++i) {
            G.at(i, 0) = w[static_cast<size_t>(i)];
            G.at(i, 1) = z[static_cast<size_t>(i)];
        }
        if (hnf_key(lattice_hnf(G, D), D) == hnf_key(Bc, D)) return true;
    }
    return false;
}

} // namespace

std::vector<StableLattice> enumerate_stable_lattices(const MatchedPair& pair,
                                                     const CommutantAlgebra& comm, int window) {
    if (!comm.ramified) throw domain_error("enumerate_stable_lattices: commutant not ramified");
    LatticeCtx lc(pair, window);
    if (lc.P <= 2 * lc.D + 2)
        throw precision_error("enumerate_stable_lattices: precision too small for the window");

    std::map<std::string, TSMatrix> stable = all_stable_submodules(lc);

    std::map<std::string, TSMatrix> primitive;
    for (auto& [key, B] : stable) {
        if (!is_primitive(B)) continue;
        if (!contains_tpow_std(B, lc.D, lc.D - 1))
            throw domain_error("enumerate_stable_lattices: window overflow (enlarge window)");
        primitive.emplace(key, B);
    }

    std::vector<TSMatrix> moves = unit_moves(comm, lc.D);
    TSMatrix I = TSMatrix::identity(4, pair.x0.x.like());
    moves.push_back(comm.beta - I.scaled(comm.cstar)); // odd-valuation move

    std::vector<StableLattice> reps;
    std::set<std::string> assigned;
    for (auto& [key, B] : primitive) {
        if (assigned.count(key)) continue;
        std::set<std::string> orbit;
        std::deque<TSMatrix> queue;
        orbit.insert(key);
        queue.push_back(B);
        std::string best_key = key;
        TSMatrix best = B;
        while (!queue.empty()) {
            TSMatrix cur = queue.front();
            queue.pop_front();
            for (const TSMatrix& mv : moves) {
                TSMatrix img = apply_move(mv, cur, lc.D);
                std::string k = hnf_key(img, lc.D);
                if (!primitive.count(k))
                    throw domain_error("enumerate_stable_lattices: orbit left the window");
                if (orbit.insert(k).second) {
                    queue.push_back(img);
                    if (k < best_key) {
                        best_key = k;
                        best = img;
                    }
                }
            }
        }
        for (const auto& k : orbit) assigned.insert(k);
        reps.push_back(StableLattice{best, lc.D});
    }
    return reps;
}

LatticeClassStats lattice_stats(const StableLattice& lat, const MatchedPair& pair,
                                const CommutantAlgebra& comm) {
    int D = lat.window;
    const TSMatrix& B = lat.basis;
    TruncSeries like = B.like();
    TSMatrix I4 = TSMatrix::identity(4, like);

    LatticeClassStats out;

    TSMatrix Bp = component_basis(B, 0, D);
    TSMatrix Bm = component_basis(B, 1, D);

    TSMatrix betac = comm.beta - I4.scaled(comm.cstar);
    TSMatrix bcp = betac.block(0, 0, 2, 2);
    TSMatrix bcm = betac.block(2, 2, 2, 2);
    long long vbp = relative_valuation(bcp, Bp);
    long long vbm = relative_valuation(bcm, Bm);
    out.m_plus = std::max<long long>(0, comm.ustar - vbp);
    out.m_minus = std::max<long long>(0, comm.ustar - vbm);

    // length(Lambda_- / Theta Lambda_+) through determinant valuations
    BisectorData<TruncSeries> bd = bisectors(pair.x0, pair.x);
    TSMatrix theta = (bd.M * bd.E).scaled(ring_inv(bd.delta));
    TSMatrix theta_mp = theta.block(2, 0, 2, 2); // plus coords -> minus coords
    long long det_theta = determinant(theta_mp).valuation().value_or_throw();
    out.length = det_theta + triangular_exponent_sum(Bp) - triangular_exponent_sum(Bm);

    TSMatrix img = theta_mp * Bp;
    for (int j = 0; j < 2; ++j) {
        std::vector<TruncSeries> w = {img.at(0, j), img.at(1, j)};
        if (!lattice_contains(Bm, D, w))
            throw domain_error("lattice_stats: Theta image escapes the minus component");
    }

    // measured stabilizer index: orbit size under the residue-level units
    std::vector<TSMatrix> umoves = unit_moves(comm, D);
    std::set<std::string> orbit;
    std::deque<TSMatrix> queue;
    orbit.insert(hnf_key(B, D));
    queue.push_back(B);
    while (!queue.empty()) {
        TSMatrix cur = queue.front();
        queue.pop_front();
        for (const TSMatrix& mv : umoves) {
            TSMatrix im = apply_move(mv, cur, D);
            if (orbit.insert(hnf_key(im, D)).second) queue.push_back(im);
        }
    }
    out.stab_index = static_cast<long long>(orbit.size());

    out.plus_principal = component_principal(Bp, bcp, out.m_plus, comm.ustar, D);
    out.minus_principal = component_principal(Bm, bcm, out.m_minus, comm.ustar, D);
    return out;
}

TPoly orbital_from_lattices(const std::vector<LatticeClassStats>& classes) {
    TPoly p;
    for (const auto& c : classes) p.add_term(c.length, QRatFun(Rational(c.stab_index)));
    return p;
}

LatticeOracleRun run_lattice_oracle(int q, long long v, int window, int prec) {
    if (window <= 0) window = static_cast<int>(v) + 3;
    int needed = 2 * window + static_cast<int>(v) + 8;
    if (prec < needed) prec = needed;
    const GFContext* ctx = GFContext::prime_field(q);
    MatchedPair pair = build_matched_pair(2, v, ctx, prec);
    CommutantAlgebra comm = joint_commutant(pair.x0.x, pair.x.x);
    if (!comm.ramified || comm.vstar != v)
        throw domain_error("run_lattice_oracle: commutant does not match the requested v");

    LatticeOracleRun run;
    run.q = q;
    run.v = v;
    run.window = window;
    run.prec = prec;
    std::vector<StableLattice> reps = enumerate_stable_lattices(pair, comm, window);
    for (const auto& rep : reps) run.classes.push_back(lattice_stats(rep, pair, comm));
    run.stable_count = static_cast<long long>(reps.size());
    run.weighted = orbital_from_lattices(run.classes);
    return run;
}

// --- counting oracles ---------------------------------------------------------

namespace {

const GFContext* field_of_order(int Q) {
    switch (Q) {
        case 2:
        case 3:
        case 5:
        case 7: return GFContext::prime_field(Q);
        case 4: return GFContext::quadratic(2);
        case 9: return GFContext::quadratic(3);
        case 25: return GFContext::quadratic(5);
        default: throw domain_error("field_of_order: unsupported cardinality");
    }
}

TruncSeries decode_elem(const GFContext* gf, int N, unsigned long long& code) {
    TruncSeries s(gf, N);
    int Q = gf->order();
    for (int i = 0; i < N; ++i) {
        s.coeff(i) = GFElem(gf, static_cast<int>(code % static_cast<unsigned long long>(Q)));
        code /= static_cast<unsigned long long>(Q);
    }
    return s;
}

std::vector<long long> det_val_chunk(const GFContext* gf, int a, int N, unsigned long long lo,
                                     unsigned long long hi) {
    std::vector<long long> tally(static_cast<size_t>(N) + 1, 0); // [N] holds "at least N"
    for (unsigned long long idx = lo; idx < hi; ++idx) {
        unsigned long long code = idx;
        TruncSeries det(gf, N);
        if (a == 1) {
            det = decode_elem(gf, N, code);
        } else {
            TruncSeries e00 = decode_elem(gf, N, code);
            TruncSeries e01 = decode_elem(gf, N, code);
            TruncSeries e10 = decode_elem(gf, N, code);
            TruncSeries e11 = decode_elem(gf, N, code);
            det = e00 * e11 - e01 * e10;
        }
        Valuation v = det.valuation();
        tally[static_cast<size_t>(v.exact ? v.v : N)] += 1;
    }
    return tally;
}

} // namespace

DetValuationCount count_det_valuations(int a, int Q, int N, int chunks, int jobs) {
    if (a != 1 && a != 2) throw domain_error("count_det_valuations: a must be 1 or 2");
    const GFContext* gf = field_of_order(Q);
    unsigned long long total = 1;
    for (int i = 0; i < a * a * N; ++i) {
        total *= static_cast<unsigned long long>(Q);
        if (total > (1ULL << 40)) throw domain_error("count_det_valuations: state space too large");
    }
    if (chunks < 1) chunks = 1;
    std::vector<std::pair<unsigned long long, unsigned long long>> ranges;
    unsigned long long step = total / static_cast<unsigned long long>(chunks) + 1;
    for (unsigned long long lo = 0; lo < total; lo += step)
        ranges.emplace_back(lo, std::min(total, lo + step));

    std::vector<std::vector<long long>> tallies(ranges.size());
    if (jobs <= 1 || ranges.size() == 1) {
        for (size_t i = 0; i < ranges.size(); ++i)
            tallies[i] = det_val_chunk(gf, a, N, ranges[i].first, ranges[i].second);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= ranges.size()) return;
                    tallies[i] = det_val_chunk(gf, a, N, ranges[i].first, ranges[i].second);
                }
            });
        for (auto& th : pool) th.join();
    }
    std::vector<long long> counts(static_cast<size_t>(N) + 1, 0);
    for (const auto& t : tallies) // merge in index order: deterministic
        for (size_t i = 0; i < t.size(); ++i) counts[i] += t[i];

    DetValuationCount out;
    out.a = a;
    out.Q = Q;
    out.N = N;
    Integer tot = 1;
    for (int i = 0; i < a * a * N; ++i) tot *= Q;
    for (int n = 0; n < N; ++n)
        out.measured.push_back(Rational(Integer(counts[static_cast<size_t>(n)]), tot));

    Rational Qr(Q);
    Rational eps(1);
    std::vector<Rational> series(static_cast<size_t>(N), Rational(0));
    series[0] = Rational(1);
    for (int i = 1; i <= a; ++i) {
        Rational Qi(1);
        for (int k = 0; k < i; ++k) Qi *= Qr;
        eps *= Rational(1) - Rational(1) / Qi;
        std::vector<Rational> next(static_cast<size_t>(N), Rational(0));
        for (int n = 0; n < N; ++n) {
            Rational geo(1); // (Q^{-i})^j
            for (int j = 0; j <= n; ++j) {
                next[static_cast<size_t>(n)] += series[static_cast<size_t>(n - j)] * geo;
                geo /= Qi;
            }
        }
        series = std::move(next);
    }
    for (int n = 0; n < N; ++n) out.expected.push_back(eps * series[static_cast<size_t>(n)]);
    return out;
}

ClassValuationStat count_class_valuation_stat(int q, int N) {
    if (q != 2 && q != 3) throw domain_error("count_class_valuation_stat: q must be 2 or 3");
    const GFContext* gf = GFContext::prime_field(q);
    // residually irreducible quadratic X^2 - s X + p
    long long s_int = (q == 2) ? 1 : 0;
    long long p_int = 1;
    TruncSeries s = TruncSeries::from_int(gf, N, s_int);
    TruncSeries p = TruncSeries::from_int(gf, N, p_int);
    TruncSeries four = TruncSeries::from_int(gf, N, 4);
    TruncSeries delta = s * s - four * p;
    if (!delta.is_unit()) throw domain_error("count_class_valuation_stat: delta not a unit");
    TruncSeries dinv = delta.inv();
    TruncSeries one = TruncSeries::from_int(gf, N, 1);

    unsigned long long sz = 1;
    for (int i = 0; i < N; ++i) sz *= static_cast<unsigned long long>(q);

    ClassValuationStat out;
    out.q = q;
    out.N = N;
    std::map<long long, long long> counts;
    long long grand = 0;
    for (unsigned long long ai = 0; ai < sz; ++ai) {
        unsigned long long c1 = ai;
        TruncSeries alpha = decode_elem(gf, N, c1);
        // R = alpha (s - alpha) - p is a unit because the quadratic is
        // residually irreducible, so beta gamma = R forces beta to be a unit.
        TruncSeries R = alpha * (s - alpha) - p;
        if (!R.is_unit()) throw error("count_class_valuation_stat: non-unit discriminant value");
        for (unsigned long long bi = 0; bi < sz; ++bi) {
            unsigned long long c2 = bi;
            TruncSeries beta = decode_elem(gf, N, c2);
            if (!beta.is_unit()) continue;
            TruncSeries gamma = R * beta.inv();
            // E = x - x0 with x0 the companion matrix [[0, -p], [1, s]]
            TruncSeries e00 = alpha;
            TruncSeries e01 = beta + p;
            TruncSeries e10 = gamma - one;
            TruncSeries e11 = -alpha;
            TruncSeries w_elem = -(e00 * e11 - e01 * e10) * dinv; // the scalar e_x^2
            Valuation w = w_elem.valuation();
            ++grand;
            if (w.exact)
                counts[w.v] += 1;
            else
                counts[-1] += 1;
        }
    }
    Integer norm = 1;
    for (int i = 0; i < 2 * N; ++i) norm *= q;
    for (const auto& [w, c] : counts) out.buckets[w] = Rational(Integer(c), norm);
    out.total = Rational(Integer(grand), norm);
    return out;
}

} // namespace aflw
