#pragma once

#include "aflw/chainlin.hpp"
#include "aflw/matrix.hpp"

#include <numeric>

namespace aflw {

// A quadratic etale parameter zeta, stored through its trace s, norm p and
// the central scalar delta = (zeta - zeta^sigma)^2 = s^2 - 4p. The split case
// additionally records the pair (a, b) with s = a+b, p = ab.
template <class R>
struct Zeta {
    R s, p;
    bool split;
    R a, b; // split case only

    R delta() const {
        R four = ring_one_like(s) + ring_one_like(s) + ring_one_like(s) + ring_one_like(s);
        return s * s - four * p;
    }

    static Zeta split_pair(const R& a, const R& b) { return Zeta{a + b, a * b, true, a, b}; }
    static Zeta quadratic(const R& s, const R& p) {
        R z = ring_zero_like(s);
        return Zeta{s, p, false, z, z};
    }
};

// A point of the conjugacy variety S_h: a 2h x 2h matrix satisfying
// x^2 - s x + p = 0 with full characteristic polynomial (X^2 - sX + p)^h.
template <class R>
struct SPoint {
    int h;
    Zeta<R> zeta;
    Matrix<R> x;
};

template <class R>
Matrix<R> conj_of(const SPoint<R>& pt) { // x^sigma = s - x (trace relation)
    Matrix<R> s_id = Matrix<R>::identity(2 * pt.h, pt.x.like()).scaled(pt.zeta.s);
    return s_id - pt.x;
}

template <class R>
SPoint<R> base_point(int h, const Zeta<R>& zeta) {
    if (ring_is_zero(zeta.delta())) throw domain_error("base_point: delta = 0 (not etale)");
    R z = ring_zero_like(zeta.s);
    Matrix<R> x = Matrix<R>::zero(2 * h, 2 * h, z);
    if (zeta.split) {
        for (int i = 0; i < h; ++i) {
            x.at(i, i) = zeta.a;
            x.at(h + i, h + i) = zeta.b;
        }
    } else {
        // block-diagonal companion matrices of X^2 - sX + p
        for (int i = 0; i < h; ++i) {
            x.at(2 * i, 2 * i + 1) = z - zeta.p;
            x.at(2 * i + 1, 2 * i) = ring_one_like(z);
            x.at(2 * i + 1, 2 * i + 1) = zeta.s;
        }
    }
    return SPoint<R>{h, zeta, x};
}

template <class R>
bool satisfies_quadratic(const SPoint<R>& pt) {
    Matrix<R> I = Matrix<R>::identity(2 * pt.h, pt.x.like());
    return (pt.x * pt.x - pt.x.scaled(pt.zeta.s) + I.scaled(pt.zeta.p)).is_zero();
}

// Bisector numerators of a double structure: M = x - x0^sigma, E = x - x0,
// and the central scalar delta. The interior/exterior bisectors themselves
// are i = M/sqrt(delta), e = E/sqrt(delta); all identities are stated at the
// numerator level so that no square root of delta is ever extracted.
template <class R>
struct BisectorData {
    Matrix<R> M, E;
    R delta;
};

template <class R>
BisectorData<R> bisectors(const SPoint<R>& x0, const SPoint<R>& x) {
    if (x0.h != x.h) throw domain_error("bisectors: rank mismatch");
    if (!(x0.zeta.s == x.zeta.s && x0.zeta.p == x.zeta.p))
        throw domain_error("bisectors: zeta mismatch");
    return BisectorData<R>{x.x - conj_of(x0), x.x - x0.x, x0.zeta.delta()};
}

// i^2 = M^2/delta, the element of the joint commutant whose characteristic
// polynomial classifies the isogeny class.
template <class R>
Matrix<R> normalized_centralizer(const BisectorData<R>& bd) {
    return (bd.M * bd.M).scaled(ring_inv(bd.delta));
}

// Invariant polynomial. Split case: the characteristic polynomial of the
// restriction of M^2/delta to the a-eigenblock of the standard base point,
// checked for equality against the b-block. Unramified case only for h = 1,
// where M^2/delta is scalar.
template <class R>
Poly<R> invariant_polynomial(const SPoint<R>& x0, const SPoint<R>& x) {
    BisectorData<R> bd = bisectors(x0, x);
    Matrix<R> N = normalized_centralizer(bd);
    int h = x0.h;
    if (x0.zeta.split) {
        if (!(x0.x == base_point(h, x0.zeta).x))
            throw domain_error("invariant_polynomial: x0 must be the standard base point");
        Poly<R> Pa = charpoly(N.block(0, 0, h, h));
        Poly<R> Pb = charpoly(N.block(h, h, h, h));
        if (Pa != Pb)
            throw domain_error("invariant polynomial block mismatch (x not in S, or precision loss)");
        return Pa;
    }
    if (h != 1) throw domain_error("invariant_polynomial: unramified case only implemented for h=1");
    R c = N.at(0, 0);
    Matrix<R> cI = Matrix<R>::identity(2, N.like()).scaled(c);
    if (!(N == cI)) throw domain_error("invariant_polynomial: centralizer not scalar");
    std::vector<R> cs{ring_zero_like(c) - c, ring_one_like(c)};
    return Poly<R>(std::move(cs));
}

// Polar stereographic coordinate x_# = E M^{-1}.
template <class R>
Matrix<R> stereographic(const SPoint<R>& x0, const SPoint<R>& x) {
    BisectorData<R> bd = bisectors(x0, x);
    Matrix<R> Minv = bd.M;
    switch (try_inverse(bd.M, Minv)) {
        case InverseStatus::ok: break;
        case InverseStatus::not_invertible: throw domain_error("stereographic undefined");
        default: throw precision_error("stereographic: M undecidable at precision");
    }
    return bd.E * Minv;
}

template <class R>
bool is_semilinear(const Matrix<R>& y, const SPoint<R>& x0) {
    return (y * x0.x - conj_of(x0) * y).is_zero();
}

// Inverse of the stereographic map: x = (I - y)^{-1} (x0 - y x0^sigma).
template <class R>
SPoint<R> inverse_stereographic(const SPoint<R>& x0, const Matrix<R>& y) {
    if (!is_semilinear(y, x0)) throw domain_error("inverse_stereographic: y not semilinear");
    Matrix<R> I = Matrix<R>::identity(2 * x0.h, x0.x.like());
    Matrix<R> IyInv = I;
    switch (try_inverse(I - y, IyInv)) {
        case InverseStatus::ok: break;
        case InverseStatus::not_invertible: throw domain_error("inverse_stereographic: I - y singular");
        default: throw precision_error("inverse_stereographic: I - y undecidable at precision");
    }
    SPoint<R> x{x0.h, x0.zeta, IyInv * (x0.x - y * conj_of(x0))};
    if (!satisfies_quadratic(x))
        throw domain_error("inverse_stereographic: result leaves the conjugacy variety");
    return x;
}

// Polar decomposition of g relative to x0: g_plus commutes with x0, g_minus
// is semilinear, and g = g_plus + g_minus.
template <class R>
std::pair<Matrix<R>, Matrix<R>> g_decompose(const Matrix<R>& g, const SPoint<R>& x0) {
    R delta = x0.zeta.delta();
    Matrix<R> D0 = x0.x + x0.x - Matrix<R>::identity(2 * x0.h, g.like()).scaled(x0.zeta.s);
    Matrix<R> D0inv = D0.scaled(ring_inv(delta)); // D0^2 = delta
    Matrix<R> gplus = D0inv * (g * x0.x - conj_of(x0) * g);
    Matrix<R> gminus = D0inv * (x0.x * g - g * x0.x);
    return {gplus, gminus};
}

// ---------------------------------------------------------------------------
// Valuation-side operations (truncated series coefficients).
// ---------------------------------------------------------------------------

struct StarParams {
    long long v;
    Rational r;
    bool ok;
};

inline StarParams star_params(const TSPoly& P, int h) {
    TruncSeries one = ring_one_like(P.zero_like());
    Valuation val = P.eval(one).valuation();
    long long v = val.value_or_throw();
    bool ok = (v % 2 != 0) && std::gcd(v, static_cast<long long>(h)) == 1;
    return StarParams{v, Rational(v, h), ok};
}

// Multiset of root valuations of a nonzero polynomial over the truncated
// series ring, read off the lower Newton polygon. Valuations are rational,
// returned as (num, den) pairs sorted ascending.
inline std::vector<Rational> newton_root_valuations(const TSPoly& P) {
    int d = P.deg();
    if (d < 0) throw domain_error("newton_root_valuations: zero polynomial");
    int prec = P.zero_like().precision();
    std::vector<std::pair<int, int>> pts; // (index, valuation)
    for (int i = 0; i <= d; ++i) {
        Valuation v = P.coeff(static_cast<size_t>(i)).valuation();
        if (v.exact) pts.emplace_back(i, v.v);
    }
    if (pts.empty() || pts.back().first != d)
        throw precision_error("newton polygon: leading coefficient undecided");
    // lower convex hull, left to right
    std::vector<std::pair<int, int>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull.back();
            // drop b if it lies above segment a-p
            long long lhs = static_cast<long long>(b.second - a.second) * (p.first - a.first);
            long long rhs = static_cast<long long>(p.second - a.second) * (b.first - a.first);
            if (lhs >= rhs) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    // undecided coefficients must not be able to dip below the hull
    for (int i = 0; i <= d; ++i) {
        Valuation v = P.coeff(static_cast<size_t>(i)).valuation();
        if (v.exact) continue;
        for (size_t k = 0; k + 1 < hull.size(); ++k) {
            auto& a = hull[k];
            auto& b = hull[k + 1];
            if (a.first <= i && i <= b.first) {
                // hull height at i (rational): a.second + (i-a.first)*slope
                Rational height = Rational(a.second) +
                                  Rational(static_cast<long long>(i - a.first) * (b.second - a.second),
                                           b.first - a.first);
                if (Rational(prec) < height)
                    throw precision_error("newton polygon: undecided coefficient near hull");
            }
        }
    }
    if (hull.front().first != 0) {
        // roots at valuation +infinity would mean P(0) = 0 to precision
        throw precision_error("newton polygon: constant term undecided");
    }
    std::vector<Rational> out;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        int width = hull[k + 1].first - hull[k].first;
        Rational slope(hull[k + 1].second - hull[k].second, width);
        for (int i = 0; i < width; ++i) out.push_back(-slope); // root valuation = -slope
    }
    return out;
}

// Polynomial with roots 1 - 1/lambda over the roots lambda of P; requires
// P(0) to be a unit.
inline TSPoly invert_shift_roots(const TSPoly& P) {
    if (!P.coeff(0).is_unit())
        throw domain_error("invert_shift_roots: P(0) not a unit");
    int d = P.deg();
    TruncSeries z = P.zero_like();
    TSPoly one_minus_Y(std::vector<TruncSeries>{ring_one_like(z), ring_zero_like(z) - ring_one_like(z)});
    TSPoly acc(z);
    TSPoly pw = TSPoly::constant(ring_one_like(z));
    // sum_i p_i (1-Y)^{d-i}: iterate i = d down to 0
    for (int i = d; i >= 0; --i) {
        acc = acc + pw.scaled(P.coeff(static_cast<size_t>(i)));
        if (i > 0) pw = pw * one_minus_Y;
    }
    return acc;
}

// Does Q dominate P? (every root valuation of the transformed P exceeds
// every root valuation of the transformed Q, strictly)
inline bool dominates(const TSPoly& Q, const TSPoly& P) {
    std::vector<Rational> vp = newton_root_valuations(invert_shift_roots(P));
    std::vector<Rational> vq = newton_root_valuations(invert_shift_roots(Q));
    if (vp.empty() || vq.empty()) return true;
    Rational minp = vp.front(), maxq = vq.front();
    for (const auto& v : vp)
        if (v < minp) minp = v;
    for (const auto& v : vq)
        if (maxq < v) maxq = v;
    return maxq < minp;
}

// Valuation of Res(P, Q) via the dominance shortcut
// |Res(P,Q)| = |Q(1)^{deg P} P(0)^{deg Q}|; requires Q to dominate P.
inline long long res_shortcut(const TSPoly& P, const TSPoly& Q) {
    if (!dominates(Q, P)) throw domain_error("res_shortcut: dominance fails, use full resultant");
    TruncSeries one = ring_one_like(P.zero_like());
    long long vq1 = Q.eval(one).valuation().value_or_throw();
    long long vp0 = P.coeff(0).valuation().value_or_throw();
    return P.deg() * vq1 + Q.deg() * vp0;
}

// ---------------------------------------------------------------------------
// Matched pairs with prescribed invariant valuation (h = 2, zeta = (1,0)).
// ---------------------------------------------------------------------------

struct MatchedPair {
    SPoint<TruncSeries> x0;
    SPoint<TruncSeries> x;
};

inline MatchedPair build_matched_pair(int h, long long v, const GFContext* ctx, int prec) {
    if (h != 2) throw domain_error("build_matched_pair: only h = 2 is supported");
    if (v <= 0 || v % 2 == 0) throw domain_error("build_matched_pair: v must be odd and positive");
    if (prec < v + 4) throw precision_error("build_matched_pair: precision must exceed v + 4");
    TruncSeries one = TruncSeries::from_int(ctx, prec, 1);
    TruncSeries zero(ctx, prec);
    Zeta<TruncSeries> zeta = Zeta<TruncSeries>::split_pair(one, zero);
    SPoint<TruncSeries> x0 = base_point(2, zeta);
    // y = [[0, I], [B, 0]] with B = [[0, t^v], [1, 0]]; the plus block of y^2
    // is B, generating a ramified quadratic algebra with B^2 = t^v.
    TSMatrix y = TSMatrix::zero(4, 4, zero);
    y.at(0, 2) = one;
    y.at(1, 3) = one;
    y.at(2, 1) = TruncSeries::t_power(ctx, prec, static_cast<int>(v));
    y.at(3, 0) = one;
    SPoint<TruncSeries> x = inverse_stereographic(x0, y);
    return MatchedPair{x0, x};
}

} // namespace aflw
