#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aflw/doublestruct.hpp"

#include <random>

using namespace aflw;

namespace {

std::mt19937_64 rng(0xd0b1e5ULL);

Matrix<Rational> q_mat(int n, std::initializer_list<Rational> vals) {
    Matrix<Rational> m = Matrix<Rational>::zero(n, n, Rational(0));
    auto it = vals.begin();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = *it++;
    return m;
}

Matrix<Rational> random_invertible_q(int n) {
    std::uniform_int_distribution<int> d(-3, 3);
    while (true) {
        Matrix<Rational> g = Matrix<Rational>::zero(n, n, Rational(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.at(i, j) = Rational(d(rng));
        Matrix<Rational> gi = g;
        if (try_inverse(g, gi) == InverseStatus::ok) return g;
    }
}

TruncSeries random_ts(const GFContext* ctx, int N) {
    TruncSeries s(ctx, N);
    std::uniform_int_distribution<int> d(0, ctx->order() - 1);
    for (int i = 0; i < N; ++i) s.coeff(i) = GFElem(ctx, d(rng));
    return s;
}

TSMatrix random_invertible_ts(const GFContext* ctx, int N, int n) {
    while (true) {
        TSMatrix g = TSMatrix::zero(n, n, TruncSeries(ctx, N));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.at(i, j) = random_ts(ctx, N);
        TSMatrix gi = g;
        if (try_inverse(g, gi) == InverseStatus::ok) return g;
    }
}

template <class R, class G>
SPoint<R> random_point(const SPoint<R>& x0, G&& gen_invertible) {
    auto g = gen_invertible();
    auto gi = g;
    REQUIRE(try_inverse(g, gi) == InverseStatus::ok);
    return SPoint<R>{x0.h, x0.zeta, g * x0.x * gi};
}

template <class R>
void check_identities(const SPoint<R>& x0, const SPoint<R>& x) {
    BisectorData<R> bd = bisectors(x0, x);
    const auto& M = bd.M;
    const auto& E = bd.E;
    int n = 2 * x0.h;
    Matrix<R> I = Matrix<R>::identity(n, M.like());
    Matrix<R> deltaI = I.scaled(bd.delta);
    CHECK((M * E + E * M).is_zero());        // anticommutation
    CHECK(M * M + E * E == deltaI);          // Pythagoras
    CHECK((M + E) * (M + E) == deltaI);
    CHECK((M - E) * (M - E) == deltaI);
    Matrix<R> xs = conj_of(x);
    CHECK(M * x0.x == x.x * M);              // intertwining
    CHECK(E * x0.x == xs * E);
    Matrix<R> N = normalized_centralizer(bd);
    CHECK(N * x0.x == x0.x * N);             // centrality
    CHECK(N * x.x == x.x * N);
    Matrix<R> Minv = M;
    if (try_inverse(M, Minv) == InverseStatus::ok) {
        Matrix<R> xsharp = E * Minv;
        CHECK(xsharp * x.x == xs * xsharp);  // semilinearity in x
        CHECK(xsharp * x0.x == conj_of(x0) * xsharp);
        Matrix<R> one_minus = I - xsharp * xsharp;
        Matrix<R> inv1 = one_minus;
        REQUIRE(try_inverse(one_minus, inv1) == InverseStatus::ok);
        CHECK(inv1 == N);                    // (1 - x_#^2)^{-1} = M^2/delta
    }
}

} // namespace

TEST_CASE("base_point shapes") {
    Zeta<Rational> z10 = Zeta<Rational>::split_pair(Rational(1), Rational(0));
    SPoint<Rational> b1 = base_point(1, z10);
    CHECK(b1.x == q_mat(2, {Rational(1), Rational(0), Rational(0), Rational(0)}));
    SPoint<Rational> b2 = base_point(2, z10);
    CHECK(b2.x.at(0, 0) == Rational(1));
    CHECK(b2.x.at(1, 1) == Rational(1));
    CHECK(b2.x.at(2, 2) == Rational(0));
    CHECK(b2.x.at(3, 3) == Rational(0));
    CHECK(satisfies_quadratic(b2));

    // unramified companion: s = -1, p = 1 -> [[0,-1],[1,-1]]
    Zeta<Rational> zu = Zeta<Rational>::quadratic(Rational(-1), Rational(1));
    SPoint<Rational> bu = base_point(1, zu);
    CHECK(bu.x == q_mat(2, {Rational(0), Rational(-1), Rational(1), Rational(-1)}));
    CHECK(satisfies_quadratic(bu));

    Zeta<Rational> degenerate = Zeta<Rational>::split_pair(Rational(1), Rational(1));
    CHECK_THROWS_AS(base_point(1, degenerate), domain_error);
}

TEST_CASE("bisectors on the worked h=1 example") {
    Zeta<Rational> z = Zeta<Rational>::split_pair(Rational(1), Rational(0));
    SPoint<Rational> x0 = base_point(1, z);
    Rational half(1, 2);
    SPoint<Rational> x{1, z, q_mat(2, {half, half, half, half})};
    REQUIRE(satisfies_quadratic(x));
    BisectorData<Rational> bd = bisectors(x0, x);
    CHECK(bd.M == q_mat(2, {half, half, half, -half}));
    CHECK(bd.E == q_mat(2, {-half, half, half, half}));
    CHECK(bd.delta == Rational(1));
    check_identities(x0, x);

    Matrix<Rational> N = normalized_centralizer(bd);
    CHECK(N == Matrix<Rational>::identity(2, Rational(0)).scaled(half));
    Poly<Rational> P = invariant_polynomial(x0, x);
    CHECK(P.deg() == 1);
    CHECK(P.coeff(0) == -half); // X - 1/2

    Matrix<Rational> xs = stereographic(x0, x);
    CHECK(xs == q_mat(2, {Rational(0), Rational(-1), Rational(1), Rational(0)}));
}

TEST_CASE("bisectors on the degenerate and nilpotent-E examples") {
    Zeta<Rational> z = Zeta<Rational>::split_pair(Rational(1), Rational(0));
    SPoint<Rational> x0 = base_point(1, z);

    BisectorData<Rational> self = bisectors(x0, x0);
    CHECK(self.E.is_zero());
    CHECK(self.M * self.M == Matrix<Rational>::identity(2, Rational(0)).scaled(self.delta));
    CHECK(normalized_centralizer(self) == Matrix<Rational>::identity(2, Rational(0)));
    CHECK(stereographic(x0, x0).is_zero());
    Poly<Rational> P = invariant_polynomial(x0, x0);
    CHECK(P.coeff(0) == Rational(-1)); // X - 1

    SPoint<Rational> x{1, z, q_mat(2, {Rational(1), Rational(1), Rational(0), Rational(0)})};
    REQUIRE(satisfies_quadratic(x));
    BisectorData<Rational> bd = bisectors(x0, x);
    CHECK(bd.M == q_mat(2, {Rational(1), Rational(1), Rational(0), Rational(-1)}));
    CHECK(bd.E == q_mat(2, {Rational(0), Rational(1), Rational(0), Rational(0)}));
    CHECK(bd.M * bd.M == Matrix<Rational>::identity(2, Rational(0)));
    CHECK((bd.E * bd.E).is_zero());
    CHECK(normalized_centralizer(bd) == Matrix<Rational>::identity(2, Rational(0)));

    // x = x0^sigma has M = 0: stereographic undefined
    SPoint<Rational> xsig{1, z, conj_of(x0)};
    CHECK_THROWS_AS(stereographic(x0, xsig), domain_error);
}

TEST_CASE("inverse stereographic on the worked example and round trips") {
    Zeta<Rational> z = Zeta<Rational>::split_pair(Rational(1), Rational(0));
    SPoint<Rational> x0 = base_point(1, z);
    Matrix<Rational> y = q_mat(2, {Rational(0), Rational(-1), Rational(1), Rational(0)});
    SPoint<Rational> x = inverse_stereographic(x0, y);
    Rational half(1, 2);
    CHECK(x.x == q_mat(2, {half, half, half, half}));
    CHECK(inverse_stereographic(x0, Matrix<Rational>::zero(2, 2, Rational(0))).x == x0.x);

    // round trip on random semilinear y (block anti-diagonal in the split basis)
    std::uniform_int_distribution<int> d(-3, 3);
    int done = 0;
    while (done < 100) {
        Matrix<Rational> yy = Matrix<Rational>::zero(2, 2, Rational(0));
        yy.at(0, 1) = Rational(d(rng));
        yy.at(1, 0) = Rational(d(rng));
        REQUIRE(is_semilinear(yy, x0));
        SPoint<Rational> pt = x0;
        try {
            pt = inverse_stereographic(x0, yy);
        } catch (const domain_error&) {
            continue; // I - y singular
        }
        ++done;
        CHECK(stereographic(x0, pt) == yy);
    }
}

TEST_CASE("g-decomposition identities") {
    Zeta<Rational> z = Zeta<Rational>::split_pair(Rational(2), Rational(-1));
    SPoint<Rational> x0 = base_point(2, z);
    Matrix<Rational> I = Matrix<Rational>::identity(4, Rational(0));

    auto [ip, im] = g_decompose(I, x0);
    CHECK(ip == I);
    CHECK(im.is_zero());
    auto [xp, xm] = g_decompose(x0.x, x0);
    CHECK(xp == x0.x);
    CHECK(xm.is_zero());

    int done = 0;
    while (done < 50) {
        Matrix<Rational> g = random_invertible_q(4);
        auto [gp, gm] = g_decompose(g, x0);
        CHECK(gp + gm == g);
        CHECK(gp * x0.x == x0.x * gp);        // plus part commutes
        CHECK(gm * x0.x == conj_of(x0) * gm); // minus part is semilinear
        Matrix<Rational> gpi = gp;
        if (try_inverse(gp, gpi) != InverseStatus::ok) continue;
        Matrix<Rational> gi = g;
        REQUIRE(try_inverse(g, gi) == InverseStatus::ok);
        SPoint<Rational> x{2, z, g * x0.x * gi};
        BisectorData<Rational> bd = bisectors(x0, x);
        Matrix<Rational> Mi = bd.M;
        if (try_inverse(bd.M, Mi) != InverseStatus::ok) continue;
        ++done;
        // g (g_+^{-1} g_-) g^{-1} = -M^{-1} E at x = g x0 g^{-1}
        CHECK(g * (gpi * gm) * gi == -(Mi * bd.E));
    }
}

TEST_CASE("bisector identity battery: 200 random points over Q") {
    for (auto zeta : {Zeta<Rational>::split_pair(Rational(1), Rational(0)),
                      Zeta<Rational>::split_pair(Rational(2), Rational(-1)),
                      Zeta<Rational>::quadratic(Rational(1), Rational(1))}) {
        for (int h : {1, 2}) {
            SPoint<Rational> x0 = base_point(h, zeta);
            for (int i = 0; i < 34; ++i) {
                SPoint<Rational> x = random_point(x0, [&] { return random_invertible_q(2 * h); });
                check_identities(x0, x);
            }
        }
    }
}

TEST_CASE("bisector identity battery: 200 random points over F_q[t]/(t^N)") {
    int N = 7;
    for (int q : {2, 3, 5}) {
        const GFContext* ctx = GFContext::prime_field(q);
        TruncSeries one = TruncSeries::from_int(ctx, N, 1);
        TruncSeries zero(ctx, N);
        Zeta<TruncSeries> zeta = Zeta<TruncSeries>::split_pair(one, zero);
        for (int h : {1, 2}) {
            SPoint<TruncSeries> x0 = base_point(h, zeta);
            for (int i = 0; i < 34; ++i) {
                SPoint<TruncSeries> x =
                    random_point(x0, [&] { return random_invertible_ts(ctx, N, 2 * h); });
                check_identities(x0, x);
            }
        }
    }
}

TEST_CASE("invariant polynomial at the base point is (X-1)^h") {
    Zeta<Rational> z = Zeta<Rational>::split_pair(Rational(1), Rational(0));
    for (int h : {1, 2}) {
        SPoint<Rational> x0 = base_point(h, z);
        Poly<Rational> P = invariant_polynomial(x0, x0);
        CHECK(P.deg() == h);
        Poly<Rational> expect = Poly<Rational>::constant(Rational(1));
        Poly<Rational> xm1 =
            Poly<Rational>::identity_var(Rational(0)) - Poly<Rational>::constant(Rational(1));
        for (int i = 0; i < h; ++i) expect = expect * xm1;
        CHECK(P == expect);
    }
}

TEST_CASE("matched pairs: invariant valuations and star parameters") {
    for (int q : {2, 3}) {
        const GFContext* ctx = GFContext::prime_field(q);
        for (long long v : {1LL, 3LL, 5LL}) {
            int prec = static_cast<int>(v) + 10;
            MatchedPair mp = build_matched_pair(2, v, ctx, prec);
            TSPoly P = invariant_polynomial(mp.x0, mp.x);
            TruncSeries one = TruncSeries::from_int(ctx, prec, 1);
            CHECK(P.eval(one).valuation() == Valuation::of(static_cast<int>(v)));
            CHECK(P.coeff(0).valuation() == Valuation::of(0)); // unit constant term
            StarParams sp = star_params(P, 2);
            CHECK(sp.v == v);
            CHECK(sp.ok);
            CHECK(sp.r == Rational(v, 2));
        }
    }
    CHECK_THROWS_AS(build_matched_pair(2, 2, GFContext::prime_field(2), 16), domain_error);
}

TEST_CASE("star params: parity, coprimality, precision") {
    const GFContext* ctx = GFContext::prime_field(2);
    int N = 10;
    TruncSeries one = TruncSeries::from_int(ctx, N, 1);
    TSPoly X = TSPoly::identity_var(TruncSeries(ctx, N));
    TSPoly Peven = X - TSPoly::constant(one + TruncSeries::t_power(ctx, N, 2));
    CHECK(!star_params(Peven, 1).ok);
    TSPoly P3 = X - TSPoly::constant(one + TruncSeries::t_power(ctx, N, 3));
    CHECK(!star_params(P3, 3).ok); // gcd(3,3) = 3
    CHECK(star_params(P3, 2).ok);
    // P(1) = 0 at precision: undecidable
    int low = 4;
    TSPoly Plow = TSPoly::identity_var(TruncSeries(ctx, low)) -
                  TSPoly::constant(TruncSeries::from_int(ctx, low, 1) +
                                   TruncSeries(ctx, low)); // root exactly 1 mod t^4
    CHECK_THROWS_AS(star_params(Plow, 2), precision_error);
}

TEST_CASE("res_shortcut on the worked examples") {
    const GFContext* ctx = GFContext::prime_field(3);
    int N = 12;
    TruncSeries one = TruncSeries::from_int(ctx, N, 1);
    TSPoly X = TSPoly::identity_var(TruncSeries(ctx, N));
    TSPoly P = X - TSPoly::constant(one + TruncSeries::t_power(ctx, N, 3));
    TSPoly Q = X - TSPoly::constant(one + TruncSeries::t_power(ctx, N, 1));
    CHECK(dominates(Q, P)); // root valuations: 3 > 1
    CHECK(!dominates(P, Q));
    CHECK(res_shortcut(P, Q) == 1);
    CHECK(resultant(P, Q).valuation() == Valuation::of(1));

    // unit-root side: Q = X - 2, v(1 - 1/2) = 0
    TSPoly Q2 = X - TSPoly::constant(TruncSeries::from_int(ctx, N, 2));
    CHECK(res_shortcut(P, Q2) == 0);
    CHECK(resultant(P, Q2).valuation() == Valuation::of(0));

    CHECK_THROWS_AS(res_shortcut(P, P), domain_error); // dominance is strict
}

TEST_CASE("res_shortcut equals brute resultant valuation on 50 dominating pairs") {
    int done = 0;
    std::uniform_int_distribution<int> degd(1, 2);
    while (done < 50) {
        int q = (done % 2 == 0) ? 2 : 3;
        const GFContext* ctx = GFContext::prime_field(q);
        int N = 14;
        TruncSeries one = TruncSeries::from_int(ctx, N, 1);
        TSPoly X = TSPoly::identity_var(TruncSeries(ctx, N));
        std::uniform_int_distribution<int> high(3, 4), low(1, 2), coeffd(0, q - 1);
        auto make_poly = [&](bool dominated) {
            int deg = degd(rng);
            TSPoly acc = TSPoly::constant(one);
            for (int i = 0; i < deg; ++i) {
                int val = dominated ? high(rng) : low(rng);
                TruncSeries bump(ctx, N);
                bump.coeff(val + 1) = GFElem(ctx, coeffd(rng));
                TruncSeries root = one + TruncSeries::t_power(ctx, N, val) + bump;
                acc = acc * (X - TSPoly::constant(root));
            }
            return acc;
        };
        TSPoly P = make_poly(true), Q = make_poly(false);
        if (!dominates(Q, P)) continue;
        ++done;
        long long direct = resultant(P, Q).valuation().value_or_throw();
        CHECK(res_shortcut(P, Q) == direct);
    }
}
