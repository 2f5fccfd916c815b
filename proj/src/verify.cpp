#include "aflw/verify.hpp"

#include "aflw/geomside.hpp"
#include "aflw/latoracle.hpp"
#include "aflw/orbside.hpp"

#include <atomic>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace aflw {

namespace {

struct Tally {
    long long done = 0;
    long long failed = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what) {
        ++done;
        if (!ok) {
            ++failed;
            if (first_failure.empty()) first_failure = what;
        }
    }

    CheckResult result(const std::string& name) const {
        CheckResult r;
        r.name = name;
        r.pass = failed == 0 && done > 0;
        std::ostringstream os;
        os << done - failed << "/" << done << " assertions";
        if (failed > 0) os << "; first failure: " << first_failure;
        r.detail = os.str();
        return r;
    }
};

template <class R, class Rng, class Gen>
void identity_battery(Tally& t, const SPoint<R>& x0, int points, Rng& rng, Gen&& gen_invertible) {
    (void)rng;
    int n = 2 * x0.h;
    for (int it = 0; it < points; ++it) {
        auto g = gen_invertible();
        auto gi = g;
        if (try_inverse(g, gi) != InverseStatus::ok) continue;
        SPoint<R> x{x0.h, x0.zeta, g * x0.x * gi};
        BisectorData<R> bd = bisectors(x0, x);
        const auto& M = bd.M;
        const auto& E = bd.E;
        Matrix<R> I = Matrix<R>::identity(n, M.like());
        Matrix<R> deltaI = I.scaled(bd.delta);
        t.expect((M * E + E * M).is_zero(), "anticommutation");
        t.expect(M * M + E * E == deltaI, "pythagoras");
        t.expect((M + E) * (M + E) == deltaI, "(M+E)^2");
        t.expect((M - E) * (M - E) == deltaI, "(M-E)^2");
        Matrix<R> xs = conj_of(x);
        t.expect(M * x0.x == x.x * M, "M intertwines");
        t.expect(E * x0.x == xs * E, "E intertwines");
        Matrix<R> N = normalized_centralizer(bd);
        t.expect(N * x0.x == x0.x * N, "centrality vs x0");
        t.expect(N * x.x == x.x * N, "centrality vs x");
        Matrix<R> Minv = M;
        if (try_inverse(M, Minv) == InverseStatus::ok) {
            Matrix<R> xsharp = E * Minv;
            t.expect(xsharp * x.x == xs * xsharp, "stereographic semilinearity (x)");
            t.expect(xsharp * x0.x == conj_of(x0) * xsharp, "stereographic semilinearity (x0)");
            Matrix<R> one_minus = I - xsharp * xsharp;
            Matrix<R> inv1 = one_minus;
            if (try_inverse(one_minus, inv1) == InverseStatus::ok)
                t.expect(inv1 == N, "(1 - x_#^2)^{-1} = M^2/delta");
        }
        // g-decomposition
        auto [gp, gm] = g_decompose(g, x0);
        t.expect(gp + gm == g, "g = g+ + g-");
        t.expect(gp * x0.x == x0.x * gp, "g+ commutes");
        Matrix<R> gpi = gp;
        if (try_inverse(gp, gpi) == InverseStatus::ok &&
            try_inverse(M, Minv) == InverseStatus::ok) {
            t.expect(g * (gpi * gm) * gi == -(Minv * E), "conjugated polar coordinate");
        }
    }
}

} // namespace

std::vector<CheckResult> run_identities_suite(int points_per_ring, int shortcut_pairs) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(0x1de57ULL);
    {
        Tally t;
        std::uniform_int_distribution<int> d(-3, 3);
        for (auto zeta : {Zeta<Rational>::split_pair(Rational(1), Rational(0)),
                          Zeta<Rational>::split_pair(Rational(2), Rational(-1)),
                          Zeta<Rational>::quadratic(Rational(1), Rational(1))}) {
            for (int h : {1, 2}) {
                SPoint<Rational> x0 = base_point(h, zeta);
                int points = points_per_ring / 6 + 1;
                identity_battery(t, x0, points, rng, [&] {
                    while (true) {
                        Matrix<Rational> g = Matrix<Rational>::zero(2 * h, 2 * h, Rational(0));
                        for (int i = 0; i < 2 * h; ++i)
                            for (int j = 0; j < 2 * h; ++j) g.at(i, j) = Rational(d(rng));
                        Matrix<Rational> gi = g;
                        if (try_inverse(g, gi) == InverseStatus::ok) return g;
                    }
                });
            }
        }
        out.push_back(t.result("double-structure identities over Q"));
    }
    for (int q : {2, 3, 5}) {
        Tally t;
        const GFContext* ctx = GFContext::prime_field(q);
        int N = 7;
        std::uniform_int_distribution<int> d(0, q - 1);
        TruncSeries one = TruncSeries::from_int(ctx, N, 1);
        Zeta<TruncSeries> zeta = Zeta<TruncSeries>::split_pair(one, TruncSeries(ctx, N));
        for (int h : {1, 2}) {
            SPoint<TruncSeries> x0 = base_point(h, zeta);
            int points = points_per_ring / 2 + 1;
            identity_battery(t, x0, points, rng, [&] {
                while (true) {
                    TSMatrix g = TSMatrix::zero(2 * h, 2 * h, TruncSeries(ctx, N));
                    for (int i = 0; i < 2 * h; ++i)
                        for (int j = 0; j < 2 * h; ++j) {
                            TruncSeries s(ctx, N);
                            for (int k = 0; k < N; ++k) s.coeff(k) = GFElem(ctx, d(rng));
                            g.at(i, j) = s;
                        }
                    TSMatrix gi = g;
                    if (try_inverse(g, gi) == InverseStatus::ok) return g;
                }
            });
        }
        out.push_back(t.result("double-structure identities over F_" + std::to_string(q) +
                               "[t]/(t^7)"));
    }
    {
        Tally t;
        std::uniform_int_distribution<int> degd(1, 2);
        int done = 0;
        while (done < shortcut_pairs) {
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
                    acc = acc * (X - TSPoly::constant(one + TruncSeries::t_power(ctx, N, val) + bump));
                }
                return acc;
            };
            TSPoly P = make_poly(true), Q = make_poly(false);
            if (!dominates(Q, P)) continue;
            ++done;
            long long direct = resultant(P, Q).valuation().value_or_throw();
            t.expect(res_shortcut(P, Q) == direct, "shortcut equals brute valuation");
        }
        out.push_back(t.result("resultant dominance shortcut vs brute valuation"));
    }
    // matched pairs: invariant valuations per the construction
    {
        Tally t;
        for (int q : {2, 3})
            for (long long v : {1LL, 3LL, 5LL}) {
                const GFContext* ctx = GFContext::prime_field(q);
                MatchedPair mp = build_matched_pair(2, v, ctx, static_cast<int>(v) + 10);
                TSPoly P = invariant_polynomial(mp.x0, mp.x);
                TruncSeries one = ring_one_like(P.zero_like());
                Valuation v1 = P.eval(one).valuation();
                t.expect(v1.exact && v1.v == v, "v(P(1)) = v");
                Valuation v0 = P.coeff(0).valuation();
                t.expect(v0.exact && v0.v == 0, "v(P(0)) = 0");
                StarParams sp = star_params(P, 2);
                t.expect(sp.ok && sp.v == v, "(*) holds");
            }
        out.push_back(t.result("matched pairs: prescribed invariant valuations"));
    }
    return out;
}

std::vector<CheckResult> run_geometry_suite(long long vmax) {
    std::vector<CheckResult> out;
    {
        Tally t;
        t.expect(intersection_number(2, 1) == QRatFun(Rational(1)), "N(1/2) = 1");
        t.expect(intersection_number(2, 3) == QRatFun::q() + QRatFun(Rational(2)), "N(3/2) = q+2");
        t.expect(N_closed(1) == QRatFun(Rational(1)), "closed N(1/2)");
        t.expect(N_closed(3) == QRatFun::q() + QRatFun(Rational(2)), "closed N(3/2)");
        out.push_back(t.result("reference values N(1/2) = 1, N(3/2) = q + 2"));
    }
    {
        Tally t;
        for (long long v = 1; v <= vmax; v += 2) {
            QRatFun pipeline = intersection_number(2, v);
            QRatFun closed = N_closed(v);
            QRatFun stepped = N_step(v);
            t.expect(pipeline == closed, "pipeline = closed @v=" + std::to_string(v));
            t.expect(closed == stepped, "closed = step @v=" + std::to_string(v));
            bool poly = closed.is_polynomial_in_q();
            t.expect(poly, "polynomial @v=" + std::to_string(v));
            if (poly) {
                QPoly p = closed.as_polynomial();
                t.expect(p.deg() == (v - 1) / 2, "degree @v=" + std::to_string(v));
                bool nonneg = true;
                for (int i = 0; i <= p.deg(); ++i) {
                    Rational c = p.coeff(static_cast<size_t>(i));
                    if (den(c) != 1 || num(c) < 0) nonneg = false;
                }
                t.expect(nonneg, "coefficients @v=" + std::to_string(v));
            }
        }
        out.push_back(t.result("triple route agreement, odd v <= " + std::to_string(vmax)));
    }
    {
        Tally t;
        for (auto [h, v] : std::vector<std::pair<int, long long>>{{2, 3}, {2, 7}, {3, 5}}) {
            GeomContext ctx{GeomParams(h, v)};
            for (int n = 1; n <= h; ++n)
                for (long long m = n; m <= h + 2; ++m)
                    t.expect(ctx.recursion_consistent(n, m),
                             "consistency n=" + std::to_string(n) + " m=" + std::to_string(m));
        }
        out.push_back(t.result("recursion consistency identity"));
    }
    {
        Tally t;
        for (long long v = 1; v <= std::min<long long>(vmax, 13); v += 2) {
            GeomContext ctx{GeomParams(2, v)};
            QRatFun line =
                QRatFun::q_pow(2 * v) * ctx.A_eval(2, 0) +
                QRatFun::q_pow(v) * ctx.A_eval(1, 0) * (ctx.B_val(1) + ctx.C_eval(1, 0)) +
                ctx.B_val(2) + ctx.C_eval(1, -1) * ctx.B_val(1) + ctx.C_eval(2, 0);
            t.expect(line == ctx.intersection_number(), "assembly @v=" + std::to_string(v));
        }
        out.push_back(t.result("two-block assembly identity"));
    }
    return out;
}

std::vector<CheckResult> run_orbital_suite(long long vmax) {
    std::vector<CheckResult> out;
    Tally agree, shape;
    for (long long v = 1; v <= vmax; v += 2) {
        TPoly orb = orbital_poly(v);
        QRatFun stat = dq_statistic(orb);
        QRatFun closed = nprime(v);
        agree.expect(stat == closed, "stat = closed @v=" + std::to_string(v));
        agree.expect(closed == nprime_step(v), "closed = step @v=" + std::to_string(v));
        shape.expect(orb.degree() == v, "degree @v=" + std::to_string(v));
        bool palin = true;
        for (long long m = 0; m <= v; ++m)
            if (!(orb.coeff(m) == orb.coeff(v - m))) palin = false;
        shape.expect(palin, "palindromy @v=" + std::to_string(v));
        shape.expect(orb.eval_T(QRatFun(Rational(-1))).is_zero(),
                     "vanishing at T=-1 @v=" + std::to_string(v));
        shape.expect(orb == orbital_poly_reindexed(v), "re-indexed sum @v=" + std::to_string(v));
    }
    out.push_back(agree.result("N' routes agree, odd v <= " + std::to_string(vmax)));
    out.push_back(shape.result("orbital polynomial shape, odd v <= " + std::to_string(vmax)));
    return out;
}

std::vector<CheckResult> run_afl_suite(long long vmax) {
    Tally t;
    for (long long v = 1; v <= vmax; v += 2) {
        AflReport rep = afl_verify(v);
        t.expect(rep.pass, "v=" + std::to_string(v) +
                               (rep.pass ? "" : " diverging: " + rep.diverging));
    }
    std::vector<CheckResult> out;
    out.push_back(t.result("linear AFL identity N = -N', odd v <= " + std::to_string(vmax)));
    return out;
}

std::vector<CheckResult> run_oracle_suite(int jobs) {
    // independent cases, merged in a fixed order regardless of scheduling
    std::vector<std::function<CheckResult()>> cases;

    auto lattice_case = [](int q, long long v, int window) {
        return [q, v, window]() {
            Tally t;
            LatticeOracleRun run = run_lattice_oracle(q, v, window);
            TPoly expect;
            {
                TPoly sym = orbital_poly(v);
                for (const auto& [m, c] : sym.terms())
                    expect.add_term(m, QRatFun(c.eval_at(Rational(q))));
            }
            t.expect(run.weighted == expect, "weighted class sum equals the orbital polynomial");
            for (const auto& cls : run.classes) {
                t.expect(cls.length >= 0 && cls.length <= v, "length in range");
                t.expect(cls.plus_principal && cls.minus_principal,
                         "components principal over their detected orders");
            }
            std::ostringstream name;
            name << "lattice oracle q=" << q << " v=" << v;
            if (window > 0) name << " window=" << window;
            return t.result(name.str());
        };
    };
    for (int q : {2, 3})
        for (long long v : {1LL, 3LL}) cases.push_back(lattice_case(q, v, 0));
    // window robustness: same answer with an enlarged window
    cases.push_back([]() {
        Tally t;
        LatticeOracleRun a = run_lattice_oracle(2, 3, 0);
        LatticeOracleRun b = run_lattice_oracle(2, 3, a.window + 1);
        t.expect(a.weighted == b.weighted, "weighted sums agree");
        t.expect(a.classes.size() == b.classes.size(), "class counts agree");
        return t.result("lattice oracle window robustness (q=2, v=3)");
    });

    for (auto [a, Q, N] : std::vector<std::tuple<int, int, int>>{{1, 4, 3}, {1, 9, 3}, {2, 4, 2}}) {
        cases.push_back([a, Q, N]() {
            Tally t;
            DetValuationCount c = count_det_valuations(a, Q, N, 7, 2);
            for (int n = 0; n < N; ++n)
                t.expect(c.measured[static_cast<size_t>(n)] == c.expected[static_cast<size_t>(n)],
                         "n=" + std::to_string(n));
            DetValuationCount c1 = count_det_valuations(a, Q, N, 1, 1);
            t.expect(c1.measured == c.measured, "chunked merge determinism");
            std::ostringstream name;
            name << "determinant-valuation counts a=" << a << " Q=" << Q << " N=" << N;
            return t.result(name.str());
        });
    }

    for (int q : {2, 3}) {
        cases.push_back([q]() {
            Tally t;
            Rational qr(q);
            ClassValuationStat s3 = count_class_valuation_stat(q, 3);
            t.expect(s3.total == Rational(1) - Rational(1) / qr, "total mass at N=3");
            Rational even2 = (Rational(1) - Rational(1) / (qr * qr)) / (qr * qr);
            auto bucket = [](const ClassValuationStat& s, long long w) {
                auto it = s.buckets.find(w);
                return it == s.buckets.end() ? Rational(0) : it->second;
            };
            t.expect(bucket(s3, 2) == even2, "Vol_2 at N=3");
            t.expect(bucket(s3, 1) == Rational(0), "odd bucket 1 vanishes");
            // N = 5 resolves the w = 4 bucket exactly
            ClassValuationStat s5 = count_class_valuation_stat(q, 5);
            Rational even4 = (Rational(1) - Rational(1) / (qr * qr)) / (qr * qr * qr * qr);
            t.expect(bucket(s5, 2) == even2, "Vol_2 at N=5");
            t.expect(bucket(s5, 4) == even4, "Vol_4 at N=5");
            t.expect(bucket(s5, 1) == Rational(0) && bucket(s5, 3) == Rational(0),
                     "odd buckets vanish at N=5");
            t.expect(s5.total == Rational(1) - Rational(1) / qr, "total mass at N=5");
            return t.result("class valuation statistic q=" + std::to_string(q));
        });
    }

    std::vector<CheckResult> results(cases.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < cases.size(); ++i) results[i] = cases[i]();
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= cases.size()) return;
                    results[i] = cases[i]();
                }
            });
        for (auto& th : pool) th.join();
    }
    return results;
}

std::vector<CheckResult> run_h3_smoke() {
    Tally t;
    for (long long v : {1LL, 5LL}) {
        try {
            QRatFun val = intersection_number(3, v);
            t.expect(true, "completed");
            if (v == 1) t.expect(val == QRatFun(Rational(1)), "h=3 v=1 value");
        } catch (const pole_error& e) {
            t.expect(false, std::string("pole: ") + e.what());
        }
    }
    std::vector<CheckResult> out;
    out.push_back(t.result("h=3 smoke (v = 1, 5): all poles cancel"));
    return out;
}

} // namespace aflw
