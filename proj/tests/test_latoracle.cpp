#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aflw/latoracle.hpp"
#include "aflw/orbside.hpp"

using namespace aflw;

namespace {

TPoly orbital_at(long long v, int q) {
    TPoly out;
    TPoly sym = orbital_poly(v);
    for (const auto& [m, c] : sym.terms()) out.add_term(m, QRatFun(c.eval_at(Rational(q))));
    return out;
}

} // namespace

TEST_CASE("joint commutant of a degenerate pair is not regular") {
    const GFContext* ctx = GFContext::prime_field(2);
    MatchedPair mp = build_matched_pair(2, 1, ctx, 16);
    CHECK_THROWS_AS(joint_commutant(mp.x0.x, mp.x0.x), domain_error);
}

TEST_CASE("joint commutant of matched pairs is a ramified quadratic") {
    for (int q : {2, 3}) {
        const GFContext* ctx = GFContext::prime_field(q);
        for (long long v : {1LL, 3LL}) {
            MatchedPair mp = build_matched_pair(2, v, ctx, static_cast<int>(v) + 14);
            CommutantAlgebra comm = joint_commutant(mp.x0.x, mp.x.x);
            CHECK(comm.free_rank == 2);
            CHECK(comm.ramified);
            CHECK(comm.vstar == v);
            CHECK((comm.beta * mp.x0.x - mp.x0.x * comm.beta).is_zero());
            CHECK((comm.beta * mp.x.x - mp.x.x * comm.beta).is_zero());
            TSMatrix I = TSMatrix::identity(4, mp.x0.x.like());
            TSMatrix res =
                comm.beta * comm.beta - comm.beta.scaled(comm.min_a) - I.scaled(comm.min_b);
            CHECK(res.is_zero());
        }
    }
}

TEST_CASE("base-class lengths: both 0 and v occur among the classes") {
    // The rescaled base Lambda_+ + Theta Lambda_+ has length 0; the raw O^4
    // sits at the mirror length v.
    const GFContext* ctx = GFContext::prime_field(2);
    long long v = 3;
    MatchedPair mp = build_matched_pair(2, v, ctx, 21);
    CommutantAlgebra comm = joint_commutant(mp.x0.x, mp.x.x);
    std::vector<StableLattice> reps = enumerate_stable_lattices(mp, comm, 5);
    bool saw_zero = false, saw_v = false;
    for (const auto& rep : reps) {
        LatticeClassStats st = lattice_stats(rep, mp, comm);
        if (st.length == 0) saw_zero = true;
        if (st.length == v) saw_v = true;
    }
    CHECK(saw_zero);
    CHECK(saw_v);
}

TEST_CASE("lattice oracle reproduces the orbital polynomial") {
    for (int q : {2, 3})
        for (long long v : {1LL, 3LL}) {
            LatticeOracleRun run = run_lattice_oracle(q, v);
            CHECK(run.weighted == orbital_at(v, q));
            for (const auto& c : run.classes) {
                CHECK(c.length >= 0);
                CHECK(c.length <= v);
                CHECK(c.plus_principal);
                CHECK(c.minus_principal);
                long long predicted = 1; // reported index vs q^max(m+, m-)
                for (long long i = 0; i < std::max(c.m_plus, c.m_minus); ++i) predicted *= q;
                CHECK(c.stab_index == predicted);
            }
        }
}

TEST_CASE("lattice oracle v=1: lengths 0 and 1 with unit stabilizer index") {
    LatticeOracleRun run = run_lattice_oracle(2, 1);
    REQUIRE(run.classes.size() == 2);
    long long l0 = run.classes[0].length, l1 = run.classes[1].length;
    CHECK(((l0 == 0 && l1 == 1) || (l0 == 1 && l1 == 0)));
    CHECK(run.classes[0].stab_index == 1);
    CHECK(run.classes[1].stab_index == 1);
}

TEST_CASE("lattice oracle v=3 q=2: the m=(1,1) class has index 2 and length 0") {
    LatticeOracleRun run = run_lattice_oracle(2, 3);
    bool found = false;
    for (const auto& c : run.classes)
        if (c.m_plus == 1 && c.m_minus == 1 && c.length == 0) {
            found = true;
            CHECK(c.stab_index == 2);
        }
    CHECK(found);
}

TEST_CASE("window robustness: enlarging the window changes nothing") {
    LatticeOracleRun a = run_lattice_oracle(2, 3);
    LatticeOracleRun b = run_lattice_oracle(2, 3, a.window + 1);
    CHECK(a.weighted == b.weighted);
    CHECK(a.classes.size() == b.classes.size());
}

TEST_CASE("undersized windows are rejected rather than silently truncated") {
    CHECK_THROWS_AS(run_lattice_oracle(2, 5, 6), domain_error); // v = 5 needs window 8
}

TEST_CASE("determinant-valuation counts match the product formula") {
    for (auto [a, Q, N] : std::vector<std::tuple<int, int, int>>{{1, 4, 3}, {1, 9, 2}, {2, 4, 2}}) {
        DetValuationCount c = count_det_valuations(a, Q, N);
        for (int n = 0; n < N; ++n)
            CHECK(c.measured[static_cast<size_t>(n)] == c.expected[static_cast<size_t>(n)]);
    }
    DetValuationCount c = count_det_valuations(1, 4, 3);
    CHECK(c.measured[0] == Rational(3, 4));
    CHECK(c.measured[1] == Rational(3, 16));
    CHECK(c.measured[2] == Rational(3, 64));
    DetValuationCount c2 = count_det_valuations(2, 4, 2);
    Rational Qr(4);
    Rational eps = (Rational(1) - 1 / Qr) * (Rational(1) - 1 / (Qr * Qr));
    CHECK(c2.measured[0] == eps);
    CHECK(c2.measured[1] == eps * (1 / Qr + 1 / (Qr * Qr)));
}

TEST_CASE("chunked determinant counting merges deterministically") {
    DetValuationCount one = count_det_valuations(2, 4, 2, 1, 1);
    DetValuationCount many = count_det_valuations(2, 4, 2, 11, 2);
    CHECK(one.measured == many.measured);
}

TEST_CASE("class statistic: totals, odd vanishing, even buckets") {
    for (int q : {2, 3}) {
        Rational qr(q);
        ClassValuationStat s = count_class_valuation_stat(q, 5);
        CHECK(s.total == Rational(1) - 1 / qr);
        auto bucket = [&](long long w) {
            auto it = s.buckets.find(w);
            return it == s.buckets.end() ? Rational(0) : it->second;
        };
        Rational even = Rational(1) - 1 / (qr * qr);
        CHECK(bucket(0) == Rational(1) - 1 / qr - 1 / (qr * qr));
        CHECK(bucket(1) == Rational(0));
        CHECK(bucket(3) == Rational(0));
        CHECK(bucket(2) == even / (qr * qr));
        CHECK(bucket(4) == even / (qr * qr * qr * qr));
    }
}
