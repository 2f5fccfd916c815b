#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aflw/orbside.hpp"

#include <algorithm>

using namespace aflw;

namespace {

QRatFun one() { return QRatFun(Rational(1)); }
QRatFun rat(long long n) { return QRatFun(Rational(n)); }

bool has_cell(const std::vector<Cell>& cs, long long a, long long b, long long c) {
    return std::any_of(cs.begin(), cs.end(),
                       [&](const Cell& x) { return x.a == a && x.b == b && x.c == c; });
}

} // namespace

TEST_CASE("cells for v = 1 and v = 3") {
    auto c1 = cells(1);
    REQUIRE(c1.size() == 1);
    CHECK(has_cell(c1, 0, 0, 0));

    auto c3 = cells(3);
    REQUIRE(c3.size() == 5);
    CHECK(has_cell(c3, 0, 0, -1));
    CHECK(has_cell(c3, 0, 0, 0));
    CHECK(has_cell(c3, 1, 0, 0));
    CHECK(has_cell(c3, 0, 1, 0));
    CHECK(has_cell(c3, 1, 1, 1));

    Cell diag{1, 1, 1};
    CHECK(diag.weight_exponent() == 1);
    CHECK(diag.length() == 0);

    CHECK_THROWS_AS(cells(2), domain_error);
}

TEST_CASE("cell constraints hold for all cells up to v = 39") {
    for (long long v = 1; v <= 39; v += 2) {
        for (const Cell& c : cells(v)) {
            CHECK(c.a >= 0);
            CHECK(c.b >= 0);
            CHECK(c.c <= std::min(c.a, c.b));
            CHECK(c.a + c.b - c.c <= (v - 1) / 2);
            CHECK(c.length() >= 0);
            CHECK(v - c.length() >= 0);
        }
    }
}

TEST_CASE("orbital polynomial for v = 1 and v = 3") {
    TPoly p1 = orbital_poly(1);
    CHECK(p1.coeff(0) == one());
    CHECK(p1.coeff(1) == one());
    CHECK(p1.degree() == 1);

    TPoly p3 = orbital_poly(3);
    QRatFun q = QRatFun::q();
    CHECK(p3.coeff(0) == one() + q);
    CHECK(p3.coeff(1) == one() + rat(2) * q);
    CHECK(p3.coeff(2) == one() + rat(2) * q);
    CHECK(p3.coeff(3) == one() + q);
}

TEST_CASE("orbital polynomial is palindromic and vanishes at T = -1") {
    for (long long v = 1; v <= 39; v += 2) {
        TPoly p = orbital_poly(v);
        CHECK(p.degree() == v);
        for (long long m = 0; m <= v; ++m) CHECK(p.coeff(m) == p.coeff(v - m));
        CHECK(p.eval_T(QRatFun(Rational(-1))).is_zero());
    }
}

TEST_CASE("cell walk agrees with the re-indexed double sum") {
    for (long long v = 1; v <= 39; v += 2) CHECK(orbital_poly(v) == orbital_poly_reindexed(v));
}

TEST_CASE("N' reference values") {
    CHECK(nprime(1) == rat(-1));
    CHECK(nprime(3) == -(QRatFun::q() + rat(2)));
    CHECK(nprime(5) == -(rat(2) * QRatFun::q_pow(2) + QRatFun::q() + rat(3)));
}

TEST_CASE("N' step recursion") {
    CHECK(nprime_step(1) == rat(-1));
    CHECK(nprime_step(3) == -(QRatFun::q() + rat(2)));
    CHECK(nprime_step(5) == -(rat(2) * QRatFun::q_pow(2) + QRatFun::q() + rat(3)));
    CHECK(nprime_step(7) ==
          -(rat(2) * QRatFun::q_pow(3) + rat(3) * QRatFun::q_pow(2) + QRatFun::q() + rat(4)));
}

TEST_CASE("statistic, closed form and step agree up to v = 39") {
    for (long long v = 1; v <= 39; v += 2) {
        QRatFun stat = dq_statistic(orbital_poly(v));
        QRatFun closed = nprime(v);
        CHECK(stat == closed);
        CHECK(closed == nprime_step(v));
    }
}

TEST_CASE("pairing identity: T^n + T^{v-n} contributes (-1)^n (2n - v)") {
    for (long long v : {5LL, 9LL}) {
        for (long long n = 0; 2 * n < v; ++n) {
            TPoly pair;
            pair.add_term(n, one());
            pair.add_term(v - n, one());
            Rational expect(2 * n - v);
            if (n % 2 != 0) expect = -expect;
            CHECK(dq_statistic(pair) == QRatFun(expect));
        }
    }
}

TEST_CASE("derivative selector") {
    CHECK(orbital_derivative(3, 2) == nprime(3));
    CHECK(orbital_derivative(3, 0).is_zero());
    CHECK_THROWS_AS(orbital_derivative(3, 1), domain_error);
}

TEST_CASE("afl_verify passes on small v") {
    for (long long v : {1LL, 3LL, 5LL, 7LL}) {
        AflReport rep = afl_verify(v);
        CHECK(rep.pass);
        CHECK(rep.diverging.empty());
        CHECK(rep.intersection == -rep.n_prime_closed);
    }
}
