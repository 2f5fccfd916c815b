#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aflw/qratfun.hpp"
#include "aflw/tpoly.hpp"
#include "aflw/zratfun.hpp"

#include <random>

using namespace aflw;

namespace {

QRatFun qv() { return QRatFun::q(); }
QRatFun one() { return QRatFun(Rational(1)); }

std::mt19937_64 rng(0xab5e11ULL);

QPoly random_qpoly(int max_deg, bool nonzero = false) {
    std::uniform_int_distribution<int> degd(0, max_deg), cd(-4, 4);
    while (true) {
        int d = degd(rng);
        std::vector<Rational> cs;
        for (int i = 0; i <= d; ++i) cs.emplace_back(cd(rng));
        QPoly p{std::move(cs)};
        if (!nonzero || !p.is_zero()) return p;
    }
}

QRatFun random_qratfun(int max_deg = 3) {
    return QRatFun(random_qpoly(max_deg), random_qpoly(max_deg, true));
}

ZRatFun random_zratfun() {
    auto zp = [&](bool nonzero) {
        std::uniform_int_distribution<int> degd(0, 2);
        while (true) {
            int d = degd(rng);
            std::vector<QRatFun> cs;
            for (int i = 0; i <= d; ++i) cs.push_back(random_qratfun(2));
            ZPoly p{std::move(cs)};
            if (!nonzero || !p.is_zero()) return p;
        }
    };
    return ZRatFun(zp(false), zp(true));
}

} // namespace

TEST_CASE("geometric factorization (1-q^-4)/(1-q^-2) = 1+q^-2") {
    QRatFun lhs = (one() - QRatFun::q_pow(-4)) / (one() - QRatFun::q_pow(-2));
    QRatFun rhs = one() + QRatFun::q_pow(-2);
    CHECK(lhs == rhs);
}

TEST_CASE("(q-1)/(q-1) = 1") {
    QRatFun d = qv() - one();
    CHECK(d / d == one());
}

TEST_CASE("prod_{i=1}^{1} (1-q^{1-2i})/(1-q^{-2i}) = 1/(1+q^-1)") {
    QRatFun lhs = (one() - QRatFun::q_pow(-1)) / (one() - QRatFun::q_pow(-2));
    QRatFun rhs = one() / (one() + QRatFun::q_pow(-1));
    CHECK(lhs == rhs);
}

TEST_CASE("division by zero is rejected") {
    CHECK_THROWS_AS(one() / QRatFun(), division_by_zero);
}

TEST_CASE("canonical form idempotence on random rational functions") {
    for (int i = 0; i < 200; ++i) {
        QRatFun f = random_qratfun();
        QRatFun g(f.num(), f.den()); // renormalize an already canonical value
        CHECK(f == g);
        CHECK(f.den().lead() == Rational(1));
        CHECK(qpoly_gcd(f.num(), f.den()).deg() <= 0);
    }
}

TEST_CASE("field laws on random inputs") {
    for (int i = 0; i < 200; ++i) {
        QRatFun a = random_qratfun(), b = random_qratfun();
        if (b.is_zero()) continue;
        CHECK((a / b) * b == a);
        QRatFun c = random_qratfun();
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("substitute_Z: removable singularity (1-Z^2)/(1-Z) at Z=1") {
    ZRatFun Z = ZRatFun::Z();
    ZRatFun f = (ZRatFun(Rational(1)) - Z * Z) / (ZRatFun(Rational(1)) - Z);
    CHECK(substitute_Z(f, 0) == QRatFun(Rational(2)));
}

TEST_CASE("substitute_Z: (1 - Z^{-1})/(Z - 1) at Z=1 equals 1") {
    // the C(1,0) pattern at ceil(r/2) = 2: value ceil(r/2) - 1 = 1
    ZRatFun Z = ZRatFun::Z();
    ZRatFun f = (ZRatFun(Rational(1)) - ZRatFun::Z_pow(-1)) / (Z - ZRatFun(Rational(1)));
    CHECK(substitute_Z(f, 0) == one());
}

TEST_CASE("substitute_Z: genuine pole raises") {
    ZRatFun f = ZRatFun(Rational(1)) / (ZRatFun(Rational(1)) - ZRatFun::Z());
    CHECK_THROWS_AS(substitute_Z(f, 0), pole_error);
}

TEST_CASE("substitute_Z commutes with arithmetic when defined") {
    for (int i = 0; i < 60; ++i) {
        ZRatFun f = random_zratfun(), g = random_zratfun();
        for (long long k : {-2, 0, 1, 3}) {
            QRatFun fv, gv;
            try {
                fv = substitute_Z(f, k);
                gv = substitute_Z(g, k);
            } catch (const pole_error&) {
                continue;
            }
            CHECK(substitute_Z(f + g, k) == fv + gv);
            CHECK(substitute_Z(f * g, k) == fv * gv);
        }
    }
}

TEST_CASE("scale_Z composes with evaluation") {
    for (int i = 0; i < 40; ++i) {
        ZRatFun f = random_zratfun();
        QRatFun c = QRatFun::q_pow(-2);
        try {
            QRatFun left = substitute_Z(f.scale_Z(c), 4);  // f(q^{-2} q^4) = f(q^2)
            QRatFun right = substitute_Z(f, 2);
            CHECK(left == right);
        } catch (const pole_error&) {
        }
    }
}

TEST_CASE("dq_statistic basics") {
    TPoly p;
    p.add_term(0, one());
    p.add_term(1, one());
    CHECK(dq_statistic(p) == -one());

    TPoly t2;
    t2.add_term(2, one());
    CHECK(dq_statistic(t2) == QRatFun(Rational(2)));
}

TEST_CASE("dq_statistic of (1+T+T^2+T^3) + q(1+2T+2T^2+T^3) = -2-q") {
    TPoly p;
    for (int m : {0, 1, 2, 3}) p.add_term(m, one());
    QRatFun q = qv();
    p.add_term(0, q);
    p.add_term(1, q * QRatFun(Rational(2)));
    p.add_term(2, q * QRatFun(Rational(2)));
    p.add_term(3, q);
    CHECK(dq_statistic(p) == -(QRatFun(Rational(2)) + q));
}

TEST_CASE("dq_statistic is linear") {
    std::uniform_int_distribution<int> ed(0, 7);
    for (int i = 0; i < 50; ++i) {
        TPoly a, b;
        for (int t = 0; t < 4; ++t) {
            a.add_term(ed(rng), random_qratfun(2));
            b.add_term(ed(rng), random_qratfun(2));
        }
        CHECK(dq_statistic(a + b) == dq_statistic(a) + dq_statistic(b));
        QRatFun s = random_qratfun(2);
        CHECK(dq_statistic(a.scaled(s)) == dq_statistic(a) * s);
    }
}

TEST_CASE("pairing identity for palindromic polynomials of odd degree") {
    // For palindromic P of odd degree n, the statistic equals the sum over
    // exponent pairs (m, n-m), m < n-m, of c_m * (-1)^m * (2m - n).
    std::uniform_int_distribution<int> nd(0, 3);
    for (int i = 0; i < 60; ++i) {
        long long n = 2 * nd(rng) + 1;
        TPoly p;
        QRatFun expected;
        for (long long m = 0; 2 * m < n; ++m) {
            QRatFun c = random_qratfun(2);
            p.add_term(m, c);
            p.add_term(n - m, c);
            Rational w(2 * m - n);
            if (m % 2 != 0) w = -w;
            expected += c * QRatFun(w);
        }
        CHECK(dq_statistic(p) == expected);
    }
}

TEST_CASE("negative T exponents are rejected") {
    TPoly p;
    CHECK_THROWS_AS(p.add_term(-1, one()), domain_error);
}

TEST_CASE("canonical string form") {
    CHECK((qv() + QRatFun(Rational(2))).to_string() == "q + 2");
    QRatFun f = (one() - QRatFun::q_pow(-4)) / (one() - QRatFun::q_pow(-2));
    CHECK(f.to_string() == "(q^2 + 1) / (q^2)");
    CHECK(QRatFun().to_string() == "0");
    QRatFun neg = QRatFun(Rational(-2)) * qv() * qv() + one();
    CHECK(neg.to_string() == "-2*q^2 + 1");
}

TEST_CASE("polynomial-in-q flag") {
    CHECK((qv() + one()).is_polynomial_in_q());
    CHECK(!(one() / (qv() + one())).is_polynomial_in_q());
    QRatFun f = (qv() * qv() - one()) / (qv() - one());
    CHECK(f.is_polynomial_in_q()); // cancels to q + 1
    CHECK(f.as_polynomial().deg() == 1);
}

TEST_CASE("numeric evaluation") {
    QRatFun f = (qv() + QRatFun(Rational(2))) / qv();
    CHECK(f.eval_at(Rational(2)) == Rational(2));
    CHECK_THROWS_AS((one() / qv()).eval_at(Rational(0)), pole_error);
}
