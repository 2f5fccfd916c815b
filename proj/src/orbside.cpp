#include "aflw/orbside.hpp"

#include "aflw/geomside.hpp"

namespace aflw {

std::vector<Cell> cells(long long v) {
    if (v <= 0 || v % 2 == 0) throw domain_error("cells: v must be odd and positive");
    long long lim = (v - 1) / 2;
    std::vector<Cell> out;
    for (long long a = 0; a <= lim; ++a)
        for (long long b = 0; b <= lim; ++b)
            for (long long c = a + b - lim; c <= std::min(a, b); ++c) {
                Cell cell{a, b, c};
                if (cell.length() < 0 || v - cell.length() < 0)
                    throw domain_error("cells: negative exponent (bad cell)");
                out.push_back(cell);
            }
    return out;
}

TPoly orbital_poly(long long v) {
    TPoly p;
    for (const Cell& cell : cells(v)) {
        QRatFun w = QRatFun::q_pow(cell.weight_exponent());
        p.add_term(cell.length(), w);
        p.add_term(v - cell.length(), w);
    }
    return p;
}

TPoly orbital_poly_reindexed(long long v) {
    if (v <= 0 || v % 2 == 0) throw domain_error("orbital_poly_reindexed: v must be odd");
    long long lim = (v - 1) / 2;
    TPoly p;
    for (long long l = 0; l <= lim; ++l) {
        QRatFun ql = QRatFun::q_pow(l);
        for (long long c = l - lim; c <= -1; ++c) {
            // a + b = l, a,b >= 0: l + 1 pairs
            QRatFun w = ql * QRatFun(Rational(l + 1));
            p.add_term(l - 2 * c, w);
            p.add_term(v - l + 2 * c, w);
        }
        for (long long c = 0; c <= l; ++c) {
            // a + b = l + c with a,b >= c: l - c + 1 pairs
            QRatFun w = ql * QRatFun(Rational(l - c + 1));
            p.add_term(l - c, w);
            p.add_term(v - l + c, w);
        }
    }
    return p;
}

QRatFun nprime(long long v) {
    if (v <= 0 || v % 2 == 0) throw domain_error("nprime: v must be odd and positive");
    Rational r(v, 2);
    QRatFun acc;
    for (long long l = 0; l <= (v - 1) / 2; ++l) {
        Rational sign = l % 2 == 0 ? Rational(1) : Rational(-1);
        Rational coeff = sign * (Rational(l) - r) / 2 - (Rational(1) + r) / 2;
        acc += QRatFun(coeff) * QRatFun::q_pow(l);
    }
    return acc;
}

namespace {

// N'(r+2) - N'(r) for r = v/2.
QRatFun nprime_step_once(long long v) {
    QRatFun two(Rational(2));
    QRatFun one(Rational(1));
    QRatFun den = one - QRatFun::q_pow(2);
    if (v % 4 == 1) {
        // 2r == 1 mod 4: -(2(1-q^{r+3/2})/(1-q^2) + (r/2+7/4)q^{r+3/2} + (r/2+3/4)q^{r+1/2})
        return -(two * (one - QRatFun::q_pow((v + 3) / 2)) / den +
                 QRatFun(Rational(v + 7, 4)) * QRatFun::q_pow((v + 3) / 2) +
                 QRatFun(Rational(v + 3, 4)) * QRatFun::q_pow((v + 1) / 2));
    }
    // 2r == 3 mod 4
    return -(two * (one - QRatFun::q_pow((v + 1) / 2)) / den +
             QRatFun(Rational(v + 9, 4)) * QRatFun::q_pow((v + 1) / 2) +
             QRatFun(Rational(v + 5, 4)) * QRatFun::q_pow((v + 3) / 2));
}

} // namespace

QRatFun nprime_step(long long v) {
    if (v <= 0 || v % 2 == 0) throw domain_error("nprime_step: v must be odd and positive");
    if (v == 1) return QRatFun(Rational(-1));
    if (v == 3) return -(QRatFun::q() + QRatFun(Rational(2)));
    return nprime_step(v - 4) + nprime_step_once(v - 4);
}

QRatFun orbital_derivative(long long v, int k) {
    if (k == 2) return dq_statistic(orbital_poly(v));
    if (k == 0) return QRatFun(); // integral independent of s; derivative vanishes
    throw domain_error("orbital_derivative: only k = 0 and k = 2 occur");
}

AflReport afl_verify(long long v) {
    AflReport rep;
    rep.v = v;
    rep.intersection = intersection_number(2, v);
    rep.n_closed = N_closed(v);
    rep.n_step = N_step(v);
    TPoly orb = orbital_poly(v);
    rep.n_prime_stat = dq_statistic(orb);
    rep.n_prime_closed = nprime(v);
    rep.n_prime_step = nprime_step(v);
    rep.pass = true;
    if (rep.intersection != rep.n_closed) {
        rep.pass = false;
        rep.diverging = "intersection pipeline vs closed form";
    } else if (rep.n_closed != rep.n_step) {
        rep.pass = false;
        rep.diverging = "closed form vs step recursion";
    } else if (rep.n_prime_stat != rep.n_prime_closed) {
        rep.pass = false;
        rep.diverging = "orbital statistic vs closed N'";
    } else if (rep.n_prime_closed != rep.n_prime_step) {
        rep.pass = false;
        rep.diverging = "closed N' vs step N'";
    } else if (rep.intersection != -rep.n_prime_closed) {
        rep.pass = false;
        rep.diverging = "linear AFL identity N = -N'";
    } else if (orb != orbital_poly_reindexed(v)) {
        rep.pass = false;
        rep.diverging = "cell walk vs re-indexed double sum";
    }
    return rep;
}

} // namespace aflw
