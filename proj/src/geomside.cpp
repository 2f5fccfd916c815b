#include "aflw/geomside.hpp"

#include <numeric>

namespace aflw {

namespace {

QRatFun one() { return QRatFun(Rational(1)); }

} // namespace

GeomParams::GeomParams(int h_, long long v_) : h(h_), v(v_) {
    if (h <= 0 || v <= 0) throw domain_error("GeomParams: h and v must be positive");
    if (v % 2 == 0) throw domain_error("condition (*) violated: v must be odd");
    if (std::gcd(v, static_cast<long long>(h)) != 1)
        throw domain_error("condition (*) violated: v must be coprime to h");
}

QRatFun epsilon(EpsilonKind kind, int n) {
    QRatFun acc = one();
    for (int i = 1; i <= n; ++i) {
        long long e = kind == EpsilonKind::F ? -i : -2LL * i;
        acc *= one() - QRatFun::q_pow(e);
    }
    return acc;
}

QRatFun GeomContext::a0_base(int n, int m) {
    if (m < 0 || m > n - 1) throw domain_error("a0_base: need 0 <= m <= n-1");
    QRatFun acc = QRatFun::q_pow(-2LL * m);
    for (int i = 0; i < n; ++i) {
        if (i == m) continue;
        acc /= one() - QRatFun::q_pow(-2LL * (m - i));
    }
    return acc;
}

QRatFun GeomContext::a_rec(int n, int m) {
    if (m < 0 || m >= n) throw domain_error("a_rec: need 0 <= m < n");
    auto key = std::make_pair(n, m);
    auto it = a_memo_.find(key);
    if (it != a_memo_.end()) return it->second;
    QRatFun acc = a0_base(n, m);
    for (int i = 1; i <= m; ++i) acc -= C_eval(i, m) * a_rec(n - i, m - i);
    a_memo_.emplace(key, acc);
    return a_memo_.at(key);
}

const ZRatFun& GeomContext::A_fn(int n) {
    auto it = A_memo_.find(n);
    if (it != A_memo_.end()) return it->second;
    ZRatFun val(Rational(1));
    if (n > 0) {
        val = ZRatFun(Rational(0));
        long long cn = p_.c_exp(n);
        for (int i = 0; i < n; ++i) {
            // a(n, n-i) * (q^{2i}/Z)^{c_n} / (1 - q^{2i}/Z)
            ZRatFun ratio = ZRatFun(QRatFun::q_pow(2LL * i)) * ZRatFun::Z_pow(-1);
            ZRatFun power = ZRatFun(QRatFun::q_pow(2LL * i * cn)) * ZRatFun::Z_pow(-cn);
            val += ZRatFun(a_rec(n, i)) * power / (ZRatFun(Rational(1)) - ratio);
        }
    }
    return A_memo_.emplace(n, std::move(val)).first->second;
}

const ZRatFun& GeomContext::A0_fn(int n) {
    auto it = A0_memo_.find(n);
    if (it != A0_memo_.end()) return it->second;
    ZRatFun val(Rational(1));
    if (n > 0) {
        ZRatFun X = ZRatFun(QRatFun::q_pow(2LL * n)) * ZRatFun::Z_pow(-1);
        val = ZRatFun(QRatFun::q_pow(-2LL * n)) * X;
        for (int i = 1; i <= n; ++i)
            val = val / (ZRatFun(Rational(1)) - ZRatFun(QRatFun::q_pow(-2LL * i)) * X);
    }
    return A0_memo_.emplace(n, std::move(val)).first->second;
}

const ZRatFun& GeomContext::C_fn(int n) {
    auto it = C_memo_.find(n);
    if (it != C_memo_.end()) return it->second;
    ZRatFun val(Rational(1));
    if (n > 0) {
        val = A0_fn(n);
        for (int i = 0; i < n; ++i)
            val -= C_fn(i) * A_fn(n - i).scale_Z(QRatFun::q_pow(-2LL * i));
    }
    return C_memo_.emplace(n, std::move(val)).first->second;
}

QRatFun GeomContext::A_eval(int n, long long k) { return substitute_Z(A_fn(n), 2 * (n - k)); }
QRatFun GeomContext::A0_eval(int n, long long k) { return substitute_Z(A0_fn(n), 2 * (n - k)); }
QRatFun GeomContext::C_eval(int n, long long m) { return substitute_Z(C_fn(n), 2 * m); }

const QRatFun& GeomContext::B_val(int c) {
    auto it = B_memo_.find(c);
    if (it != B_memo_.end()) return it->second;
    QRatFun val = one();
    if (c > 0) {
        for (int i = 1; i <= c; ++i)
            val *= (one() - QRatFun::q_pow(1 - 2LL * i)) / (one() - QRatFun::q_pow(-2LL * i));
        for (int i = 1; i <= c; ++i) val -= A0_eval(i, 0) * B_val(c - i);
    }
    return B_memo_.emplace(c, std::move(val)).first->second;
}

QRatFun GeomContext::intersection_number() {
    QRatFun total;
    for (int a = 0; a <= p_.h; ++a)
        for (int b = 0; a + b <= p_.h; ++b) {
            int c = p_.h - a - b;
            total += QRatFun::q_pow(static_cast<long long>(a) * p_.v) * A_eval(a, 0) *
                     C_eval(b, -c) * B_val(c);
        }
    return total;
}

bool GeomContext::recursion_consistent(int n, long long m) {
    QRatFun lhs = A0_eval(n, n - m);
    QRatFun rhs;
    for (int i = 0; i <= n; ++i) rhs += C_eval(i, m) * A_eval(n - i, n - m);
    return lhs == rhs;
}

QRatFun intersection_number(int h, long long v) {
    GeomContext ctx{GeomParams(h, v)};
    return ctx.intersection_number();
}

QRatFun N_closed(long long v) {
    if (v <= 0 || v % 2 == 0) throw domain_error("N_closed: v must be odd and positive");
    long long u = ceil_div(v, 4);        // ceil(r/2), r = v/2
    long long Gr = (v + 1) / 2;          // ceil(r)
    QRatFun om2 = one() - QRatFun::q_pow(-2);
    QRatFun val = (QRatFun::q_pow(-2 - 2 * u + 2 * Gr) - QRatFun::q_pow(-4)) / (om2 * om2);
    val += QRatFun(Rational(u - 1)) * QRatFun::q_pow(2 * u - 2) / om2;
    val -= QRatFun(Rational(Gr)) * QRatFun::q_pow(-2) / om2;
    val += (QRatFun::q_pow(2 * u - 2) - QRatFun::q_pow(-2)) *
           (one() - QRatFun::q_pow(-1) - QRatFun::q_pow(-2)) / (om2 * om2);
    val += QRatFun(Rational(u)) * QRatFun::q_pow(v - 2 * u) / om2;
    return val;
}

namespace {

// N(r+2) - N(r) for r = v/2, generic form in Gr and ceil(r/2).
QRatFun n_step_generic(long long v) {
    long long u = ceil_div(v, 4);
    long long Gr = (v + 1) / 2;
    QRatFun val = QRatFun(Rational(2)) * (QRatFun(Rational(1)) - QRatFun::q_pow(2 * u)) /
                  (QRatFun(Rational(1)) - QRatFun::q_pow(2));
    val += QRatFun(Rational(Gr + 2 - u)) * QRatFun::q_pow(2 * u);
    val += QRatFun(Rational(Gr - u + 1)) * QRatFun::q_pow(2 * Gr - 2 * u + 1);
    return val;
}

// The same step through the two mod-4 specializations (2r == 1 resp. 3 mod 4).
QRatFun n_step_mod4(long long v) {
    QRatFun two(Rational(2));
    QRatFun one_(Rational(1));
    QRatFun den = one_ - QRatFun::q_pow(2);
    if (v % 4 == 1) {
        // q^{r+3/2} = q^{(v+3)/2}, coefficients r/2 + 7/4 and r/2 + 3/4
        return two * (one_ - QRatFun::q_pow((v + 3) / 2)) / den +
               QRatFun(Rational(v + 7, 4)) * QRatFun::q_pow((v + 3) / 2) +
               QRatFun(Rational(v + 3, 4)) * QRatFun::q_pow((v + 1) / 2);
    }
    return two * (one_ - QRatFun::q_pow((v + 1) / 2)) / den +
           QRatFun(Rational(v + 9, 4)) * QRatFun::q_pow((v + 1) / 2) +
           QRatFun(Rational(v + 5, 4)) * QRatFun::q_pow((v + 3) / 2);
}

} // namespace

QRatFun N_step(long long v) {
    if (v <= 0 || v % 2 == 0) throw domain_error("N_step: v must be odd and positive");
    if (v == 1) return QRatFun(Rational(1));
    if (v == 3) return QRatFun::q() + QRatFun(Rational(2));
    QRatFun step = n_step_generic(v - 4);
    if (step != n_step_mod4(v - 4))
        throw domain_error("N_step: generic and mod-4 step forms disagree");
    return N_step(v - 4) + step;
}

} // namespace aflw
