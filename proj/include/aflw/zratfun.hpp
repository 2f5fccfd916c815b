#pragma once

#include "aflw/qratfun.hpp"

namespace aflw {

using ZPoly = Poly<QRatFun>;

// Monic Euclidean gcd over the fraction field of q-polynomials (univariate
// over a field, not a bivariate gcd). Kept for callers that want a canonical
// form; the ZRatFun arithmetic below deliberately avoids it.
inline ZPoly zpoly_gcd(ZPoly a, ZPoly b) {
    QRatFun one(Rational(1));
    auto monic = [&](ZPoly p) {
        if (p.is_zero() || p.lead() == one) return p;
        return p.scaled(ring_inv(p.lead()));
    };
    a = monic(std::move(a));
    b = monic(std::move(b));
    while (!b.is_zero()) {
        ZPoly r = divrem(a, b).second;
        a = std::move(b);
        b = monic(std::move(r));
    }
    return a;
}

// Rational function in the interpolation variable Z (standing for q^{2m})
// with q-rational-function coefficients. Stored as an unreduced fraction;
// common factors are cancelled pointwise during evaluation, which subsumes
// the L'Hospital limits without ever running a gcd in Z.
class ZRatFun {
public:
    ZRatFun() : num_(QRatFun()), den_(ZPoly::constant(QRatFun(Rational(1)))) {}
    explicit ZRatFun(const QRatFun& c)
        : num_(ZPoly::constant(c)), den_(ZPoly::constant(QRatFun(Rational(1)))) {}
    explicit ZRatFun(const Rational& c) : ZRatFun(QRatFun(c)) {}

    ZRatFun(ZPoly num, ZPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw division_by_zero{};
        if (num_.is_zero()) den_ = ZPoly::constant(QRatFun(Rational(1)));
    }

    static ZRatFun Z() {
        return ZRatFun(ZPoly::identity_var(QRatFun()), ZPoly::constant(QRatFun(Rational(1))));
    }

    static ZRatFun Z_pow(long long k) {
        ZPoly one = ZPoly::constant(QRatFun(Rational(1)));
        if (k >= 0) return ZRatFun(ZPoly::monomial(QRatFun(Rational(1)), static_cast<int>(k)), one);
        return ZRatFun(one, ZPoly::monomial(QRatFun(Rational(1)), static_cast<int>(-k)));
    }

    const ZPoly& num() const { return num_; }
    const ZPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend ZRatFun operator+(const ZRatFun& a, const ZRatFun& b) {
        return ZRatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend ZRatFun operator-(const ZRatFun& a, const ZRatFun& b) {
        return ZRatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    ZRatFun operator-() const {
        ZRatFun r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend ZRatFun operator*(const ZRatFun& a, const ZRatFun& b) {
        return ZRatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend ZRatFun operator/(const ZRatFun& a, const ZRatFun& b) {
        if (b.is_zero()) throw division_by_zero{};
        return ZRatFun(a.num_ * b.den_, a.den_ * b.num_);
    }

    ZRatFun& operator+=(const ZRatFun& o) { return *this = *this + o; }
    ZRatFun& operator-=(const ZRatFun& o) { return *this = *this - o; }
    ZRatFun& operator*=(const ZRatFun& o) { return *this = *this * o; }

    // Equality of the represented rational functions (cross-multiplied).
    friend bool operator==(const ZRatFun& a, const ZRatFun& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const ZRatFun& a, const ZRatFun& b) { return !(a == b); }

    // Substitute Z -> c*Z for a nonzero q-rational scale c.
    ZRatFun scale_Z(const QRatFun& c) const {
        if (c.is_zero()) throw domain_error("scale_Z: zero scale");
        auto apply = [&](const ZPoly& p) {
            std::vector<QRatFun> cs = p.coeffs();
            QRatFun f(Rational(1));
            for (size_t i = 0; i < cs.size(); ++i) {
                cs[i] = cs[i] * f;
                f = f * c;
            }
            return ZPoly(std::move(cs));
        };
        return ZRatFun(apply(num_), apply(den_));
    }

    // Exact value at Z = z. A common zero of numerator and denominator is a
    // removable singularity: both are divided by (Z - z) until the
    // denominator no longer vanishes, exactly where a limit computation
    // would apply L'Hospital.
    QRatFun eval(const QRatFun& z) const {
        ZPoly num = num_, den = den_;
        ZPoly lin =
            ZPoly::identity_var(QRatFun()) - ZPoly::constant(z); // Z - z, monic
        while (true) {
            QRatFun dv = den.eval(z);
            if (!dv.is_zero()) return num.eval(z) / dv;
            if (!num.eval(z).is_zero()) throw pole_error();
            num = divrem(num, lin).first;
            den = divrem(den, lin).first;
        }
    }

private:
    ZPoly num_;
    ZPoly den_;
};

// Exact value of f at Z = q^k.
inline QRatFun substitute_Z(const ZRatFun& f, long long k) {
    return f.eval(QRatFun::q_pow(k));
}

} // namespace aflw
