#pragma once

#include "aflw/poly.hpp"

#include <string>
#include <utility>
#include <vector>

namespace aflw {

namespace detail {

using IntPoly = std::vector<Integer>; // ascending coefficients, trimmed

inline void ip_trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int ip_deg(const IntPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Integer ip_content(const IntPoly& p) {
    Integer g = 0;
    for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
    return g;
}

inline IntPoly ip_scale_div(const IntPoly& p, const Integer& d) {
    IntPoly r = p;
    for (auto& c : r) c /= d;
    return r;
}

inline IntPoly ip_mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1, Integer(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Pseudo-remainder prem(a, b) = lc(b)^(deg a - deg b + 1) * a mod b. The full
// power of lc(b) is applied even when the degree drops by more than one per
// step; the subresultant divisions below rely on it.
inline IntPoly ip_prem(IntPoly a, const IntPoly& b) {
    int db = ip_deg(b);
    const Integer& lb = b.back();
    int e = ip_deg(a) - db + 1;
    while (!a.empty() && ip_deg(a) >= db) {
        int k = ip_deg(a) - db;
        Integer la = a.back();
        for (auto& c : a) c *= lb;
        for (int i = 0; i <= db; ++i) a[static_cast<size_t>(i + k)] -= la * b[static_cast<size_t>(i)];
        ip_trim(a);
        --e;
    }
    for (; e > 0; --e)
        for (auto& c : a) c *= lb;
    return a;
}

// Primitive gcd via the subresultant PRS; avoids rational coefficient blowup.
inline IntPoly ip_gcd_prs(IntPoly a, IntPoly b) {
    ip_trim(a);
    ip_trim(b);
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (ip_deg(a) < ip_deg(b)) std::swap(a, b);
    Integer ca = ip_content(a), cb = ip_content(b);
    Integer cg = boost::multiprecision::gcd(ca, cb);
    a = ip_scale_div(a, ca);
    b = ip_scale_div(b, cb);
    Integer g = 1, h = 1;
    while (true) {
        int delta = ip_deg(a) - ip_deg(b);
        IntPoly r = ip_prem(a, b);
        if (r.empty()) break;
        if (ip_deg(r) == 0) {
            b = IntPoly{Integer(1)};
            break;
        }
        a = std::move(b);
        Integer divisor = g;
        for (int i = 0; i < delta; ++i) divisor *= h;
        b = ip_scale_div(r, divisor);
        g = a.back();
        if (delta > 0) {
            Integer hp = 1;
            for (int i = 0; i < delta; ++i) hp *= g;
            Integer hd = 1;
            for (int i = 0; i < delta - 1; ++i) hd *= h;
            h = hp / hd;
        }
    }
    Integer cb2 = ip_content(b);
    b = ip_scale_div(b, cb2);
    if (b.back() < 0)
        for (auto& c : b) c = -c;
    for (auto& c : b) c *= cg;
    if (cg == 0) b = IntPoly{Integer(1)};
    return b;
}

// --- modular gcd ------------------------------------------------------------
// Integer polynomial gcd through images modulo word-size primes. One prime
// certifies coprimality (by far the common case during normalization); small
// gcds are rebuilt by CRT and certified by exact trial division. The PRS
// version above remains as a fallback.

inline constexpr unsigned long long kGcdPrimes[] = {
    2147483647ULL, 2147483629ULL, 2147483587ULL, 2147483579ULL, 2147483563ULL, 2147483549ULL,
    2147483543ULL, 2147483497ULL, 2147483489ULL, 2147483477ULL, 2147483423ULL, 2147483399ULL,
    2147483353ULL, 2147483323ULL, 2147483269ULL, 2147483249ULL, 2147483237ULL, 2147483179ULL,
    2147483171ULL, 2147483137ULL, 2147483123ULL, 2147483077ULL, 2147483069ULL, 2147483059ULL};

using ModPoly = std::vector<unsigned long long>;

inline unsigned long long mod_inv(unsigned long long a, unsigned long long p) {
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(p), newr = static_cast<long long>(a % p);
    while (newr != 0) {
        long long quo = r / newr;
        t -= quo * newt;
        std::swap(t, newt);
        r -= quo * newr;
        std::swap(r, newr);
    }
    if (t < 0) t += static_cast<long long>(p);
    return static_cast<unsigned long long>(t);
}

inline ModPoly ip_reduce_mod(const IntPoly& a, unsigned long long p) {
    ModPoly r;
    r.reserve(a.size());
    Integer pp(p);
    for (const auto& c : a) {
        Integer m = c % pp;
        if (m < 0) m += pp;
        r.push_back(static_cast<unsigned long long>(m));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, unsigned long long p) {
    auto trim = [](ModPoly& x) {
        while (!x.empty() && x.back() == 0) x.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        unsigned long long lbinv = mod_inv(b.back(), p);
        while (a.size() >= b.size()) {
            unsigned long long f = (a.back() % p) * lbinv % p;
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) {
                unsigned long long sub = f * b[i] % p;
                a[off + i] = (a[off + i] + p - sub) % p;
            }
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        unsigned long long inv = mod_inv(a.back(), p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

// Does d divide a exactly over Z? (both primitive-ish; quotient discarded)
inline bool ip_divides(const IntPoly& d, IntPoly a) {
    if (d.empty()) return a.empty();
    while (!a.empty()) {
        if (ip_deg(a) < ip_deg(d)) return false;
        Integer quo = a.back() / d.back();
        if (quo * d.back() != a.back()) return false;
        size_t off = a.size() - d.size();
        for (size_t i = 0; i < d.size(); ++i) a[off + i] -= quo * d[i];
        ip_trim(a);
    }
    return true;
}

inline IntPoly ip_gcd(IntPoly a, IntPoly b) {
    ip_trim(a);
    ip_trim(b);
    if (a.empty()) return b;
    if (b.empty()) return a;
    Integer ca = ip_content(a), cb = ip_content(b);
    Integer cg = boost::multiprecision::gcd(ca, cb);
    a = ip_scale_div(a, ca);
    b = ip_scale_div(b, cb);
    auto scaled_back = [&](IntPoly g) {
        if (!g.empty() && g.back() < 0)
            for (auto& c : g) c = -c;
        for (auto& c : g) c *= cg;
        return g;
    };
    if (ip_deg(a) == 0 || ip_deg(b) == 0) return IntPoly{cg};

    Integer lcg = boost::multiprecision::gcd(boost::multiprecision::abs(a.back()),
                                             boost::multiprecision::abs(b.back()));
    Integer modulus = 0;
    IntPoly candidate; // symmetric-range lift of lcg * monic gcd image
    int best_deg = std::numeric_limits<int>::max();
    for (unsigned long long p : kGcdPrimes) {
        Integer pp(p);
        if (a.back() % pp == 0 || b.back() % pp == 0) continue;
        ModPoly g = mp_gcd(ip_reduce_mod(a, p), ip_reduce_mod(b, p), p);
        int dg = static_cast<int>(g.size()) - 1;
        if (dg == 0) return IntPoly{cg}; // coprime
        if (dg > best_deg) continue;     // unlucky prime
        // image of lcg * g, coefficients in [0, p)
        unsigned long long lm = static_cast<unsigned long long>(lcg % pp);
        ModPoly gs = g;
        for (auto& c : gs) c = c * lm % p;
        bool stable = false;
        if (dg < best_deg || modulus == 0) {
            best_deg = dg;
            modulus = pp;
            candidate.assign(gs.size(), Integer(0));
            for (size_t i = 0; i < gs.size(); ++i) {
                Integer c(gs[i]);
                if (c * 2 > modulus) c -= modulus;
                candidate[i] = c;
            }
        } else {
            // CRT: x = candidate (mod modulus), x = gs (mod p), symmetric lift
            Integer minv(mod_inv(static_cast<unsigned long long>(modulus % pp), p));
            Integer newmod = modulus * pp;
            stable = true;
            for (size_t i = 0; i < candidate.size(); ++i) {
                Integer r1 = candidate[i] % modulus;
                if (r1 < 0) r1 += modulus;
                Integer r2(gs[i]);
                Integer diff = (r2 - r1) % pp;
                if (diff < 0) diff += pp;
                Integer x = r1 + modulus * ((diff * minv) % pp);
                if (x * 2 > newmod) x -= newmod;
                if (x != candidate[i]) {
                    candidate[i] = x;
                    stable = false;
                }
            }
            modulus = newmod;
        }
        if (stable) {
            IntPoly g2 = candidate;
            ip_trim(g2);
            Integer cc = ip_content(g2);
            if (cc != 0) g2 = ip_scale_div(g2, cc);
            if (ip_divides(g2, a) && ip_divides(g2, b)) return scaled_back(g2);
        }
    }
    // prime list exhausted: fall back to the deterministic PRS
    IntPoly g = ip_gcd_prs(a, b);
    return scaled_back(g);
}

// Clear denominators: returns integer coefficients and the common denominator.
inline std::pair<IntPoly, Integer> ip_from_rational(const Poly<Rational>& p) {
    Integer l = 1;
    for (const auto& c : p.coeffs()) l = boost::multiprecision::lcm(l, den(c));
    IntPoly r;
    r.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) r.push_back(num(c) * (l / den(c)));
    ip_trim(r);
    return {r, l};
}

inline Poly<Rational> ip_to_rational(const IntPoly& p) {
    if (p.empty()) return Poly<Rational>(Rational(0));
    std::vector<Rational> cs;
    cs.reserve(p.size());
    for (const auto& c : p) cs.emplace_back(c);
    return Poly<Rational>(std::move(cs));
}

} // namespace detail

using QPoly = Poly<Rational>;

inline QPoly qpoly_gcd(const QPoly& a, const QPoly& b) {
    auto [ia, da] = detail::ip_from_rational(a);
    auto [ib, db] = detail::ip_from_rational(b);
    (void)da;
    (void)db;
    return detail::ip_to_rational(detail::ip_gcd(ia, ib));
}

// Rational function in the residue-cardinality variable q, kept in canonical
// form: numerator and denominator coprime, denominator monic over Q.
class QRatFun {
public:
    QRatFun() : num_(Rational(0)), den_(QPoly::constant(Rational(1))) {}
    explicit QRatFun(const Rational& c) : num_(QPoly::constant(c)), den_(QPoly::constant(Rational(1))) {}
    explicit QRatFun(long long c) : QRatFun(Rational(c)) {}

    QRatFun(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static QRatFun q() { return QRatFun(QPoly::identity_var(Rational(0)), QPoly::constant(Rational(1))); }

    // q^k for any integer k; negative powers go to the denominator.
    static QRatFun q_pow(long long k) {
        QPoly one = QPoly::constant(Rational(1));
        if (k >= 0) return QRatFun(QPoly::monomial(Rational(1), static_cast<int>(k)), one);
        return QRatFun(one, QPoly::monomial(Rational(1), static_cast<int>(-k)));
    }

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend QRatFun operator+(const QRatFun& a, const QRatFun& b) {
        return QRatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend QRatFun operator-(const QRatFun& a, const QRatFun& b) {
        return QRatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    QRatFun operator-() const {
        QRatFun r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend QRatFun operator*(const QRatFun& a, const QRatFun& b) {
        return QRatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend QRatFun operator/(const QRatFun& a, const QRatFun& b) {
        if (b.is_zero()) throw division_by_zero{};
        return QRatFun(a.num_ * b.den_, a.den_ * b.num_);
    }

    QRatFun& operator+=(const QRatFun& o) { return *this = *this + o; }
    QRatFun& operator-=(const QRatFun& o) { return *this = *this - o; }
    QRatFun& operator*=(const QRatFun& o) { return *this = *this * o; }
    QRatFun& operator/=(const QRatFun& o) { return *this = *this / o; }

    QRatFun pow(long long e) const {
        if (e < 0) return QRatFun(Rational(1)) / pow(-e);
        QRatFun acc(Rational(1)), base = *this;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    friend bool operator==(const QRatFun& a, const QRatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const QRatFun& a, const QRatFun& b) { return !(a == b); }

    // Exact evaluation at a numeric value of q.
    Rational eval_at(const Rational& qval) const {
        Rational d = den_.eval(qval);
        if (d == 0) throw pole_error("pole at numeric q evaluation");
        return num_.eval(qval) / d;
    }

    bool is_polynomial_in_q() const { return den_.deg() == 0; }

    // The numerator as a polynomial; only valid when is_polynomial_in_q().
    QPoly as_polynomial() const {
        if (!is_polynomial_in_q()) throw domain_error("QRatFun: not a polynomial in q");
        return num_; // den_ is the constant 1 in canonical form
    }

    // Integer-cleared canonical pair: both parts have integer coefficients,
    // jointly content-free, denominator with positive leading coefficient.
    std::pair<detail::IntPoly, detail::IntPoly> cleared() const {
        auto [in, dn] = detail::ip_from_rational(num_);
        auto [id, dd] = detail::ip_from_rational(den_);
        // num/den = (in/dn) / (id/dd) = (in*dd) / (id*dn)
        detail::IntPoly n = in, d = id;
        for (auto& c : n) c *= dd;
        for (auto& c : d) c *= dn;
        Integer cn = detail::ip_content(n), cd = detail::ip_content(d);
        Integer g = boost::multiprecision::gcd(cn, cd);
        if (g > 1) {
            n = detail::ip_scale_div(n, g);
            d = detail::ip_scale_div(d, g);
        }
        if (!d.empty() && d.back() < 0) {
            for (auto& c : n) c = -c;
            for (auto& c : d) c = -c;
        }
        if (n.empty()) n.push_back(Integer(0));
        if (d.empty()) d.push_back(Integer(1));
        return {n, d};
    }

    std::string to_string() const;

private:
    void normalize() {
        if (den_.is_zero()) throw division_by_zero{};
        if (num_.is_zero()) {
            den_ = QPoly::constant(Rational(1));
            return;
        }
        // strip a common power of q before the gcd; very common in practice
        size_t shift = 0;
        while (shift < static_cast<size_t>(num_.deg()) + 1 && shift < static_cast<size_t>(den_.deg()) + 1 &&
               num_.coeff(shift) == Rational(0) && den_.coeff(shift) == Rational(0))
            ++shift;
        if (shift > 0) {
            auto chop = [&](const QPoly& p) {
                std::vector<Rational> cs(p.coeffs().begin() + static_cast<long>(shift),
                                         p.coeffs().end());
                return QPoly(std::move(cs));
            };
            num_ = chop(num_);
            den_ = chop(den_);
        }
        if (num_.deg() > 0 && den_.deg() > 0) {
            QPoly g = qpoly_gcd(num_, den_);
            if (g.deg() > 0) {
                auto [qn, rn] = divrem(num_, g);
                auto [qd, rd] = divrem(den_, g);
                if (!rn.is_zero() || !rd.is_zero()) throw error("QRatFun: gcd does not divide");
                num_ = qn;
                den_ = qd;
            }
        }
        Rational lead = den_.lead();
        if (lead != 1) {
            Rational inv = Rational(1) / lead;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    QPoly num_;
    QPoly den_;
};

namespace detail {

inline std::string ip_to_string(const IntPoly& p, const std::string& var) {
    if (p.empty()) return "0";
    std::string out;
    bool first = true;
    for (size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0) continue;
        Integer c = p[i];
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::string cs = c.str();
        if (i == 0) {
            out += cs;
        } else {
            if (c != 1) out += cs + "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    if (first) out = "0";
    return out;
}

} // namespace detail

inline std::string QRatFun::to_string() const {
    auto [n, d] = cleared();
    std::string ns = detail::ip_to_string(n, "q");
    if (d.size() == 1 && d[0] == 1) return ns;
    return "(" + ns + ") / (" + detail::ip_to_string(d, "q") + ")";
}

// Ring customization points so QRatFun can serve as a coefficient ring.
inline QRatFun ring_zero_like(const QRatFun&) { return QRatFun(); }
inline QRatFun ring_one_like(const QRatFun&) { return QRatFun(Rational(1)); }
inline bool ring_is_zero(const QRatFun& x) { return x.is_zero(); }
inline bool ring_is_unit(const QRatFun& x) { return !x.is_zero(); }
inline QRatFun ring_inv(const QRatFun& x) {
    if (x.is_zero()) throw division_by_zero{};
    return QRatFun(Rational(1)) / x;
}
inline QRatFun ring_div_exact(const QRatFun& a, const QRatFun& b) { return a / b; }

} // namespace aflw
