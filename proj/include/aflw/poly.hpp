#pragma once

#include "aflw/ring.hpp"

#include <algorithm>
#include <vector>

namespace aflw {

// Dense univariate polynomial over a commutative ring R. A polynomial always
// stores at least one coefficient so that context-carrying rings keep their
// context available; the zero polynomial is { 0 } and has degree -1.
template <class R>
class Poly {
public:
    explicit Poly(const R& zero_like) : c_{zero_like} { c_[0] = ring_zero_like(zero_like); }

    explicit Poly(std::vector<R> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw domain_error("Poly: empty coefficient list");
        trim();
    }

    static Poly constant(const R& value) { return Poly(std::vector<R>{value}); }

    static Poly monomial(const R& value, int k) {
        if (k < 0) throw domain_error("Poly::monomial: negative exponent");
        std::vector<R> cs(static_cast<size_t>(k) + 1, ring_zero_like(value));
        cs.back() = value;
        return Poly(std::move(cs));
    }

    static Poly identity_var(const R& like) { return monomial(ring_one_like(like), 1); }

    int deg() const { return is_zero() ? -1 : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.size() == 1 && ring_is_zero(c_[0]); }

    const R& lead() const { return c_.back(); }
    const std::vector<R>& coeffs() const { return c_; }
    R zero_like() const { return ring_zero_like(c_[0]); }
    R one_like() const { return ring_one_like(c_[0]); }

    R coeff(size_t i) const { return i < c_.size() ? c_[i] : zero_like(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<R> cs(std::max(a.c_.size(), b.c_.size()), a.zero_like());
        for (size_t i = 0; i < cs.size(); ++i) cs[i] = a.coeff(i) + b.coeff(i);
        return Poly(std::move(cs));
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<R> cs(std::max(a.c_.size(), b.c_.size()), a.zero_like());
        for (size_t i = 0; i < cs.size(); ++i) cs[i] = a.coeff(i) - b.coeff(i);
        return Poly(std::move(cs));
    }

    Poly operator-() const {
        std::vector<R> cs = c_;
        for (auto& x : cs) x = zero_like() - x;
        return Poly(std::move(cs));
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly(a.zero_like());
        std::vector<R> cs(a.c_.size() + b.c_.size() - 1, a.zero_like());
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (ring_is_zero(a.c_[i])) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) cs[i + j] = cs[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(std::move(cs));
    }

    Poly scaled(const R& s) const {
        std::vector<R> cs = c_;
        for (auto& x : cs) x = x * s;
        return Poly(std::move(cs));
    }

    // Multiply by X^k.
    Poly shifted(int k) const {
        if (k < 0) throw domain_error("Poly::shifted: negative shift");
        if (is_zero()) return *this;
        std::vector<R> cs(c_.size() + static_cast<size_t>(k), zero_like());
        for (size_t i = 0; i < c_.size(); ++i) cs[i + static_cast<size_t>(k)] = c_[i];
        return Poly(std::move(cs));
    }

    R eval(const R& x) const {
        R acc = zero_like();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        size_t n = std::max(a.c_.size(), b.c_.size());
        for (size_t i = 0; i < n; ++i)
            if (!(a.coeff(i) == b.coeff(i))) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Quotient and remainder; requires the leading coefficient of b to be a unit.
    friend std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw division_by_zero{};
        R lb_inv = ring_inv(b.lead());
        Poly quot(a.zero_like());
        Poly rem = a;
        while (!rem.is_zero() && rem.deg() >= b.deg()) {
            R f = rem.lead() * lb_inv;
            int k = rem.deg() - b.deg();
            quot = quot + Poly::monomial(f, k);
            rem = rem - b.scaled(f).shifted(k);
        }
        return {quot, rem};
    }

private:
    void trim() {
        while (c_.size() > 1 && ring_is_zero(c_.back())) c_.pop_back();
    }

    std::vector<R> c_;
};

} // namespace aflw
