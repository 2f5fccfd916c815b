#pragma once

#include "aflw/gf.hpp"

#include <vector>

namespace aflw {

// Valuation of a truncated series: either an exact order of vanishing or
// "at least N" when every tracked coefficient vanishes.
struct Valuation {
    int v;
    bool exact;

    static Valuation at_least(int n) { return {n, false}; }
    static Valuation of(int n) { return {n, true}; }

    int value_or_throw() const {
        if (!exact) throw precision_error("valuation undecidable at this precision");
        return v;
    }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.v == b.v && a.exact == b.exact;
    }
};

// Element of F_q[t]/(t^N); a model of the ring of integers O_F = F_q[[t]]
// tracked to precision N. Arithmetic never extends precision: binary
// operations require both operands to share one N.
class TruncSeries {
public:
    TruncSeries() = default;
    TruncSeries(const GFContext* ctx, int N) : c_(static_cast<size_t>(N), GFElem::zero(ctx)) {}

    static TruncSeries from_int(const GFContext* ctx, int N, long long n) {
        TruncSeries s(ctx, N);
        s.c_[0] = GFElem(ctx, ctx->from_int(n));
        return s;
    }

    static TruncSeries t_power(const GFContext* ctx, int N, int k) {
        TruncSeries s(ctx, N);
        if (k < 0) throw domain_error("t_power: negative exponent");
        if (k < N) s.c_[static_cast<size_t>(k)] = GFElem::one(ctx);
        return s;
    }

    int precision() const { return static_cast<int>(c_.size()); }
    const GFContext* ctx() const { return c_.at(0).ctx(); }
    const GFElem& coeff(int i) const { return c_.at(static_cast<size_t>(i)); }
    GFElem& coeff(int i) { return c_.at(static_cast<size_t>(i)); }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }

    bool is_unit() const { return !c_[0].is_zero(); }

    Valuation valuation() const {
        for (size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return Valuation::of(static_cast<int>(i));
        return Valuation::at_least(precision());
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        a.check(b);
        TruncSeries r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] + b.c_[i];
        return r;
    }

    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
        a.check(b);
        TruncSeries r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] - b.c_[i];
        return r;
    }

    TruncSeries operator-() const {
        TruncSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        a.check(b);
        TruncSeries r(a.ctx(), a.precision());
        size_t n = a.c_.size();
        for (size_t i = 0; i < n; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (size_t j = 0; i + j < n; ++j) r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
        }
        return r;
    }

    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        a.check(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const TruncSeries& a, const TruncSeries& b) { return !(a == b); }

    // Series inverse; requires a unit.
    TruncSeries inv() const {
        if (!is_unit()) {
            if (is_zero()) throw precision_error("inverse of zero-at-precision element");
            throw not_invertible();
        }
        TruncSeries r(ctx(), precision());
        GFElem c0inv = c_[0].inv();
        r.c_[0] = c0inv;
        for (size_t k = 1; k < c_.size(); ++k) {
            GFElem acc = GFElem::zero(ctx());
            for (size_t j = 1; j <= k; ++j) acc = acc + c_[j] * r.c_[k - j];
            r.c_[k] = -(c0inv * acc);
        }
        return r;
    }

    TruncSeries mul_tpow(int k) const {
        if (k < 0) throw domain_error("mul_tpow: negative shift");
        TruncSeries r(ctx(), precision());
        for (size_t i = 0; static_cast<int>(i) + k < precision(); ++i)
            r.c_[i + static_cast<size_t>(k)] = c_[i];
        return r;
    }

    // Exact division by t^k; the k lowest coefficients must vanish. The top k
    // coefficients of the result are unknown and set to zero, so callers must
    // keep enough headroom.
    TruncSeries div_tpow(int k) const {
        if (k < 0) throw domain_error("div_tpow: negative shift");
        for (int i = 0; i < k && i < precision(); ++i)
            if (!c_[static_cast<size_t>(i)].is_zero())
                throw domain_error("div_tpow: not divisible");
        TruncSeries r(ctx(), precision());
        for (size_t i = static_cast<size_t>(k); i < c_.size(); ++i) r.c_[i - static_cast<size_t>(k)] = c_[i];
        return r;
    }

    TruncSeries truncated(int M) const {
        TruncSeries r(ctx(), M);
        for (int i = 0; i < M && i < precision(); ++i) r.c_[static_cast<size_t>(i)] = c_[static_cast<size_t>(i)];
        return r;
    }

    TruncSeries reduced_mod_tpow(int k) const {
        TruncSeries r = *this;
        for (int i = k; i < precision(); ++i) r.c_[static_cast<size_t>(i)] = GFElem::zero(ctx());
        return r;
    }

private:
    void check(const TruncSeries& o) const {
        if (precision() != o.precision()) throw domain_error("TruncSeries: precision mismatch");
    }

    std::vector<GFElem> c_;
};

inline constexpr bool ring_exact(const TruncSeries&) { return false; }
inline TruncSeries ring_zero_like(const TruncSeries& x) { return TruncSeries(x.ctx(), x.precision()); }
inline TruncSeries ring_one_like(const TruncSeries& x) {
    return TruncSeries::from_int(x.ctx(), x.precision(), 1);
}
inline bool ring_is_zero(const TruncSeries& x) { return x.is_zero(); }
inline bool ring_is_unit(const TruncSeries& x) { return x.is_unit(); }
inline TruncSeries ring_inv(const TruncSeries& x) { return x.inv(); }

// Exact division a/b with b = t^k * unit.
inline TruncSeries ring_div_exact(const TruncSeries& a, const TruncSeries& b) {
    Valuation vb = b.valuation();
    if (!vb.exact) throw precision_error("division by zero-at-precision element");
    if (vb.v == 0) return a * b.inv();
    return a.div_tpow(vb.v) * b.div_tpow(vb.v).inv();
}

} // namespace aflw
