#pragma once

#include "aflw/rational.hpp"

#include <memory>
#include <vector>

namespace aflw {

// Small finite field F_p or F_{p^2}, table-driven. Elements of the quadratic
// extension are a + b*w with w^2 given by an explicitly stored irreducible
// quadratic over the prime field.
class GFContext {
public:
    static const GFContext* prime_field(int p);
    static const GFContext* quadratic(int p);

    int characteristic() const { return p_; }
    int degree() const { return deg_; }
    int order() const { return q_; }

    int add(int a, int b) const { return add_[static_cast<size_t>(a) * q_ + b]; }
    int mul(int a, int b) const { return mul_[static_cast<size_t>(a) * q_ + b]; }
    int neg(int a) const { return neg_[static_cast<size_t>(a)]; }
    int inv(int a) const {
        if (a == 0) throw division_by_zero{};
        return inv_[static_cast<size_t>(a)];
    }

    // Index of the residue-field lift of n (for prime-subfield scalars).
    int from_int(long long n) const {
        long long r = n % p_;
        if (r < 0) r += p_;
        return static_cast<int>(r);
    }

private:
    GFContext(int p, int deg, int w2_c0, int w2_c1);

    int p_, deg_, q_;
    std::vector<int> add_, mul_, neg_, inv_;
};

class GFElem {
public:
    GFElem() : ctx_(nullptr), v_(0) {}
    GFElem(const GFContext* ctx, int v) : ctx_(ctx), v_(v) {}

    static GFElem zero(const GFContext* ctx) { return GFElem(ctx, 0); }
    static GFElem one(const GFContext* ctx) { return GFElem(ctx, ctx->from_int(1)); }

    const GFContext* ctx() const { return ctx_; }
    int index() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    friend GFElem operator+(const GFElem& a, const GFElem& b) {
        return GFElem(a.ctx_, a.ctx_->add(a.v_, b.v_));
    }
    friend GFElem operator-(const GFElem& a, const GFElem& b) {
        return GFElem(a.ctx_, a.ctx_->add(a.v_, a.ctx_->neg(b.v_)));
    }
    friend GFElem operator*(const GFElem& a, const GFElem& b) {
        return GFElem(a.ctx_, a.ctx_->mul(a.v_, b.v_));
    }
    GFElem operator-() const { return GFElem(ctx_, ctx_->neg(v_)); }
    GFElem inv() const { return GFElem(ctx_, ctx_->inv(v_)); }

    friend bool operator==(const GFElem& a, const GFElem& b) { return a.v_ == b.v_; }
    friend bool operator!=(const GFElem& a, const GFElem& b) { return a.v_ != b.v_; }

private:
    const GFContext* ctx_;
    int v_;
};

inline GFContext::GFContext(int p, int deg, int w2_c0, int w2_c1) : p_(p), deg_(deg) {
    q_ = deg == 1 ? p : p * p;
    auto norm = [&](long long x) {
        long long r = x % p_;
        if (r < 0) r += p_;
        return static_cast<int>(r);
    };
    // index encoding: a + b*p with value a + b*w
    auto pack = [&](int a, int b) { return a + b * p_; };
    add_.assign(static_cast<size_t>(q_) * q_, 0);
    mul_.assign(static_cast<size_t>(q_) * q_, 0);
    neg_.assign(static_cast<size_t>(q_), 0);
    inv_.assign(static_cast<size_t>(q_), 0);
    for (int x = 0; x < q_; ++x) {
        int xa = x % p_, xb = x / p_;
        neg_[static_cast<size_t>(x)] = pack(norm(-xa), norm(-xb));
        for (int y = 0; y < q_; ++y) {
            int ya = y % p_, yb = y / p_;
            add_[static_cast<size_t>(x) * q_ + y] = pack(norm(xa + ya), norm(xb + yb));
            // (xa + xb w)(ya + yb w) with w^2 = w2_c1 w + w2_c0
            long long a = static_cast<long long>(xa) * ya + static_cast<long long>(xb) * yb % p_ * w2_c0;
            long long b = static_cast<long long>(xa) * yb + static_cast<long long>(xb) * ya +
                          static_cast<long long>(xb) * yb % p_ * w2_c1;
            mul_[static_cast<size_t>(x) * q_ + y] = pack(norm(a), norm(b));
        }
    }
    for (int x = 1; x < q_; ++x)
        for (int y = 1; y < q_; ++y)
            if (mul_[static_cast<size_t>(x) * q_ + y] == pack(1, 0)) {
                inv_[static_cast<size_t>(x)] = y;
                break;
            }
}

inline const GFContext* GFContext::prime_field(int p) {
    static std::vector<std::unique_ptr<GFContext>> cache;
    for (const auto& c : cache)
        if (c->p_ == p && c->deg_ == 1) return c.get();
    cache.emplace_back(new GFContext(p, 1, 0, 0));
    return cache.back().get();
}

inline const GFContext* GFContext::quadratic(int p) {
    static std::vector<std::unique_ptr<GFContext>> cache;
    for (const auto& c : cache)
        if (c->p_ == p && c->deg_ == 2) return c.get();
    // stored irreducible quadratic w^2 - c1 w - c0 over F_p
    int c0 = 0, c1 = 0;
    switch (p) {
        case 2: c0 = 1; c1 = 1; break;                 // w^2 = w + 1
        case 3: c0 = 2; c1 = 0; break;                 // w^2 = -1
        case 5: c0 = 3; c1 = 0; break;                 // w^2 = -2
        case 7: c0 = 6; c1 = 0; break;                 // w^2 = -1
        default: throw domain_error("GFContext::quadratic: unsupported prime");
    }
    cache.emplace_back(new GFContext(p, 2, c0, c1));
    return cache.back().get();
}

inline GFElem ring_zero_like(const GFElem& x) { return GFElem::zero(x.ctx()); }
inline GFElem ring_one_like(const GFElem& x) { return GFElem::one(x.ctx()); }
inline bool ring_is_zero(const GFElem& x) { return x.is_zero(); }
inline bool ring_is_unit(const GFElem& x) { return !x.is_zero(); }
inline GFElem ring_inv(const GFElem& x) { return x.inv(); }
inline GFElem ring_div_exact(const GFElem& a, const GFElem& b) { return a * b.inv(); }

} // namespace aflw
