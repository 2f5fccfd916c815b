#pragma once

#include "aflw/rational.hpp"

namespace aflw {

// Customization points for coefficient rings. Context-carrying rings
// (finite fields, truncated series) overload these for their own types;
// "like" supplies the context.

// True when a vanishing element is exactly zero (as opposed to zero at a
// tracked precision only).
template <class R>
constexpr bool ring_exact(const R&) { return true; }

inline Rational ring_zero_like(const Rational&) { return Rational(0); }
inline Rational ring_one_like(const Rational&) { return Rational(1); }
inline bool ring_is_zero(const Rational& x) { return x == 0; }
inline bool ring_is_unit(const Rational& x) { return x != 0; }

inline Rational ring_inv(const Rational& x) {
    if (x == 0) throw division_by_zero{};
    return Rational(1) / x;
}

// Exact division a / b; throws when b does not exactly divide a.
inline Rational ring_div_exact(const Rational& a, const Rational& b) {
    if (b == 0) throw division_by_zero{};
    return a / b;
}

} // namespace aflw
