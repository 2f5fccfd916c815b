#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace aflw {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure mode the library reports deliberately goes
// through one of these, so callers can distinguish "you asked for 1/0" from
// "the truncation level cannot decide this".
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct division_by_zero : error {
    division_by_zero() : error("division by zero") {}
};

struct pole_error : error {
    explicit pole_error(const std::string& what = "pole at evaluation point") : error(what) {}
};

struct precision_error : error {
    explicit precision_error(const std::string& what = "insufficient precision") : error(what) {}
};

struct not_invertible : error {
    explicit not_invertible(const std::string& what = "not invertible over O") : error(what) {}
};

struct domain_error : error {
    explicit domain_error(const std::string& what) : error(what) {}
};

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Ceiling of the exact fraction n/d, d > 0.
inline long long ceil_div(long long n, long long d) {
    if (d <= 0) throw domain_error("ceil_div: nonpositive denominator");
    long long qq = n / d;
    if (n % d != 0 && n > 0) ++qq;
    return qq;
}

} // namespace aflw
