#pragma once

#include "aflw/qratfun.hpp"

#include <map>

namespace aflw {

// Sparse polynomial in T = -q^{2s} with q-rational-function coefficients.
// Exponents are nonnegative; a negative exponent indicates a bad cell
// upstream and is rejected.
class TPoly {
public:
    TPoly() = default;

    void add_term(long long m, const QRatFun& c) {
        if (m < 0) throw domain_error("TPoly: negative exponent (bad cell)");
        if (c.is_zero()) return;
        auto it = coeffs_.find(m);
        if (it == coeffs_.end()) {
            coeffs_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    QRatFun coeff(long long m) const {
        auto it = coeffs_.find(m);
        return it == coeffs_.end() ? QRatFun() : it->second;
    }

    long long degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<long long, QRatFun>& terms() const { return coeffs_; }

    friend TPoly operator+(const TPoly& a, const TPoly& b) {
        TPoly r = a;
        for (const auto& [m, c] : b.coeffs_) r.add_term(m, c);
        return r;
    }

    TPoly scaled(const QRatFun& s) const {
        TPoly r;
        for (const auto& [m, c] : coeffs_) r.add_term(m, c * s);
        return r;
    }

    QRatFun eval_T(const QRatFun& t) const {
        QRatFun acc;
        for (const auto& [m, c] : coeffs_) acc += c * t.pow(m);
        return acc;
    }

    friend bool operator==(const TPoly& a, const TPoly& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const TPoly& a, const TPoly& b) { return !(a == b); }

private:
    std::map<long long, QRatFun> coeffs_;
};

// Normalized derivative at s = 0. Since d/ds (-q^{2s})^m |_{s=0} =
// 2m (ln q) (-1)^m, dividing by 2 ln q leaves sum_m m (-1)^m c_m.
inline QRatFun dq_statistic(const TPoly& p) {
    QRatFun acc;
    for (const auto& [m, c] : p.terms()) {
        Rational f(m);
        if (m % 2 != 0) f = -f;
        acc += c * QRatFun(f);
    }
    return acc;
}

} // namespace aflw
