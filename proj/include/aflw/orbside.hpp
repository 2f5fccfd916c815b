#pragma once

#include "aflw/tpoly.hpp"

#include <string>
#include <vector>

namespace aflw {

// Combinatorial cell of the h = 2 orbital sum: orders R_+ = O + pi^a O_L,
// R_- = O + pi^b O_L and Theta-image valuation offset c.
struct Cell {
    long long a, b, c;

    long long weight_exponent() const { return a + b - std::max<long long>(0, c); }
    long long length() const { return a + b - 2 * c; }
};

// All cells for odd v: a, b >= 0, c <= min(a, b), a + b - c <= (v-1)/2.
std::vector<Cell> cells(long long v);

// Orbital integral as a polynomial in T = -q^{2s}: each cell contributes
// q^{weight} (T^{length} + T^{v - length}).
TPoly orbital_poly(long long v);

// The same polynomial assembled from the re-indexed double sum over
// l = weight exponent; computed independently to cross-check the cell walk.
TPoly orbital_poly_reindexed(long long v);

// Closed form of the normalized derivative at s = 0:
// N'(r) = sum_l ((-1)^l (l - r)/2 - (1 + r)/2) q^l, r = v/2.
QRatFun nprime(long long v);

// N' by unrolling the two mod-4 step recursions from N'(1/2) = -1,
// N'(3/2) = -(q+2).
QRatFun nprime_step(long long v);

// Derivative selector per the lattice-counting theorem: k = 2 is the
// invertible-interior-bisector case computed here; k = 0 means the integral
// is independent of s, so the normalized derivative is identically zero.
QRatFun orbital_derivative(long long v, int k);

struct AflReport {
    long long v = 0;
    bool pass = false;
    QRatFun intersection, n_closed, n_step, n_prime_stat, n_prime_closed, n_prime_step;
    std::string diverging; // empty when pass
};

// Full two-sided comparison at one v: geometric triple, analytic triple,
// and the identity N(v/2) = -N'(v/2).
AflReport afl_verify(long long v);

} // namespace aflw
