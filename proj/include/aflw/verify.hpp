#pragma once

#include "aflw/report.hpp"

namespace aflw {

// Identity battery: randomized double-structure invariants over Q and over
// F_q[t]/(t^N) for q in {2,3,5}, plus the resultant-shortcut comparison.
std::vector<CheckResult> run_identities_suite(int points_per_ring = 200, int shortcut_pairs = 50);

// Geometric side: pipeline = closed form = step recursion for odd v <= vmax,
// with polynomiality, degree and coefficient positivity, the recursion
// consistency identity and the two-block assembly identity.
std::vector<CheckResult> run_geometry_suite(long long vmax = 39);

// Analytic side: statistic = closed N' = step N', palindromy and vanishing
// at T = -1, and the re-indexed double sum.
std::vector<CheckResult> run_orbital_suite(long long vmax = 39);

// The comparison N(v/2) = -N'(v/2) for odd v <= vmax.
std::vector<CheckResult> run_afl_suite(long long vmax = 39);

// Lattice, determinant-count and class-statistic oracles; `jobs` threads run
// independent cases concurrently.
std::vector<CheckResult> run_oracle_suite(int jobs = 1);

// h = 3 smoke: the pipeline completes with every pole cancelling.
std::vector<CheckResult> run_h3_smoke();

} // namespace aflw
