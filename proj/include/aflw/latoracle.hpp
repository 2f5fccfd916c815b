#pragma once

#include "aflw/doublestruct.hpp"
#include "aflw/tpoly.hpp"

#include <map>
#include <vector>

namespace aflw {

// Joint commutant L of a regular pair of operators, as the O-module basis
// {I, beta} of L intersected with Mat(O), together with the minimal quadratic
// of beta and the uniformizer data of the maximal order (ramified case).
struct CommutantAlgebra {
    TSMatrix beta;            // non-scalar basis element
    TruncSeries min_a, min_b; // beta^2 = min_a * beta + min_b
    TruncSeries cstar;        // best F-approximation of the root of the quadratic
    long long vstar = 0;      // max valuation of the quadratic over O; odd iff ramified
    long long ustar = 0;      // (vstar - 1) / 2 in the ramified case
    bool ramified = false;
    int free_rank = 0;
    std::vector<int> torsion; // elementary divisor exponents of the solution system

    CommutantAlgebra() : beta(1, 1, TruncSeries()), min_a(), min_b(), cstar() {}
};

CommutantAlgebra joint_commutant(const TSMatrix& t1z, const TSMatrix& t2z);

// Operator-stable lattice, canonical triangular basis inside the window
// Lambda_0 >= Lambda >= t^D Lambda_0 (primitive representative, so some entry
// is a unit).
struct StableLattice {
    TSMatrix basis;
    int window; // D
};

struct LatticeClassStats {
    long long m_plus = 0, m_minus = 0; // order exponents of Lambda_+/-
    long long length = 0;              // length(Lambda_- / Theta Lambda_+)
    long long stab_index = 1;          // [O_L^x : Stab^x], measured
    bool plus_principal = false, minus_principal = false;
};

// All operator-stable lattice classes modulo L^x, as canonical primitive
// representatives. Errors when the window cannot certify completeness.
std::vector<StableLattice> enumerate_stable_lattices(const MatchedPair& pair,
                                                     const CommutantAlgebra& comm, int window);

LatticeClassStats lattice_stats(const StableLattice& lat, const MatchedPair& pair,
                                const CommutantAlgebra& comm);

// Weighted class sum: sum over classes of stab_index * T^length.
TPoly orbital_from_lattices(const std::vector<LatticeClassStats>& classes);

struct LatticeOracleRun {
    int q = 0;
    long long v = 0;
    int window = 0, prec = 0;
    long long stable_count = 0; // primitive stable lattices in the window
    std::vector<LatticeClassStats> classes;
    TPoly weighted;
};

// Build the matched pair, measure its commutant, enumerate and weigh all
// classes. window <= 0 picks the default v + 3; prec <= 0 picks a precision
// compatible with the window.
LatticeOracleRun run_lattice_oracle(int q, long long v, int window = 0, int prec = 0);

// ---------------------------------------------------------------------------
// Counting oracles over truncated matrix rings.
// ---------------------------------------------------------------------------

struct DetValuationCount {
    int a = 0, Q = 0, N = 0;
    std::vector<Rational> measured; // measured[n] = #{det valuation n} / Q^{a^2 N}, n < N
    std::vector<Rational> expected; // epsilon_{K,a} * [X^n] prod 1/(1 - Q^{-i} X)
};

// Counts matrices g in Mat_a(F_Q[t]/t^N) by valuation of det g. `chunks`
// partitions the enumeration deterministically (tallies merge in index order
// no matter the execution order); `jobs` threads execute the chunks.
DetValuationCount count_det_valuations(int a, int Q, int N, int chunks = 1, int jobs = 1);

struct ClassValuationStat {
    int q = 0, N = 0;
    std::map<long long, Rational> buckets; // w -> measured volume; key -1 collects w >= N
    Rational total = Rational(0);
};

// h = 1 unramified class statistic: enumerate x in Mat_2(F_q[t]/t^N) with
// charpoly(x) equal to a fixed residually irreducible quadratic, bucketed by
// w(x) = val(-det(x - x0)/delta). Volumes are normalized by q^{2N}, the
// codimension-2 class measure.
ClassValuationStat count_class_valuation_stat(int q, int N);

} // namespace aflw
