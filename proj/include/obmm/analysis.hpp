#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

#include "obmm/instance_stats.hpp"
#include "obmm/pseudomul.hpp"

// Parameter selection and desk-scale verification of the probabilistic
// quantities behind the sampling reduction: the first moment mu, the
// dependent-pair correction Delta (closed-form bound and the sharper
// exponential-index form), the good-tuple failure bound, candidate counting
// under the weight-cap conditions, and skew diagnostics.
namespace obmm::analysis {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// mu = b^3 7^s / psi3, exact.
BigRat mu(const pseudomul::PseudoParams& p, const InstanceStats& stats);

// Closed-form upper bound on Delta: (psi1 b^5 25^s + psi2 b^4 13^s) / psi3^2, exact.
BigRat delta_bound(const pseudomul::PseudoParams& p, const InstanceStats& stats);

// Sharper exponential index (psi1 alpha1^s + psi2 alpha2^s) / (psi3^2 sqrt(s)).
// The hidden constant is taken as 1: comparative index, not a certified bound.
// Requires s >= 1.
double delta_bound_appendix(const pseudomul::PseudoParams& p, const InstanceStats& stats);

// e^(r-kappa) (kappa/r)^r: probability bound that fewer than r distinct-column
// good tuples exist when kappa are expected. Requires 0 < r <= kappa.
double good_tuple_failure_bound(std::uint64_t r, double kappa);

// Smallest s >= 0 with 7^s b^3 >= 3 psi3 ln(1/delta). Natural log; delta in (0,1).
int select_s(const InstanceStats& stats, std::int64_t b, double delta);

// ceil(log7(psi3 ln(psi3) / b^3) - 2) - ceil((7/6) log2(gamma)); gamma is the
// number of valid witnesses of the target entry. Natural log; may be negative.
// The gamma term is evaluated in exact integer arithmetic (smallest q with
// 2^(6q) >= gamma^7). Requires gamma >= 1 and psi3 >= 2.
int s_hat(const InstanceStats& stats, std::int64_t b, std::uint64_t gamma);

struct CandidateCount {
    std::uint64_t count = 0;
    double ratio = 0.0;  // count / 7^s
};

// Exhaustively counts triples (x,y,z) in ({0,1}^s)^3 with
//   x OR y OR z = all-ones,                 (survival)
//   |x|,|y|,|z| <= 4s/7,                    (per-coordinate weight caps)
//   |x OR y|, |x OR z|, |y OR z| <= 6s/7.   (pairwise union caps)
// Deterministic; s <= 9 (enumeration over the 7^s surviving bit patterns).
CandidateCount count_candidates(int s);

struct SkewReport {
    double ratio1 = 0.0;  // (25/7)^s b^2 psi1/psi3
    double ratio2 = 0.0;  // (13/7)^s b   psi2/psi3
    bool warn1 = false;   // ratio1 > 0.1
    bool warn2 = false;   // ratio2 > 0.1
    bool poly1_ok = false;  // psi3^0.345 >= psi1
    bool poly2_ok = false;  // psi3^0.681 >= psi2
    bool apx1_ok = false;   // psi3^0.350 >= psi1 (relaxed form)
    bool apx2_ok = false;   // psi3^0.694 >= psi2 (interpreted comparator)
};

SkewReport check_skew(const pseudomul::PseudoParams& p, const InstanceStats& stats);

struct BoundConstants {
    static double alpha1();  // 14 * 54^(1/7), about 24.75
    static double alpha2();  // 7 * 2^(6/7), about 12.68
};

struct JansonStats {
    BigRat mu;
    BigRat delta_upper;
    int s = 0;
    std::int64_t b = 1;
    InstanceStats stats;

    static JansonStats compute(const pseudomul::PseudoParams& p, const InstanceStats& st);
};

}  // namespace obmm::analysis
