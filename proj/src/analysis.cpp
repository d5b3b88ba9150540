#include "obmm/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace obmm::analysis {

namespace {

BigInt big_pow(std::uint64_t base, int exp) {
    BigInt r = 1;
    const BigInt b = base;
    for (int i = 0; i < exp; ++i) r *= b;
    return r;
}

BigInt b_cubed(std::int64_t b) {
    const BigInt v = b;
    return v * v * v;
}

}  // namespace

double BoundConstants::alpha1() { return 14.0 * std::pow(54.0, 1.0 / 7.0); }
double BoundConstants::alpha2() { return 7.0 * std::pow(2.0, 6.0 / 7.0); }

BigRat mu(const pseudomul::PseudoParams& p, const InstanceStats& stats) {
    p.validate();
    if (stats.psi3 == 0) throw std::invalid_argument("mu: psi3 must be positive");
    return BigRat(b_cubed(p.b) * big_pow(7, p.s), BigInt(stats.psi3));
}

BigRat delta_bound(const pseudomul::PseudoParams& p, const InstanceStats& stats) {
    p.validate();
    if (stats.psi3 == 0) throw std::invalid_argument("delta_bound: psi3 must be positive");
    const BigInt b = p.b;
    const BigInt b4 = b * b * b * b;
    const BigInt b5 = b4 * b;
    const BigInt num =
        BigInt(stats.psi1) * b5 * big_pow(25, p.s) + BigInt(stats.psi2) * b4 * big_pow(13, p.s);
    const BigInt den = BigInt(stats.psi3) * BigInt(stats.psi3);
    return BigRat(num, den);
}

double delta_bound_appendix(const pseudomul::PseudoParams& p, const InstanceStats& stats) {
    p.validate();
    if (p.s < 1) throw std::invalid_argument("delta_bound_appendix: requires s >= 1");
    if (stats.psi3 == 0)
        throw std::invalid_argument("delta_bound_appendix: psi3 must be positive");
    const double num = static_cast<double>(stats.psi1) * std::pow(BoundConstants::alpha1(), p.s) +
                       static_cast<double>(stats.psi2) * std::pow(BoundConstants::alpha2(), p.s);
    const double den = static_cast<double>(stats.psi3) * static_cast<double>(stats.psi3) *
                       std::sqrt(static_cast<double>(p.s));
    return num / den;
}

double good_tuple_failure_bound(std::uint64_t r, double kappa) {
    if (r == 0) throw std::invalid_argument("good_tuple_failure_bound: r must be positive");
    const double rd = static_cast<double>(r);
    if (rd > kappa) throw std::invalid_argument("good_tuple_failure_bound: requires r <= kappa");
    // exp(r - kappa + r ln(kappa/r)), evaluated in log space for stability
    return std::exp(rd - kappa + rd * std::log(kappa / rd));
}

int select_s(const InstanceStats& stats, std::int64_t b, double delta) {
    if (b < 1) throw std::invalid_argument("select_s: b must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("select_s: delta must lie in (0,1)");
    const long double target =
        3.0L * static_cast<long double>(stats.psi3) * std::log(1.0L / (long double)delta);
    BigInt lhs = b_cubed(b);
    int s = 0;
    while (static_cast<long double>(lhs) < target) {
        lhs *= 7;
        ++s;
        if (s > 256) throw std::runtime_error("select_s: no feasible s");  // unreachable
    }
    return s;
}

int s_hat(const InstanceStats& stats, std::int64_t b, std::uint64_t gamma) {
    if (gamma == 0) throw std::invalid_argument("s_hat: gamma must be >= 1");
    if (b < 1) throw std::invalid_argument("s_hat: b must be >= 1");
    if (stats.psi3 < 2) throw std::domain_error("s_hat: psi3 must be >= 2");
    const long double psi3 = static_cast<long double>(stats.psi3);
    const long double bl = static_cast<long double>(b);
    const long double x =
        (std::log(psi3) + std::log(std::log(psi3)) - 3.0L * std::log(bl)) / std::log(7.0L) - 2.0L;
    const int first = static_cast<int>(std::ceil(x));
    // smallest q >= 0 with 2^(6q) >= gamma^7, i.e. q = ceil((7/6) log2 gamma)
    const BigInt g7 = big_pow(gamma, 7);
    int q = 0;
    BigInt pow2 = 1;
    while (pow2 < g7) {
        pow2 <<= 6;
        ++q;
    }
    return first - q;
}

namespace {

// DFS over bit positions; at each position the per-position pattern of
// (x_bit, y_bit, z_bit) is one of the 7 nonzero combinations, so survival
// holds by construction and only the weight caps need tracking.
void count_rec(int pos, int s, int cap3, int cap4, int wx, int wy, int wz, int wxy, int wxz,
               int wyz, std::uint64_t& count) {
    if (wx > cap3 || wy > cap3 || wz > cap3 || wxy > cap4 || wxz > cap4 || wyz > cap4) return;
    if (pos == s) {
        ++count;
        return;
    }
    for (int pat = 1; pat < 8; ++pat) {
        const int xb = pat & 1, yb = (pat >> 1) & 1, zb = (pat >> 2) & 1;
        count_rec(pos + 1, s, cap3, cap4, wx + xb, wy + yb, wz + zb, wxy + (xb | yb),
                  wxz + (xb | zb), wyz + (yb | zb), count);
    }
}

}  // namespace

CandidateCount count_candidates(int s) {
    if (s < 1 || s > 9)
        throw std::invalid_argument("count_candidates: s must be in [1,9] for exhaustive mode");
    const int cap3 = (4 * s) / 7;
    const int cap4 = (6 * s) / 7;
    std::uint64_t count = 0;
    count_rec(0, s, cap3, cap4, 0, 0, 0, 0, 0, 0, count);
    double seven = 1.0;
    for (int i = 0; i < s; ++i) seven *= 7.0;
    return {count, static_cast<double>(count) / seven};
}

SkewReport check_skew(const pseudomul::PseudoParams& p, const InstanceStats& stats) {
    p.validate();
    SkewReport r;
    const double b = static_cast<double>(p.b);
    const double psi1 = static_cast<double>(stats.psi1);
    const double psi2 = static_cast<double>(stats.psi2);
    const double psi3 = static_cast<double>(stats.psi3);
    r.ratio1 = std::pow(25.0 / 7.0, p.s) * b * b * psi1 / psi3;
    r.ratio2 = std::pow(13.0 / 7.0, p.s) * b * psi2 / psi3;
    r.warn1 = r.ratio1 > 0.1;
    r.warn2 = r.ratio2 > 0.1;
    r.poly1_ok = std::pow(psi3, 0.345) >= psi1;
    r.poly2_ok = std::pow(psi3, 0.681) >= psi2;
    r.apx1_ok = std::pow(psi3, 0.350) >= psi1;
    r.apx2_ok = std::pow(psi3, 0.694) >= psi2;
    return r;
}

JansonStats JansonStats::compute(const pseudomul::PseudoParams& p, const InstanceStats& st) {
    JansonStats j;
    j.mu = analysis::mu(p, st);
    j.delta_upper = analysis::delta_bound(p, st);
    j.s = p.s;
    j.b = p.b;
    j.stats = st;
    return j;
}

}  // namespace obmm::analysis
