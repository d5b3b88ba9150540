// obmm: Boolean / GF(2) matrix products and witness recovery from the
// command line. File formats: BMAT/1 (bit matrices) and WMAT/1 (witness
// tables). All randomness is derived from --seed (default 0); rerunning a
// command with the same flags reproduces its output byte for byte.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "obmm/analysis.hpp"
#include "obmm/bitmatrix.hpp"
#include "obmm/pseudomul.hpp"
#include "obmm/sketch.hpp"
#include "obmm/witness.hpp"

namespace {

using obmm::BitMatrix;

struct MulArgs {
    std::string a_path, b_path, out_path;
    std::string algo = "sketch";
    std::uint64_t seed = 0;
    std::int64_t b = 64;
    double delta = 0.0;
};

int run_mul(const MulArgs& args) {
    const BitMatrix a = obmm::load_bmat(args.a_path);
    const BitMatrix b = obmm::load_bmat(args.b_path);
    if (args.algo == "naive") {
        obmm::save_bmat(args.out_path, obmm::bool_mul_naive(a, b));
        std::cout << "algo = naive\n";
        return 0;
    }
    if (args.algo == "strassen") {
        // Exact product over GF(2) (xor accumulation), recursing down to --b.
        obmm::save_bmat(args.out_path, obmm::gf2_mul_strassen(a, b, args.b));
        std::cout << "algo = strassen\nbase = " << args.b << "\n";
        return 0;
    }
    const auto res = obmm::sketch::bmm(a, b, {args.seed, args.delta, args.b});
    obmm::save_bmat(args.out_path, res.c);
    std::cout << "algo = sketch\n";
    std::cout << "delta = " << res.delta << "\n";
    if (res.used_naive) {
        std::cout << "path = exact-fallback\n";
    } else {
        std::cout << "path = sampled\n";
        std::cout << "s = " << res.params.s << "\n";
        std::cout << "m = " << res.params.m() << "\n";
        std::cout << "base_mults = " << res.counters.base_mults << "\n";
        std::cout << "block_adds = " << res.counters.block_adds << "\n";
    }
    return 0;
}

struct WitnessArgs {
    std::string a_path, b_path, out_path;
    std::uint64_t seed = 0;
    std::int64_t b = 64;
    double delta = 0.0;
};

int run_witness(const WitnessArgs& args) {
    const BitMatrix a = obmm::load_bmat(args.a_path);
    const BitMatrix b = obmm::load_bmat(args.b_path);
    const auto res = obmm::witness::wbmm(a, b, {args.seed, args.b, args.delta});
    obmm::witness::save_wmat(args.out_path, res.w);
    std::cout << "s_max = " << res.s_max << "\n";
    for (const auto& st : res.stages)
        std::cout << "stage s=" << st.s << " trials=" << st.trials
                  << " base_mults=" << st.counters.base_mults
                  << " block_adds=" << st.counters.block_adds << "\n";
    std::cout << "fallback_probes = " << res.fallback_probes << "\n";
    return 0;
}

struct VerifyArgs {
    std::string a_path, b_path;
    std::string product_path, witness_path;
};

int run_verify(const VerifyArgs& args) {
    const BitMatrix a = obmm::load_bmat(args.a_path);
    const BitMatrix b = obmm::load_bmat(args.b_path);
    const BitMatrix oracle = obmm::bool_mul_naive(a, b);
    bool violation = false;

    if (!args.product_path.empty()) {
        const BitMatrix c = obmm::load_bmat(args.product_path);
        if (c.rows() != oracle.rows() || c.cols() != oracle.cols())
            throw std::runtime_error("product dimensions disagree with inputs");
        std::uint64_t fp = 0, fn = 0;
        for (std::int64_t i = 0; i < c.rows(); ++i)
            for (std::int64_t j = 0; j < c.cols(); ++j) {
                const bool got = c.get(i, j), want = oracle.get(i, j);
                if (got && !want) ++fp;
                if (!got && want) ++fn;
            }
        std::cout << "false_positives = " << fp << "\n";
        std::cout << "false_negatives = " << fn << "\n";
        if (fp != 0) violation = true;
    }

    if (!args.witness_path.empty()) {
        const auto w = obmm::witness::load_wmat(args.witness_path);
        if (w.rows() != oracle.rows() || w.cols() != oracle.cols())
            throw std::runtime_error("witness dimensions disagree with inputs");
        std::uint64_t invalid = 0, missing = 0;
        for (std::int64_t i = 0; i < w.rows(); ++i)
            for (std::int64_t j = 0; j < w.cols(); ++j) {
                const std::uint32_t k = w.get(i, j);
                if (k != 0 && !obmm::witness::witness_entry_valid(a, b, i, j, k)) ++invalid;
                if (k == 0 && oracle.get(i, j)) ++missing;
            }
        std::cout << "witness_violations = " << invalid << "\n";
        std::cout << "witness_missing = " << missing << "\n";
        if (invalid != 0) violation = true;
    }

    std::cout << (violation ? "verdict = FAIL\n" : "verdict = OK\n");
    return violation ? 2 : 0;
}

struct StatsArgs {
    std::uint64_t d1 = 0, d2 = 0, d3 = 0;
    int s = -1;  // -1: use select_s
    std::int64_t b = 64;
    double delta = 0.0;
    std::uint64_t gamma = 1;
};

int run_stats(const StatsArgs& args) {
    const auto stats = obmm::InstanceStats::make(args.d1, args.d2, args.d3);
    const double delta =
        args.delta > 0.0 ? args.delta : 1.0 / static_cast<double>(stats.psi3);
    const int sel = obmm::analysis::select_s(stats, args.b, delta < 1.0 ? delta : 0.5);
    const int s = args.s >= 0 ? args.s : sel;
    const obmm::pseudomul::PseudoParams p{s, args.b};
    p.validate();

    std::ostringstream out;
    out << "d1 = " << stats.d1 << "\nd2 = " << stats.d2 << "\nd3 = " << stats.d3 << "\n";
    out << "psi1 = " << stats.psi1 << "\npsi2 = " << stats.psi2 << "\npsi3 = " << stats.psi3
        << "\n";
    out << "b = " << p.b << "\ns = " << p.s << "\nm = " << p.m() << "\n";
    out << "delta = " << delta << "\n";
    out << "select_s = " << sel << "\n";
    const auto j = obmm::analysis::JansonStats::compute(p, stats);
    out << "mu = " << j.mu << "\n";
    out << "mu_real = " << static_cast<double>(j.mu) << "\n";
    out << "delta_bound = " << j.delta_upper << "\n";
    out << "delta_bound_real = " << static_cast<double>(j.delta_upper) << "\n";
    if (p.s >= 1)
        out << "delta_bound_appendix = " << obmm::analysis::delta_bound_appendix(p, stats)
            << "\n";
    if (stats.psi3 >= 2)
        out << "s_hat = " << obmm::analysis::s_hat(stats, args.b, args.gamma) << "\n";
    out << "gamma = " << args.gamma << "\n";
    const auto skew = obmm::analysis::check_skew(p, stats);
    out << "skew_ratio1 = " << skew.ratio1 << "\nskew_ratio2 = " << skew.ratio2 << "\n";
    out << "skew_warn1 = " << (skew.warn1 ? 1 : 0) << "\nskew_warn2 = " << (skew.warn2 ? 1 : 0)
        << "\n";
    out << "poly1_ok = " << (skew.poly1_ok ? 1 : 0) << "\npoly2_ok = " << (skew.poly2_ok ? 1 : 0)
        << "\n";
    out << "apx1_ok = " << (skew.apx1_ok ? 1 : 0) << "\napx2_ok = " << (skew.apx2_ok ? 1 : 0)
        << "\n";
    out << "alpha1 = " << obmm::analysis::BoundConstants::alpha1() << "\n";
    out << "alpha2 = " << obmm::analysis::BoundConstants::alpha2() << "\n";
    if (p.s >= 1 && p.s <= 9) {
        const auto cc = obmm::analysis::count_candidates(p.s);
        out << "candidate_count = " << cc.count << "\n";
        out << "candidate_ratio = " << cc.ratio << "\n";
    }
    std::cout << out.str();
    return 0;
}

struct BenchArgs {
    std::string s_range = "0:4";
    std::int64_t b = 64;
    std::uint64_t seed = 0;
    int trials = 1;
    std::string out_path;
};

int run_bench(const BenchArgs& args) {
    int lo = 0, hi = 0;
    {
        const auto colon = args.s_range.find(':');
        if (colon == std::string::npos) throw std::runtime_error("--s-range expects lo:hi");
        lo = std::stoi(args.s_range.substr(0, colon));
        hi = std::stoi(args.s_range.substr(colon + 1));
        if (lo < 0 || hi < lo) throw std::runtime_error("--s-range expects 0 <= lo <= hi");
    }
    std::ostringstream csv;
    csv << "s,m,base_mults,block_adds,wall_ms\n";
    for (int s = lo; s <= hi; ++s) {
        const obmm::pseudomul::PseudoParams p{s, args.b};
        p.validate();
        const std::int64_t m = p.m();
        const BitMatrix a = BitMatrix::random(m, m, args.seed * 2654435761u + 2 * s);
        const BitMatrix b = BitMatrix::random(m, m, args.seed * 2654435761u + 2 * s + 1);
        obmm::pseudomul::CounterReport rep;
        double best_ms = 0.0;
        for (int t = 0; t < std::max(1, args.trials); ++t) {
            rep = {};
            const auto t0 = std::chrono::steady_clock::now();
            const BitMatrix c = obmm::pseudomul::pseudo_product_gf2(a, b, p, &rep);
            const auto t1 = std::chrono::steady_clock::now();
            const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (t == 0 || ms < best_ms) best_ms = ms;
            (void)c;
        }
        std::uint64_t mults = 1, adds4 = 1, adds6 = 1;
        for (int i = 0; i < s; ++i) {
            mults *= 6;
            adds4 *= 4;
            adds6 *= 6;
        }
        const std::uint64_t want_adds = 7 * (adds6 - adds4);
        if (rep.base_mults != mults || rep.block_adds != want_adds) {
            std::cerr << "counter mismatch at s=" << s << ": got (" << rep.base_mults << ", "
                      << rep.block_adds << "), want (" << mults << ", " << want_adds << ")\n";
            return 1;
        }
        csv << s << ',' << m << ',' << rep.base_mults << ',' << rep.block_adds << ',' << best_ms
            << "\n";
    }
    if (args.out_path.empty())
        std::cout << csv.str();
    else
        obmm::atomic_write_file(args.out_path, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boolean matrix products and witness recovery via the opportunistic "
                 "Strassen pseudo-product"};
    app.require_subcommand(1);

    MulArgs mul_args;
    auto* mul = app.add_subcommand("mul", "Multiply two BMAT/1 matrices");
    mul->add_option("lhs", mul_args.a_path, "left operand (BMAT/1)")->required();
    mul->add_option("rhs", mul_args.b_path, "right operand (BMAT/1)")->required();
    mul->add_option("--out", mul_args.out_path, "output path (BMAT/1)")->required();
    mul->add_option("--algo", mul_args.algo, "naive | strassen | sketch")
        ->check(CLI::IsMember({"naive", "strassen", "sketch"}));
    mul->add_option("--seed", mul_args.seed, "RNG seed (default 0)");
    mul->add_option("--b", mul_args.b, "base block size (default 64)");
    mul->add_option("--delta", mul_args.delta, "failure budget (default 1/psi3)");

    WitnessArgs wit_args;
    auto* wit = app.add_subcommand("witness", "Compute a witness matrix (WMAT/1)");
    wit->add_option("lhs", wit_args.a_path, "left operand (BMAT/1)")->required();
    wit->add_option("rhs", wit_args.b_path, "right operand (BMAT/1)")->required();
    wit->add_option("--out", wit_args.out_path, "output path (WMAT/1)")->required();
    wit->add_option("--seed", wit_args.seed, "RNG seed (default 0)");
    wit->add_option("--b", wit_args.b, "base block size (default 64)");
    wit->add_option("--delta", wit_args.delta, "failure budget (default 1/psi3)");

    VerifyArgs ver_args;
    auto* ver = app.add_subcommand("verify", "Check a product and/or witness file");
    ver->add_option("lhs", ver_args.a_path, "left operand (BMAT/1)")->required();
    ver->add_option("rhs", ver_args.b_path, "right operand (BMAT/1)")->required();
    ver->add_option("--product", ver_args.product_path, "product to check (BMAT/1)");
    ver->add_option("--witness", ver_args.witness_path, "witness table to check (WMAT/1)");

    StatsArgs st_args;
    auto* st = app.add_subcommand("stats", "Report parameter formulas and bounds");
    st->add_option("--d1", st_args.d1, "rows of A")->required();
    st->add_option("--d2", st_args.d2, "cols of B")->required();
    st->add_option("--d3", st_args.d3, "inner dimension")->required();
    st->add_option("--s", st_args.s, "recursion depth (default: select_s)");
    st->add_option("--b", st_args.b, "base block size (default 64)");
    st->add_option("--delta", st_args.delta, "failure budget (default 1/psi3)");
    st->add_option("--gamma", st_args.gamma, "witness count for s_hat (default 1)");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Counter/wall-time sweep of the pseudo-product");
    bench->add_option("--s-range", bench_args.s_range, "lo:hi sweep range (default 0:4)");
    bench->add_option("--b", bench_args.b, "base block size (default 64)");
    bench->add_option("--seed", bench_args.seed, "RNG seed (default 0)");
    bench->add_option("--trials", bench_args.trials, "timing repetitions (default 1)");
    bench->add_option("--out", bench_args.out_path, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (mul->parsed()) return run_mul(mul_args);
        if (wit->parsed()) return run_witness(wit_args);
        if (ver->parsed()) return run_verify(ver_args);
        if (st->parsed()) return run_stats(st_args);
        if (bench->parsed()) return run_bench(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
