#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "obmm/bitmatrix.hpp"
#include "obmm/witness.hpp"

namespace fs = std::filesystem;
using obmm::BitMatrix;

namespace {

struct RunResult {
    int code = -1;
    std::string out;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("OBMM_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "OBMM_BIN must point at the obmm binary");
    const std::string cmd = "\"" + std::string(bin) + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = pclose(pipe);
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

bool has_line(const std::string& out, const std::string& needle) {
    return out.find(needle) != std::string::npos;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("obmm_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const char* name) const { return (path / name).string(); }
    static inline int counter = 0;
};

std::string q(const std::string& p) { return "\"" + p + "\""; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("mul --algo naive computes the Boolean product") {
    TempDir tmp;
    const BitMatrix a = BitMatrix::random(9, 7, 1, 0.4);
    const BitMatrix b = BitMatrix::random(7, 5, 2, 0.4);
    obmm::save_bmat(tmp.file("a.bmat"), a);
    obmm::save_bmat(tmp.file("b.bmat"), b);
    const RunResult r = run_cli("mul " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) +
                                " --out " + q(tmp.file("c.bmat")) + " --algo naive");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(has_line(r.out, "algo = naive"));
    CHECK(obmm::load_bmat(tmp.file("c.bmat")) == obmm::bool_mul_naive(a, b));
}

TEST_CASE("mul --algo strassen matches naive GF(2) recursion from the CLI") {
    TempDir tmp;
    const BitMatrix a = BitMatrix::random(16, 16, 3, 0.5);
    const BitMatrix b = BitMatrix::random(16, 16, 4, 0.5);
    obmm::save_bmat(tmp.file("a.bmat"), a);
    obmm::save_bmat(tmp.file("b.bmat"), b);
    const RunResult r = run_cli("mul " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) +
                                " --out " + q(tmp.file("c.bmat")) + " --algo strassen --b 4");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(has_line(r.out, "algo = strassen"));
    CHECK(obmm::load_bmat(tmp.file("c.bmat")) == obmm::gf2_mul_naive(a, b));
}

TEST_CASE("mul default sketch on a small instance takes the exact fallback") {
    TempDir tmp;
    const BitMatrix a = BitMatrix::random(8, 8, 5, 0.5);
    obmm::save_bmat(tmp.file("a.bmat"), a);
    const RunResult r = run_cli("mul " + q(tmp.file("a.bmat")) + " " + q(tmp.file("a.bmat")) +
                                " --out " + q(tmp.file("c.bmat")));
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(has_line(r.out, "algo = sketch"));
    CHECK(has_line(r.out, "path = exact-fallback"));
    CHECK(obmm::load_bmat(tmp.file("c.bmat")) == obmm::bool_mul_naive(a, a));
}

TEST_CASE("mul sketch sampled path reports parameters and stays one-sided") {
    TempDir tmp;
    const BitMatrix a = BitMatrix::random(74, 74, 6, 0.15);
    const BitMatrix b = BitMatrix::random(74, 74, 7, 0.15);
    obmm::save_bmat(tmp.file("a.bmat"), a);
    obmm::save_bmat(tmp.file("b.bmat"), b);
    const std::string cmd = "mul " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) +
                            " --out " + q(tmp.file("c.bmat")) +
                            " --b 2 --delta 0.5 --seed 11";
    const RunResult r = run_cli(cmd);
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(has_line(r.out, "path = sampled"));
    CHECK(has_line(r.out, "s = 6"));
    CHECK(has_line(r.out, "m = 128"));
    CHECK(has_line(r.out, "base_mults = 46656"));
    const BitMatrix c = obmm::load_bmat(tmp.file("c.bmat"));
    CHECK(obmm::is_subset(c, obmm::bool_mul_naive(a, b)));
    // byte-identical rerun
    const std::string first = obmm::to_bmat(c);
    REQUIRE(run_cli(cmd).code == 0);
    CHECK(obmm::to_bmat(obmm::load_bmat(tmp.file("c.bmat"))) == first);
}

TEST_CASE("witness on the identity emits the diagonal table and its schedule") {
    TempDir tmp;
    obmm::save_bmat(tmp.file("i.bmat"), BitMatrix::identity(4));
    const RunResult r = run_cli("witness " + q(tmp.file("i.bmat")) + " " + q(tmp.file("i.bmat")) +
                                " --out " + q(tmp.file("w.wmat")) + " --b 1");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(has_line(r.out, "s_max = 3"));
    CHECK(has_line(r.out, "stage s=0 trials=1280"));
    CHECK(has_line(r.out, "stage s=1 trials=320"));
    CHECK(has_line(r.out, "stage s=2 trials=80"));
    CHECK(has_line(r.out, "stage s=3 trials=20"));
    CHECK(has_line(r.out, "fallback_probes = "));
    const auto w = obmm::witness::load_wmat(tmp.file("w.wmat"));
    for (std::int64_t i = 0; i < 4; ++i)
        for (std::int64_t j = 0; j < 4; ++j)
            CHECK(w.get(i, j) == (i == j ? std::uint32_t(i) + 1 : 0));
}

TEST_CASE("verify passes a correct product/witness pair and flags corruption") {
    TempDir tmp;
    const BitMatrix a = BitMatrix::random(12, 12, 8, 0.3);
    const BitMatrix b = BitMatrix::random(12, 12, 9, 0.3);
    obmm::save_bmat(tmp.file("a.bmat"), a);
    obmm::save_bmat(tmp.file("b.bmat"), b);
    REQUIRE(run_cli("mul " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) + " --out " +
                    q(tmp.file("c.bmat")) + " --algo naive")
                .code == 0);
    REQUIRE(run_cli("witness " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) +
                    " --out " + q(tmp.file("w.wmat")) + " --b 1")
                .code == 0);

    const RunResult ok = run_cli("verify " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) +
                                 " --product " + q(tmp.file("c.bmat")) + " --witness " +
                                 q(tmp.file("w.wmat")));
    REQUIRE_MESSAGE(ok.code == 0, ok.out);
    CHECK(has_line(ok.out, "false_positives = 0"));
    CHECK(has_line(ok.out, "false_negatives = 0"));
    CHECK(has_line(ok.out, "witness_violations = 0"));
    CHECK(has_line(ok.out, "witness_missing = 0"));
    CHECK(has_line(ok.out, "verdict = OK"));

    // corrupt one witness entry: point a lit cell at an index that cannot work
    auto w = obmm::witness::load_wmat(tmp.file("w.wmat"));
    const BitMatrix truth = obmm::bool_mul_naive(a, b);
    bool planted = false;
    for (std::int64_t i = 0; i < 12 && !planted; ++i)
        for (std::int64_t j = 0; j < 12 && !planted; ++j)
            if (truth.get(i, j)) {
                for (std::uint32_t k = 1; k <= 12 && !planted; ++k)
                    if (!obmm::witness::witness_entry_valid(a, b, i, j, k)) {
                        w.set(i, j, k);
                        planted = true;
                    }
            }
    REQUIRE(planted);
    obmm::witness::save_wmat(tmp.file("w.wmat"), w);
    const RunResult bad = run_cli("verify " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) +
                                  " --witness " + q(tmp.file("w.wmat")));
    CHECK(bad.code == 2);
    CHECK(has_line(bad.out, "witness_violations = 1"));
    CHECK(has_line(bad.out, "verdict = FAIL"));

    // a product with an extra one is a false positive
    BitMatrix c = truth;
    bool flipped = false;
    for (std::int64_t i = 0; i < 12 && !flipped; ++i)
        for (std::int64_t j = 0; j < 12 && !flipped; ++j)
            if (!c.get(i, j)) {
                c.set(i, j, true);
                flipped = true;
            }
    REQUIRE(flipped);
    obmm::save_bmat(tmp.file("cbad.bmat"), c);
    const RunResult fp = run_cli("verify " + q(tmp.file("a.bmat")) + " " + q(tmp.file("b.bmat")) +
                                 " --product " + q(tmp.file("cbad.bmat")));
    CHECK(fp.code == 2);
    CHECK(has_line(fp.out, "false_positives = 1"));
    CHECK(has_line(fp.out, "verdict = FAIL"));
}

TEST_CASE("bench emits counter-exact CSV rows") {
    TempDir tmp;
    const RunResult r =
        run_cli("bench --s-range 0:3 --b 8 --out " + q(tmp.file("bench.csv")));
    REQUIRE_MESSAGE(r.code == 0, r.out);
    std::string csv;
    {
        std::FILE* f = std::fopen(tmp.file("bench.csv").c_str(), "rb");
        REQUIRE(f != nullptr);
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) csv.append(buf, n);
        std::fclose(f);
    }
    CHECK(csv.rfind("s,m,base_mults,block_adds,wall_ms\n", 0) == 0);
    CHECK(has_line(csv, "\n0,8,1,0,"));
    CHECK(has_line(csv, "\n1,16,6,14,"));
    CHECK(has_line(csv, "\n2,32,36,140,"));
    CHECK(has_line(csv, "\n3,64,216,1064,"));
}

TEST_CASE("stats reports the worked parameter values") {
    const RunResult r = run_cli("stats --d1 128 --d2 128 --d3 128 --b 1 --s 2");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(has_line(r.out, "psi1 = 384"));
    CHECK(has_line(r.out, "psi2 = 49152"));
    CHECK(has_line(r.out, "psi3 = 2097152"));
    CHECK(has_line(r.out, "select_s = 10"));
    CHECK(has_line(r.out, "s_hat = 7"));
    CHECK(has_line(r.out, "mu = 49/2097152"));
    CHECK(has_line(r.out, "delta_bound = 66771/34359738368"));
    CHECK(has_line(r.out, "alpha1 = 24.7521"));
    CHECK(has_line(r.out, "alpha2 = 12.6801"));
    CHECK(has_line(r.out, "candidate_count = 0"));
    const RunResult g = run_cli("stats --d1 128 --d2 128 --d3 128 --b 1 --gamma 64");
    REQUIRE(g.code == 0);
    CHECK(has_line(g.out, "s_hat = 0"));
}

TEST_CASE("errors surface as nonzero exits with a message") {
    TempDir tmp;
    {
        std::FILE* f = std::fopen(tmp.file("junk.bmat").c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fputs("BMAT 1\n2 2\n11\n1x\n", f);
        std::fclose(f);
    }
    const RunResult bad = run_cli("mul " + q(tmp.file("junk.bmat")) + " " +
                                  q(tmp.file("junk.bmat")) + " --out " + q(tmp.file("c.bmat")) +
                                  " --algo naive");
    CHECK(bad.code == 1);
    CHECK(has_line(bad.out, "error: "));
    CHECK(has_line(bad.out, "line 4"));

    CHECK(run_cli("mul missing-lhs.bmat missing-rhs.bmat --algo naive").code != 0);  // no --out
    CHECK(run_cli("mul a b --out c --algo wat").code != 0);  // not in the member list
    CHECK(run_cli("").code != 0);                            // a subcommand is required
}

}  // TEST_SUITE
