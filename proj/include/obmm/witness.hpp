#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "obmm/bitmatrix.hpp"
#include "obmm/pseudomul.hpp"
#include "obmm/sketch.hpp"

// Witness recovery: index payloads ride through the pseudo-product as GF(2)
// bit-planes, isolated survivors decode to a witness index, and a geometric
// schedule of trials over s plus a random-permutation fallback scan turns the
// per-entry estimates into a witness matrix.
namespace obmm::witness {

// d1 x d2 table of witness indices; entries are 1-based (k means column k-1 of
// A / row k-1 of B), 0 means "no witness found".
class WitnessMatrix {
public:
    WitnessMatrix() = default;
    WitnessMatrix(std::int64_t rows, std::int64_t cols);

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    std::uint32_t get(std::int64_t i, std::int64_t j) const { return data_[idx(i, j)]; }
    void set(std::int64_t i, std::int64_t j, std::uint32_t k) { data_[idx(i, j)] = k; }

    bool operator==(const WitnessMatrix&) const = default;

private:
    std::size_t idx(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<std::uint32_t> data_;
};

// True iff k is a valid 1-based witness for entry (i,j): A[i][k-1] = B[k-1][j] = 1.
bool witness_entry_valid(const BitMatrix& a, const BitMatrix& b, std::int64_t i, std::int64_t j,
                         std::uint32_t k);

// One estimation pass at parameters p: draws sample maps (the mask D included,
// fresh per call), lifts A, encodes payload f3(z)+1 as L = ceil(log2(d3+1))
// bit-planes masked by B and D, takes the bit-plane pseudo-product, decodes
// every (x,y) cell, and keeps decodes that pass the validity check. Entries
// never set remain 0.
WitnessMatrix witness_estimate(const BitMatrix& a, const BitMatrix& b,
                               const pseudomul::PseudoParams& p, std::uint64_t seed,
                               pseudomul::CounterReport* rep = nullptr);

// Same pass with caller-supplied maps (tests craft specific isolation setups).
WitnessMatrix witness_estimate_with_maps(const BitMatrix& a, const BitMatrix& b,
                                         const sketch::SampleMaps& maps,
                                         const pseudomul::PseudoParams& p,
                                         pseudomul::CounterReport* rep = nullptr);

struct WbmmOptions {
    std::uint64_t seed = 0;
    std::int64_t b = 64;
    double delta = 0.0;  // forwarded to the product estimate; <= 0 means 1/psi3
};

struct StageStats {
    int s = 0;
    std::uint64_t trials = 0;
    pseudomul::CounterReport counters;  // summed over the stage's trials
};

struct WbmmResult {
    WitnessMatrix w;
    sketch::BmmResult product;  // the estimate C-tilde driving the fallback scan
    int s_max = 0;
    std::vector<StageStats> stages;
    std::uint64_t fallback_probes = 0;
};

// Full witness pipeline: product estimate, then for s = 0..s_max
// (s_max = ceil(log7(psi3 ln(psi3) / b^3)), clamped at 0) run
// t(s) = 20 * 4^(s_max - s) independent estimation trials merging non-zero
// entries last-write-wins, then scan the still-empty one-entries of C-tilde in
// a random permutation order. If C-tilde equals the exact Boolean product, the
// result is complete and every entry valid, deterministically.
WbmmResult wbmm(const BitMatrix& a, const BitMatrix& b, const WbmmOptions& opts = {});

// Fallback scan, in place: one uniform permutation pi of [d3]; for every (i,j)
// with c_estimate 1 and w empty, probe k in pi order until a witness hits.
// Returns the total number of probes.
std::uint64_t fallback_scan(const BitMatrix& a, const BitMatrix& b, const BitMatrix& c_estimate,
                            WitnessMatrix& w, std::uint64_t seed);

// Observable form: same scan against a copy of w_partial, count only.
std::uint64_t fallback_scan_cost(const BitMatrix& a, const BitMatrix& b,
                                 const WitnessMatrix& w_partial, const BitMatrix& c_estimate,
                                 std::uint64_t seed);

// WMAT/1 text format:
//   WMAT 1
//   <d1> <d2>
//   d1 lines of d2 single-space-separated integers (0 = no witness)
// Strict parser, line-numbered errors, same conventions as BMAT/1.
std::string to_wmat(const WitnessMatrix& w);
WitnessMatrix parse_wmat(std::string_view text);
WitnessMatrix load_wmat(const std::filesystem::path& path);
void save_wmat(const std::filesystem::path& path, const WitnessMatrix& w);

}  // namespace obmm::witness
