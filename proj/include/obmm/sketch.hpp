#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "obmm/bitmatrix.hpp"
#include "obmm/instance_stats.hpp"
#include "obmm/pseudomul.hpp"

// Randomized reduction from Boolean matrix product to one pseudo-product:
// sample index maps f1: [m]->[d1], f2: [m]->[d2], f3: [m]->[d3] and a random
// m x m GF(2) mask D, lift the inputs to m x m, take the GF(2) pseudo-product,
// and project back by OR over preimages. The estimate never contains a one
// where the true product has a zero (one-sided error).
namespace obmm::sketch {

struct SampleMaps {
    std::vector<std::uint32_t> f1, f2, f3;
    BitMatrix d_mask;
    std::uint64_t seed = 0;
};

// Fully determined by (seed, params.m(), stats): f1, f2, f3 are drawn from
// streams 0, 1, 2 and D row-major by word from stream 3 (see obmm/rng.hpp).
SampleMaps draw_sample_maps(const InstanceStats& stats, const pseudomul::PseudoParams& params,
                            std::uint64_t seed);

// Lifted operands: Abar[x][z] = A[f1(x)][f3(z)],
// Bbar[z][y] = B[f3(z)][f2(y)] AND D[z][y].
std::pair<BitMatrix, BitMatrix> lift(const BitMatrix& a, const BitMatrix& b,
                                     const SampleMaps& maps);

// Projection: Ctilde[i][j] = OR over x in f1^-1(i), y in f2^-1(j) of Cbar[x][y].
BitMatrix project(const BitMatrix& cbar, const SampleMaps& maps, const InstanceStats& stats);

struct SketchConfig {
    pseudomul::PseudoParams params;
    std::uint64_t seed = 0;
};

// One full sketch pass: draw maps, lift, pseudo-product, project.
BitMatrix bmm_estimate(const BitMatrix& a, const BitMatrix& b, const SketchConfig& cfg,
                       pseudomul::CounterReport* rep = nullptr);

// Same pass with caller-supplied maps (property tests vary D directly).
BitMatrix bmm_estimate_with_maps(const BitMatrix& a, const BitMatrix& b, const SampleMaps& maps,
                                 const pseudomul::PseudoParams& params,
                                 pseudomul::CounterReport* rep = nullptr);

struct BmmOptions {
    std::uint64_t seed = 0;
    double delta = 0.0;   // <= 0 means 1/psi3
    std::int64_t b = 64;  // base block size for the sketch path
};

struct BmmResult {
    BitMatrix c;
    bool used_naive = false;
    pseudomul::PseudoParams params;  // meaningful when !used_naive
    pseudomul::CounterReport counters;
    InstanceStats stats;
    double delta = 0.0;
};

// Top-level Boolean product: selects s from the failure budget, falls back to
// the exact row-combine product when the instance is small enough that the
// sketch cannot win (b^3 6^s >= psi3 or every dimension <= 64).
BmmResult bmm(const BitMatrix& a, const BitMatrix& b, const BmmOptions& opts = {});

}  // namespace obmm::sketch
