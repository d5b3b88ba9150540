#include "obmm/sketch.hpp"

#include <stdexcept>

#include "obmm/analysis.hpp"
#include "obmm/kernels.hpp"
#include "obmm/rng.hpp"

namespace obmm::sketch {

namespace {

InstanceStats stats_for(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("inner dimensions disagree");
    return InstanceStats::make(static_cast<std::uint64_t>(a.rows()),
                               static_cast<std::uint64_t>(b.cols()),
                               static_cast<std::uint64_t>(a.cols()));
}

std::vector<std::uint32_t> draw_map(std::uint64_t seed, std::uint64_t stream, std::int64_t m,
                                    std::uint32_t bound) {
    std::vector<std::uint32_t> f(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i)
        f[static_cast<std::size_t>(i)] =
            rng::uniform_below(rng::at(seed, stream, static_cast<std::uint64_t>(i)), bound);
    return f;
}

}  // namespace

SampleMaps draw_sample_maps(const InstanceStats& stats, const pseudomul::PseudoParams& params,
                            std::uint64_t seed) {
    params.validate();
    const std::int64_t m = params.m();
    SampleMaps maps;
    maps.seed = seed;
    maps.f1 = draw_map(seed, rng::kStreamF1, m, static_cast<std::uint32_t>(stats.d1));
    maps.f2 = draw_map(seed, rng::kStreamF2, m, static_cast<std::uint32_t>(stats.d2));
    maps.f3 = draw_map(seed, rng::kStreamF3, m, static_cast<std::uint32_t>(stats.d3));
    maps.d_mask = BitMatrix(m, m);
    const std::size_t stride = maps.d_mask.words_per_row();
    const int tail = static_cast<int>(m & 63);
    const std::uint64_t tail_mask = tail ? ((std::uint64_t(1) << tail) - 1) : ~std::uint64_t(0);
    for (std::int64_t z = 0; z < m; ++z) {
        std::uint64_t* row = maps.d_mask.row(z);
        for (std::size_t w = 0; w < stride; ++w)
            row[w] = rng::at(seed, rng::kStreamD, static_cast<std::uint64_t>(z) * stride + w);
        row[stride - 1] &= tail_mask;
    }
    return maps;
}

std::pair<BitMatrix, BitMatrix> lift(const BitMatrix& a, const BitMatrix& b,
                                     const SampleMaps& maps) {
    const InstanceStats stats = stats_for(a, b);
    const std::int64_t m = static_cast<std::int64_t>(maps.f1.size());
    if (maps.f2.size() != maps.f1.size() || maps.f3.size() != maps.f1.size() ||
        maps.d_mask.rows() != m || maps.d_mask.cols() != m)
        throw std::invalid_argument("lift: inconsistent sample maps");
    (void)stats;

    // Gather tables: ga[i][z] = A[i][f3(z)], gb[k][y] = B[k][f2(y)]. Lifted
    // rows are then whole-row copies/ANDs, which keeps the hot loop word-wide.
    BitMatrix ga(a.rows(), m);
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t z = 0; z < m; ++z)
            if (a.get(i, maps.f3[static_cast<std::size_t>(z)])) ga.set(i, z, true);
    BitMatrix gb(b.rows(), m);
    for (std::int64_t k = 0; k < b.rows(); ++k)
        for (std::int64_t y = 0; y < m; ++y)
            if (b.get(k, maps.f2[static_cast<std::size_t>(y)])) gb.set(k, y, true);

    BitMatrix abar(m, m), bbar(m, m);
    const auto& kr = kernels::active();
    const std::size_t stride = abar.words_per_row();
    for (std::int64_t x = 0; x < m; ++x) {
        const std::uint64_t* src = ga.row(maps.f1[static_cast<std::size_t>(x)]);
        std::uint64_t* dst = abar.row(x);
        for (std::size_t w = 0; w < stride; ++w) dst[w] = src[w];
    }
    for (std::int64_t z = 0; z < m; ++z)
        kr.and_words(bbar.row(z), gb.row(maps.f3[static_cast<std::size_t>(z)]),
                     maps.d_mask.row(z), stride);
    return {std::move(abar), std::move(bbar)};
}

BitMatrix project(const BitMatrix& cbar, const SampleMaps& maps, const InstanceStats& stats) {
    const std::int64_t m = cbar.rows();
    if (cbar.cols() != m || static_cast<std::int64_t>(maps.f1.size()) != m)
        throw std::invalid_argument("project: shape mismatch");
    // Fold rows first (word-parallel OR into d1 buckets), then columns.
    BitMatrix folded(static_cast<std::int64_t>(stats.d1), m);
    const auto& kr = kernels::active();
    const std::size_t stride = cbar.words_per_row();
    for (std::int64_t x = 0; x < m; ++x)
        kr.or_words(folded.row(maps.f1[static_cast<std::size_t>(x)]), cbar.row(x), stride);
    BitMatrix c(static_cast<std::int64_t>(stats.d1), static_cast<std::int64_t>(stats.d2));
    for (std::int64_t i = 0; i < folded.rows(); ++i)
        for (std::int64_t y = 0; y < m; ++y)
            if (folded.get(i, y)) c.set(i, maps.f2[static_cast<std::size_t>(y)], true);
    return c;
}

BitMatrix bmm_estimate_with_maps(const BitMatrix& a, const BitMatrix& b, const SampleMaps& maps,
                                 const pseudomul::PseudoParams& params,
                                 pseudomul::CounterReport* rep) {
    const InstanceStats stats = stats_for(a, b);
    auto [abar, bbar] = lift(a, b, maps);
    const BitMatrix cbar = pseudomul::pseudo_product<pseudomul::Gf2Ring>(abar, bbar, params, rep);
    return project(cbar, maps, stats);
}

BitMatrix bmm_estimate(const BitMatrix& a, const BitMatrix& b, const SketchConfig& cfg,
                       pseudomul::CounterReport* rep) {
    const InstanceStats stats = stats_for(a, b);
    const SampleMaps maps = draw_sample_maps(stats, cfg.params, cfg.seed);
    return bmm_estimate_with_maps(a, b, maps, cfg.params, rep);
}

BmmResult bmm(const BitMatrix& a, const BitMatrix& b, const BmmOptions& opts) {
    BmmResult res;
    res.stats = stats_for(a, b);
    res.delta = opts.delta > 0.0 ? opts.delta : 1.0 / static_cast<double>(res.stats.psi3);
    if (res.delta >= 1.0) res.delta = 0.5;  // 1x1x1 corner: any delta works
    const int s = analysis::select_s(res.stats, opts.b, res.delta);
    res.params = {s, opts.b};

    // Exact path when the sketch cannot beat the row-combine product.
    bool naive = res.stats.max_dim() <= 64;
    if (!naive) {
        unsigned __int128 work = static_cast<unsigned __int128>(opts.b) * opts.b * opts.b;
        for (int i = 0; i < s && work < (static_cast<unsigned __int128>(1) << 100); ++i)
            work *= 6;
        naive = work >= res.stats.psi3;
    }
    if (!naive && res.params.m() > (std::int64_t(1) << 24)) naive = true;

    if (naive) {
        res.used_naive = true;
        res.c = bool_mul_naive(a, b);
        return res;
    }
    res.c = bmm_estimate(a, b, {res.params, opts.seed}, &res.counters);
    return res;
}

}  // namespace obmm::sketch
