#include "obmm/witness.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "obmm/kernels.hpp"
#include "obmm/rng.hpp"

namespace obmm::witness {

WitnessMatrix::WitnessMatrix(std::int64_t rows, std::int64_t cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("witness matrix dimensions must be positive");
    if (rows > (std::int64_t(1) << 24) || cols > (std::int64_t(1) << 24))
        throw std::invalid_argument("witness matrix dimension too large");
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

bool witness_entry_valid(const BitMatrix& a, const BitMatrix& b, std::int64_t i, std::int64_t j,
                         std::uint32_t k) {
    if (k == 0 || static_cast<std::int64_t>(k) > a.cols()) return false;
    const std::int64_t kk = static_cast<std::int64_t>(k) - 1;
    return a.get(i, kk) && b.get(kk, j);
}

WitnessMatrix witness_estimate_with_maps(const BitMatrix& a, const BitMatrix& b,
                                         const sketch::SampleMaps& maps,
                                         const pseudomul::PseudoParams& p,
                                         pseudomul::CounterReport* rep) {
    if (a.cols() != b.rows()) throw std::invalid_argument("inner dimensions disagree");
    const std::int64_t d1 = a.rows(), d2 = b.cols(), d3 = a.cols();
    const std::int64_t m = p.m();
    if (static_cast<std::int64_t>(maps.f1.size()) != m || maps.d_mask.rows() != m)
        throw std::invalid_argument("witness_estimate: maps disagree with parameters");
    const int planes = std::bit_width(static_cast<std::uint64_t>(d3));  // ceil(log2(d3+1))

    // Lifted left operand, via a gather table as in the product sketch.
    BitMatrix ga(d1, m);
    for (std::int64_t i = 0; i < d1; ++i)
        for (std::int64_t z = 0; z < m; ++z)
            if (a.get(i, maps.f3[static_cast<std::size_t>(z)])) ga.set(i, z, true);
    BitMatrix abar(m, m);
    const std::size_t stride = abar.words_per_row();
    for (std::int64_t x = 0; x < m; ++x) {
        const std::uint64_t* src = ga.row(maps.f1[static_cast<std::size_t>(x)]);
        std::uint64_t* dst = abar.row(x);
        for (std::size_t w = 0; w < stride; ++w) dst[w] = src[w];
    }

    // Payload planes: row z of plane l carries bit l of f3(z)+1 wherever
    // B[f3(z)][f2(y)] AND D[z][y] is set.
    BitMatrix gb(d3, m);
    for (std::int64_t k = 0; k < d3; ++k)
        for (std::int64_t y = 0; y < m; ++y)
            if (b.get(k, maps.f2[static_cast<std::size_t>(y)])) gb.set(k, y, true);
    pseudomul::BitPlanes payload(static_cast<std::size_t>(planes), m, m);
    const auto& kr = kernels::active();
    std::vector<std::uint64_t> masked(stride);
    for (std::int64_t z = 0; z < m; ++z) {
        const std::uint32_t fz = maps.f3[static_cast<std::size_t>(z)];
        kr.and_words(masked.data(), gb.row(fz), maps.d_mask.row(z), stride);
        const std::uint32_t code = fz + 1;
        for (int l = 0; l < planes; ++l) {
            if (!((code >> l) & 1)) continue;
            std::uint64_t* dst = payload[static_cast<std::size_t>(l)].row(z);
            for (std::size_t w = 0; w < stride; ++w) dst[w] = masked[w];
        }
    }

    const pseudomul::BitPlanes cbar = pseudomul::pseudo_product_bitplanes(abar, payload, p, rep);

    WitnessMatrix w(d1, d2);
    for (std::int64_t x = 0; x < m; ++x) {
        const std::int64_t i = maps.f1[static_cast<std::size_t>(x)];
        for (std::int64_t y = 0; y < m; ++y) {
            std::uint32_t code = 0;
            for (int l = 0; l < planes; ++l)
                code |= static_cast<std::uint32_t>(cbar[static_cast<std::size_t>(l)].get(x, y))
                        << l;
            if (code == 0) continue;
            const std::int64_t j = maps.f2[static_cast<std::size_t>(y)];
            if (witness_entry_valid(a, b, i, j, code)) w.set(i, j, code);
        }
    }
    return w;
}

WitnessMatrix witness_estimate(const BitMatrix& a, const BitMatrix& b,
                               const pseudomul::PseudoParams& p, std::uint64_t seed,
                               pseudomul::CounterReport* rep) {
    if (a.cols() != b.rows()) throw std::invalid_argument("inner dimensions disagree");
    const InstanceStats stats = InstanceStats::make(static_cast<std::uint64_t>(a.rows()),
                                                    static_cast<std::uint64_t>(b.cols()),
                                                    static_cast<std::uint64_t>(a.cols()));
    const sketch::SampleMaps maps = sketch::draw_sample_maps(stats, p, seed);
    return witness_estimate_with_maps(a, b, maps, p, rep);
}

namespace {

int compute_s_max(const InstanceStats& stats, std::int64_t b) {
    // ceil(log7(psi3 ln(psi3) / b^3)), clamped at 0.
    const long double psi3 = static_cast<long double>(stats.psi3);
    if (psi3 < 2.0L) return 0;
    const long double arg =
        psi3 * std::log(psi3) / (static_cast<long double>(b) * b * static_cast<long double>(b));
    if (arg <= 1.0L) return 0;
    const int s = static_cast<int>(std::ceil(std::log(arg) / std::log(7.0L)));
    return s < 0 ? 0 : s;
}

}  // namespace

std::uint64_t fallback_scan(const BitMatrix& a, const BitMatrix& b, const BitMatrix& c_estimate,
                            WitnessMatrix& w, std::uint64_t seed) {
    if (a.cols() != b.rows()) throw std::invalid_argument("inner dimensions disagree");
    if (c_estimate.rows() != a.rows() || c_estimate.cols() != b.cols() ||
        w.rows() != a.rows() || w.cols() != b.cols())
        throw std::invalid_argument("fallback_scan: shape mismatch");
    const std::int64_t d3 = a.cols();
    std::vector<std::uint32_t> perm(static_cast<std::size_t>(d3));
    std::iota(perm.begin(), perm.end(), 0);
    for (std::int64_t i = d3 - 1; i > 0; --i) {
        const std::uint32_t j = rng::uniform_below(
            rng::at(seed, 0, static_cast<std::uint64_t>(i)), static_cast<std::uint32_t>(i) + 1);
        std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
    }
    std::uint64_t probes = 0;
    for (std::int64_t i = 0; i < w.rows(); ++i)
        for (std::int64_t j = 0; j < w.cols(); ++j) {
            if (!c_estimate.get(i, j) || w.get(i, j) != 0) continue;
            for (const std::uint32_t k : perm) {
                ++probes;
                if (a.get(i, k) && b.get(k, j)) {
                    w.set(i, j, k + 1);
                    break;
                }
            }
        }
    return probes;
}

std::uint64_t fallback_scan_cost(const BitMatrix& a, const BitMatrix& b,
                                 const WitnessMatrix& w_partial, const BitMatrix& c_estimate,
                                 std::uint64_t seed) {
    WitnessMatrix scratch = w_partial;
    return fallback_scan(a, b, c_estimate, scratch, seed);
}

WbmmResult wbmm(const BitMatrix& a, const BitMatrix& b, const WbmmOptions& opts) {
    WbmmResult res;
    res.product = sketch::bmm(a, b, {rng::derive_seed(opts.seed, 0, 0), opts.delta, opts.b});
    res.s_max = compute_s_max(res.product.stats, opts.b);
    res.w = WitnessMatrix(a.rows(), b.cols());
    for (int s = 0; s <= res.s_max; ++s) {
        StageStats stage;
        stage.s = s;
        stage.trials = std::uint64_t(20) << (2 * (res.s_max - s));  // 20 * 4^(s_max - s)
        const pseudomul::PseudoParams p{s, opts.b};
        for (std::uint64_t t = 0; t < stage.trials; ++t) {
            const std::uint64_t trial_seed =
                rng::derive_seed(opts.seed, 1, (static_cast<std::uint64_t>(s) << 32) | t);
            const WitnessMatrix est = witness_estimate(a, b, p, trial_seed, &stage.counters);
            for (std::int64_t i = 0; i < res.w.rows(); ++i)
                for (std::int64_t j = 0; j < res.w.cols(); ++j) {
                    const std::uint32_t k = est.get(i, j);
                    if (k != 0) res.w.set(i, j, k);
                }
        }
        res.stages.push_back(stage);
    }
    res.fallback_probes =
        fallback_scan(a, b, res.product.c, res.w, rng::derive_seed(opts.seed, 2, 0));
    return res;
}

namespace {

[[noreturn]] void wfail(int lineno, const std::string& why) {
    throw std::runtime_error("WMAT parse error at line " + std::to_string(lineno) + ": " + why);
}

std::string_view wtake_line(std::string_view text, std::size_t& pos, int lineno) {
    if (pos >= text.size()) wfail(lineno, "unexpected end of input");
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) wfail(lineno, "missing trailing newline");
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
}

std::int64_t wparse_count(std::string_view token, int lineno, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v <= 0)
        wfail(lineno, std::string(what) + " must be a positive integer");
    return v;
}

}  // namespace

std::string to_wmat(const WitnessMatrix& w) {
    std::string out = "WMAT 1\n";
    out += std::to_string(w.rows());
    out += ' ';
    out += std::to_string(w.cols());
    out += '\n';
    for (std::int64_t i = 0; i < w.rows(); ++i) {
        for (std::int64_t j = 0; j < w.cols(); ++j) {
            if (j) out += ' ';
            out += std::to_string(w.get(i, j));
        }
        out += '\n';
    }
    return out;
}

WitnessMatrix parse_wmat(std::string_view text) {
    std::size_t pos = 0;
    if (wtake_line(text, pos, 1) != "WMAT 1") wfail(1, "expected magic line \"WMAT 1\"");
    const std::string_view header = wtake_line(text, pos, 2);
    const std::size_t sp = header.find(' ');
    if (sp == std::string_view::npos || header.find(' ', sp + 1) != std::string_view::npos)
        wfail(2, "expected \"<d1> <d2>\"");
    const std::int64_t rows = wparse_count(header.substr(0, sp), 2, "d1");
    const std::int64_t cols = wparse_count(header.substr(sp + 1), 2, "d2");
    if (rows > (std::int64_t(1) << 24) || cols > (std::int64_t(1) << 24))
        wfail(2, "dimension too large");
    WitnessMatrix w(rows, cols);
    for (std::int64_t i = 0; i < rows; ++i) {
        const int lineno = static_cast<int>(i) + 3;
        std::string_view line = wtake_line(text, pos, lineno);
        for (std::int64_t j = 0; j < cols; ++j) {
            if (j) {
                if (line.empty() || line.front() != ' ') wfail(lineno, "expected single space");
                line.remove_prefix(1);
            }
            std::uint32_t v = 0;
            const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
            if (ec != std::errc() || ptr == line.data())
                wfail(lineno, "expected a non-negative integer entry");
            line.remove_prefix(static_cast<std::size_t>(ptr - line.data()));
            w.set(i, j, v);
        }
        if (!line.empty()) wfail(lineno, "trailing characters after last entry");
    }
    if (pos != text.size()) wfail(static_cast<int>(rows) + 3, "trailing data after last row");
    return w;
}

WitnessMatrix load_wmat(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("read failure on " + path.string());
    return parse_wmat(buf.str());
}

void save_wmat(const std::filesystem::path& path, const WitnessMatrix& w) {
    atomic_write_file(path, to_wmat(w));
}

}  // namespace obmm::witness
