#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "obmm/bitmatrix.hpp"

namespace obmm {

namespace {

[[noreturn]] void fail(int lineno, const std::string& why) {
    throw std::runtime_error("BMAT parse error at line " + std::to_string(lineno) + ": " + why);
}

// Strict line reader: every line, including the last, must end in '\n'.
std::string_view take_line(std::string_view text, std::size_t& pos, int lineno) {
    if (pos >= text.size()) fail(lineno, "unexpected end of input");
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) fail(lineno, "missing trailing newline");
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
}

std::int64_t parse_count(std::string_view token, int lineno, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v <= 0)
        fail(lineno, std::string(what) + " must be a positive integer");
    return v;
}

}  // namespace

std::string to_bmat(const BitMatrix& m) {
    std::string out = "BMAT 1\n";
    out += std::to_string(m.rows());
    out += ' ';
    out += std::to_string(m.cols());
    out += '\n';
    out.reserve(out.size() + static_cast<std::size_t>(m.rows()) *
                                 (static_cast<std::size_t>(m.cols()) + 1));
    for (std::int64_t i = 0; i < m.rows(); ++i) {
        for (std::int64_t j = 0; j < m.cols(); ++j) out += m.get(i, j) ? '1' : '0';
        out += '\n';
    }
    return out;
}

BitMatrix parse_bmat(std::string_view text) {
    std::size_t pos = 0;
    if (take_line(text, pos, 1) != "BMAT 1") fail(1, "expected magic line \"BMAT 1\"");

    const std::string_view header = take_line(text, pos, 2);
    const std::size_t sp = header.find(' ');
    if (sp == std::string_view::npos || header.find(' ', sp + 1) != std::string_view::npos)
        fail(2, "expected \"<rows> <cols>\"");
    const std::int64_t rows = parse_count(header.substr(0, sp), 2, "rows");
    const std::int64_t cols = parse_count(header.substr(sp + 1), 2, "cols");
    if (rows > (std::int64_t(1) << 24) || cols > (std::int64_t(1) << 24))
        fail(2, "dimension too large");

    BitMatrix m(rows, cols);
    for (std::int64_t i = 0; i < rows; ++i) {
        const int lineno = static_cast<int>(i) + 3;
        const std::string_view line = take_line(text, pos, lineno);
        if (static_cast<std::int64_t>(line.size()) != cols)
            fail(lineno, "expected exactly " + std::to_string(cols) + " characters, got " +
                             std::to_string(line.size()));
        for (std::int64_t j = 0; j < cols; ++j) {
            const char c = line[static_cast<std::size_t>(j)];
            if (c == '1')
                m.set(i, j, true);
            else if (c != '0')
                fail(lineno, "invalid character (only '0' and '1' allowed)");
        }
    }
    if (pos != text.size()) fail(static_cast<int>(rows) + 3, "trailing data after last row");
    return m;
}

BitMatrix load_bmat(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("read failure on " + path.string());
    return parse_bmat(buf.str());
}

void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out.good()) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failure on " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void save_bmat(const std::filesystem::path& path, const BitMatrix& m) {
    atomic_write_file(path, to_bmat(m));
}

}  // namespace obmm
