#include "spgemm/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spgemm {

namespace {

[[noreturn]] void fail(const std::string& name, std::size_t lineno, const std::string& msg) {
    throw parse_error(name + ":" + std::to_string(lineno) + ": " + msg);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '%') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

CooMatrix mm_read(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) fail(name, 1, "empty file");
    ++lineno;

    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (lower(tag) != "%%matrixmarket") fail(name, lineno, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix") fail(name, lineno, "unsupported object '" + object + "'");
    if (lower(format) != "coordinate") fail(name, lineno, "unsupported format '" + format + "'");
    field = lower(field);
    symmetry = lower(symmetry);
    if (field != "real" && field != "integer" && field != "pattern")
        fail(name, lineno, "unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        fail(name, lineno, "unsupported symmetry '" + symmetry + "'");
    const bool pattern = field == "pattern";
    const bool symmetric = symmetry == "symmetric";

    // Size line, after any % comments.
    std::uint64_t nrows = 0, ncols = 0, nnz_decl = 0;
    for (;;) {
        if (!std::getline(in, line)) fail(name, lineno + 1, "missing size line");
        ++lineno;
        if (is_blank_or_comment(line)) continue;
        std::istringstream sizes(line);
        if (!(sizes >> nrows >> ncols >> nnz_decl)) fail(name, lineno, "malformed size line");
        break;
    }
    if (nrows < 1 || ncols < 1) fail(name, lineno, "matrix dims must be at least 1x1");
    if (nrows > (std::uint64_t{1} << 31) || ncols > (std::uint64_t{1} << 31))
        fail(name, lineno, "dims exceed 2^31 cap");

    CooMatrix out;
    out.dims = {static_cast<index_t>(nrows), static_cast<index_t>(ncols)};
    out.entries.reserve(symmetric ? 2 * nnz_decl : nnz_decl);

    std::uint64_t seen = 0;
    while (seen < nnz_decl) {
        if (!std::getline(in, line))
            fail(name, lineno + 1,
                 "expected " + std::to_string(nnz_decl) + " entries, got " + std::to_string(seen));
        ++lineno;
        if (is_blank_or_comment(line)) continue;

        std::istringstream entry(line);
        std::uint64_t r = 0, c = 0;
        double v = 1.0;
        if (!(entry >> r >> c)) fail(name, lineno, "malformed entry");
        if (!pattern && !(entry >> v)) fail(name, lineno, "entry missing value");
        if (r < 1 || r > nrows || c < 1 || c > ncols)
            fail(name, lineno, "index (" + std::to_string(r) + "," + std::to_string(c) +
                                   ") outside declared " + std::to_string(nrows) + "x" +
                                   std::to_string(ncols));
        if (std::isnan(v)) fail(name, lineno, "NaN value");

        const index_t row = static_cast<index_t>(r - 1);
        const index_t col = static_cast<index_t>(c - 1);
        out.entries.push_back({row, col, v});
        if (symmetric && row != col) out.entries.push_back({col, row, v});
        ++seen;
    }
    return out;
}

CooMatrix mm_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open");
    return mm_read(in, path);
}

void mm_write(const CooMatrix& m, std::ostream& out) {
    validate(m);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.dims.nrows << " " << m.dims.ncols << " " << m.entries.size() << "\n";
    char buf[64];
    for (const CooEntry& e : m.entries) {
        std::snprintf(buf, sizeof buf, "%u %u %.17g\n", e.row + 1, e.col + 1, e.val);
        out << buf;
    }
}

void mm_write(const CooMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path + ": cannot open for writing");
    mm_write(m, out);
    out.flush();
    if (!out) throw parse_error(path + ": write failed");
}

}  // namespace spgemm
