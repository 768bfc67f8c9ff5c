#include "spgemm/reference.hpp"

#include <algorithm>
#include <cmath>

namespace spgemm {

CooMatrix reference_multiply(const CooMatrix& a, const CooMatrix& b) {
    validate(a);
    validate(b);
    require_multipliable(a.dims, b.dims);
    const std::uint64_t dense =
        static_cast<std::uint64_t>(a.dims.nrows) * static_cast<std::uint64_t>(b.dims.ncols);
    if (dense > kReferenceDenseCap)
        throw parameter_error("reference oracle capped at 2^24 dense entries, product needs " +
                              std::to_string(dense));

    // Group B entries by row so each A entry streams its matching row.
    std::vector<std::vector<CooEntry>> b_rows(b.dims.nrows);
    for (const CooEntry& e : b.entries) b_rows[e.row].push_back(e);

    std::vector<value_t> c(dense, 0.0);
    const std::uint64_t ncols = b.dims.ncols;
    for (const CooEntry& ea : a.entries)
        for (const CooEntry& eb : b_rows[ea.col])
            c[static_cast<std::uint64_t>(ea.row) * ncols + eb.col] += ea.val * eb.val;

    CooMatrix out;
    out.dims = {a.dims.nrows, b.dims.ncols};
    for (std::uint64_t at = 0; at < dense; ++at)
        if (c[at] != 0.0)
            out.entries.push_back(
                {static_cast<index_t>(at / ncols), static_cast<index_t>(at % ncols), c[at]});
    return out;
}

bool same_pattern(const std::vector<CooEntry>& a, const std::vector<CooEntry>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].row != b[i].row || a[i].col != b[i].col) return false;
    return true;
}

bool same_values(const std::vector<CooEntry>& a, const std::vector<CooEntry>& b, double rel_tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i].val), std::abs(b[i].val), 1e-300});
        if (std::abs(a[i].val - b[i].val) > rel_tol * scale) return false;
    }
    return true;
}

}  // namespace spgemm
