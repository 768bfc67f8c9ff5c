#include "spgemm/convert.hpp"

#include <algorithm>
#include <cmath>

namespace spgemm {

void validate(const CooMatrix& m) {
    if (m.dims.nrows < 1 || m.dims.ncols < 1) throw structural_error("empty dims");
    for (const CooEntry& e : m.entries) {
        if (e.row >= m.dims.nrows || e.col >= m.dims.ncols)
            throw structural_error("coo entry (" + std::to_string(e.row) + "," +
                                   std::to_string(e.col) + ") out of " +
                                   std::to_string(m.dims.nrows) + "x" +
                                   std::to_string(m.dims.ncols));
        if (std::isnan(e.val)) throw structural_error("coo entry holds NaN");
    }
}

namespace {

void validate_compressed(MatrixDims dims, const std::vector<offset_t>& ptr,
                         const std::vector<index_t>& ids, std::size_t nvals, index_t nmajor,
                         index_t nminor, const char* what) {
    if (dims.nrows < 1 || dims.ncols < 1) throw structural_error("empty dims");
    if (ptr.size() != static_cast<std::size_t>(nmajor) + 1 || ptr.front() != 0 ||
        ptr.back() != ids.size() || ids.size() != nvals)
        throw structural_error(std::string(what) + ": bad pointer array shape");
    for (index_t j = 0; j < nmajor; ++j) {
        if (ptr[j] > ptr[j + 1]) throw structural_error(std::string(what) + ": ptr not monotone");
        for (offset_t p = ptr[j]; p < ptr[j + 1]; ++p) {
            if (ids[p] >= nminor) throw structural_error(std::string(what) + ": id out of range");
            if (p > ptr[j] && ids[p - 1] >= ids[p])
                throw structural_error(std::string(what) + ": ids not strictly increasing");
        }
    }
}

// Shared kernel: sort entries by (major, minor), sum duplicates, build the
// prefix array over `nmajor` slots.
template <typename MajorOf, typename MinorOf>
void compress(const CooMatrix& m, index_t nmajor, MajorOf major_of, MinorOf minor_of,
              std::vector<offset_t>& ptr, std::vector<index_t>& ids,
              std::vector<value_t>& vals) {
    validate(m);
    std::vector<CooEntry> entries = m.entries;
    std::sort(entries.begin(), entries.end(), [&](const CooEntry& a, const CooEntry& b) {
        return major_of(a) == major_of(b) ? minor_of(a) < minor_of(b) : major_of(a) < major_of(b);
    });

    ptr.assign(static_cast<std::size_t>(nmajor) + 1, 0);
    ids.clear();
    vals.clear();
    ids.reserve(entries.size());
    vals.reserve(entries.size());

    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && major_of(entries[i]) == major_of(entries[i - 1]) &&
            minor_of(entries[i]) == minor_of(entries[i - 1])) {
            vals.back() += entries[i].val;
        } else {
            ptr[major_of(entries[i]) + 1]++;
            ids.push_back(minor_of(entries[i]));
            vals.push_back(entries[i].val);
        }
    }
    for (index_t j = 0; j < nmajor; ++j) ptr[j + 1] += ptr[j];
}

}  // namespace

void validate(const CscMatrix& m) {
    validate_compressed(m.dims, m.colptr, m.rowids, m.values.size(), m.dims.ncols, m.dims.nrows,
                        "csc");
}

void validate(const CsrMatrix& m) {
    validate_compressed(m.dims, m.rowptr, m.colids, m.values.size(), m.dims.nrows, m.dims.ncols,
                        "csr");
}

CscMatrix coo_to_csc(const CooMatrix& m) {
    CscMatrix out;
    out.dims = m.dims;
    compress(
        m, m.dims.ncols, [](const CooEntry& e) { return e.col; },
        [](const CooEntry& e) { return e.row; }, out.colptr, out.rowids, out.values);
    return out;
}

CsrMatrix coo_to_csr(const CooMatrix& m) {
    CsrMatrix out;
    out.dims = m.dims;
    compress(
        m, m.dims.nrows, [](const CooEntry& e) { return e.row; },
        [](const CooEntry& e) { return e.col; }, out.rowptr, out.colids, out.values);
    return out;
}

CooMatrix csc_to_coo(const CscMatrix& m) {
    CooMatrix out;
    out.dims = m.dims;
    out.entries.reserve(m.nnz());
    for (index_t j = 0; j < m.dims.ncols; ++j)
        for (offset_t p = m.colptr[j]; p < m.colptr[j + 1]; ++p)
            out.entries.push_back({m.rowids[p], j, m.values[p]});
    return out;
}

CooMatrix csr_to_coo(const CsrMatrix& m) {
    CooMatrix out;
    out.dims = m.dims;
    out.entries.reserve(m.nnz());
    for (index_t i = 0; i < m.dims.nrows; ++i)
        for (offset_t p = m.rowptr[i]; p < m.rowptr[i + 1]; ++p)
            out.entries.push_back({i, m.colids[p], m.values[p]});
    return out;
}

std::vector<CooEntry> normalized_triples(const CooMatrix& m) {
    std::vector<CooEntry> t = m.entries;
    std::sort(t.begin(), t.end(), coo_order_row_major);
    std::size_t w = 0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (w > 0 && t[w - 1].row == t[r].row && t[w - 1].col == t[r].col)
            t[w - 1].val += t[r].val;
        else
            t[w++] = t[r];
    }
    t.resize(w);
    return t;
}

}  // namespace spgemm
