#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spgemm {

// 4-byte indices, 8-byte values: one stored nonzero costs 16 bytes in COO.
using index_t = std::uint32_t;
using value_t = double;
using offset_t = std::uint64_t;

inline constexpr int kCooNonzeroBytes = 16;

struct MatrixDims {
    index_t nrows = 0;
    index_t ncols = 0;

    bool operator==(const MatrixDims&) const = default;
};

struct CooEntry {
    index_t row = 0;
    index_t col = 0;
    value_t val = 0.0;

    friend bool operator==(const CooEntry& a, const CooEntry& b) {
        return a.row == b.row && a.col == b.col && a.val == b.val;
    }
};

// Row-major entry order: (row, col) lexicographic.
inline bool coo_order_row_major(const CooEntry& a, const CooEntry& b) {
    return a.row == b.row ? a.col < b.col : a.row < b.row;
}

// Column-major entry order: (col, row) lexicographic.
inline bool coo_order_col_major(const CooEntry& a, const CooEntry& b) {
    return a.col == b.col ? a.row < b.row : a.col < b.col;
}

struct CooMatrix {
    MatrixDims dims;
    std::vector<CooEntry> entries;

    std::size_t nnz() const { return entries.size(); }
};

struct CscMatrix {
    MatrixDims dims;
    std::vector<offset_t> colptr;  // length ncols+1
    std::vector<index_t> rowids;   // length nnz, strictly increasing per column
    std::vector<value_t> values;   // length nnz

    std::size_t nnz() const { return rowids.size(); }
    offset_t col_nnz(index_t j) const { return colptr[j + 1] - colptr[j]; }
};

struct CsrMatrix {
    MatrixDims dims;
    std::vector<offset_t> rowptr;  // length nrows+1
    std::vector<index_t> colids;   // length nnz, strictly increasing per row
    std::vector<value_t> values;   // length nnz

    std::size_t nnz() const { return colids.size(); }
    offset_t row_nnz(index_t i) const { return rowptr[i + 1] - rowptr[i]; }
};

// Thrown when an input violates a structural invariant (index out of range,
// non-monotone pointer array, NaN value).
struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on bad caller-supplied parameters (dimension mismatch, invalid
// generator spec).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown on malformed input files; message carries the line number.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a pipeline self-check fails; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

void validate(const CooMatrix& m);
void validate(const CscMatrix& m);
void validate(const CsrMatrix& m);

inline void require_multipliable(MatrixDims a, MatrixDims b) {
    if (a.ncols != b.nrows)
        throw parameter_error("dimension mismatch: " + std::to_string(a.nrows) + "x" +
                              std::to_string(a.ncols) + " * " + std::to_string(b.nrows) + "x" +
                              std::to_string(b.ncols));
}

}  // namespace spgemm
