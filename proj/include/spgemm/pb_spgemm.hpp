#pragma once

#include <bit>
#include <cstring>

#include "spgemm/report.hpp"
#include "spgemm/types.hpp"

namespace spgemm {

struct PbConfig {
    std::uint32_t nbins = 0;        // 0 = size bins from flop and l2_bytes
    std::uint32_t lbin_bytes = 512; // thread-private staging buffer per bin
    std::uint64_t l2_bytes = 1 << 20;
    int nthreads = 0;               // 0 = OpenMP default
    bool balanced_bins = false;     // variable row ranges when bins overflow L2
};

// Returns 32 when a bin-local row offset and a column id fit one 4-byte key.
inline int ceil_log2(std::uint64_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

inline int choose_key_width(index_t max_bin_rows, index_t ncols) {
    return ceil_log2(max_bin_rows) + ceil_log2(ncols) <= 32 ? 32 : 64;
}

// (local_rowid << col_bits) | colid; unsigned key order equals (row, col)
// lexicographic order within a bin.
inline std::uint64_t pack_key(index_t rowid, index_t colid, index_t bin_base, int col_bits) {
    return (static_cast<std::uint64_t>(rowid - bin_base) << col_bits) | colid;
}

struct RowCol {
    index_t row;
    index_t col;
};

inline RowCol unpack_key(std::uint64_t key, index_t bin_base, int col_bits) {
    const std::uint64_t col_mask = (std::uint64_t{1} << col_bits) - 1;
    return {static_cast<index_t>(bin_base + (key >> col_bits)),
            static_cast<index_t>(key & col_mask)};
}

// Bins sized so sorted tuples sit in half the L2: next power of two >=
// flop*tuple_bytes/(l2/2), clamped to [64, 8192] and to <= nrows.
std::uint32_t choose_nbins(std::uint64_t flop, index_t nrows, const PbConfig& cfg,
                           std::uint32_t tuple_bytes = 12);

struct SymbolicResult {
    std::uint64_t flop = 0;
    std::vector<std::uint64_t> per_column_flop;  // over the inner dimension k
    std::uint32_t nbins = 1;
    std::vector<std::uint64_t> per_bin_flop;
    std::vector<index_t> bin_row_starts;  // nbins+1; bin b owns [starts[b], starts[b+1])
    index_t uniform_rows_per_bin = 0;     // 0 when ranges are flop-balanced
};

// O(n) pass over the pointer arrays only: flop = sum_i nnz(A(:,i))*nnz(B(i,:)),
// then one O(nnz(A)) pass attributing rows to bins.
SymbolicResult symbolic(const CscMatrix& a, const CsrMatrix& b, const PbConfig& cfg);

// The expanded product, partitioned by contiguous row ranges. Tuples are
// stored as (packed key, value) pairs; 4-byte keys when the bin-local row
// and column bits fit 32, 8-byte otherwise.
struct BinSet {
    MatrixDims c_dims;
    std::uint32_t nbins = 1;
    int col_bits = 0;
    int row_bits = 0;
    int key_width = 32;
    index_t rows_per_bin = 0;            // uniform span; 0 = variable ranges
    std::vector<index_t> row_starts;     // nbins+1
    std::vector<index_t> row_bin;        // row -> bin, variable ranges only
    std::vector<offset_t> offsets;       // nbins+1, prefix over per-bin capacity
    std::vector<offset_t> fill;          // per-bin append cursors
    std::vector<offset_t> merged;        // per-bin surviving counts after compress
    std::vector<std::uint32_t> keys32;
    std::vector<std::uint64_t> keys64;
    std::vector<value_t> values;

    index_t bin_of(index_t row) const {
        return row_bin.empty() ? row / rows_per_bin : row_bin[row];
    }
    offset_t capacity(std::uint32_t b) const { return offsets[b + 1] - offsets[b]; }
    offset_t total_filled() const {
        offset_t t = 0;
        for (offset_t f : fill) t += f;
        return t;
    }
    offset_t total_merged() const {
        offset_t t = 0;
        for (offset_t m : merged) t += m;
        return t;
    }
};

BinSet make_bins(const SymbolicResult& sym, MatrixDims c_dims);

// Outer-product expansion with propagation blocking: every A(:,i) x B(i,:)
// tuple is staged in a thread-private local bin and flushed wholesale into
// its global bin through an atomically reserved range.
void expand(const CscMatrix& a, const CsrMatrix& b, BinSet& bins, const PbConfig& cfg);

void sort_bins(BinSet& bins, const PbConfig& cfg);
void compress_bins(BinSet& bins, const PbConfig& cfg);

// Bins are visited in ascending order; their disjoint ascending row ranges
// make the concatenation row-major without further sorting.
CsrMatrix convert_csr(const BinSet& bins);

struct PbResult {
    CsrMatrix c;
    SymbolicResult sym;
    PhaseReport phases;
};

PbResult pb_multiply(const CscMatrix& a, const CsrMatrix& b, const PbConfig& cfg = {});

inline constexpr std::size_t kRadixInsertionCutoff = 32;

template <typename KeyT>
void insertion_sort_records(KeyT* keys, value_t* vals, std::size_t n) {
    for (std::size_t i = 1; i < n; ++i) {
        KeyT k = keys[i];
        value_t v = vals[i];
        std::size_t j = i;
        for (; j > 0 && keys[j - 1] > k; --j) {
            keys[j] = keys[j - 1];
            vals[j] = vals[j - 1];
        }
        keys[j] = k;
        vals[j] = v;
    }
}

namespace detail {

// One American-flag pass on byte `shifts[level]`, then recursion into each
// bucket on the next varying byte.
template <typename KeyT>
void radix_pass(KeyT* keys, value_t* vals, std::size_t n, const int* shifts, int nlevels,
                int level) {
    if (n < kRadixInsertionCutoff) {
        insertion_sort_records(keys, vals, n);
        return;
    }
    if (level >= nlevels) return;
    const int shift = shifts[level];

    std::size_t count[256] = {};
    for (std::size_t i = 0; i < n; ++i) ++count[(keys[i] >> shift) & 0xFF];

    std::size_t start[257];
    start[0] = 0;
    for (int b = 0; b < 256; ++b) start[b + 1] = start[b] + count[b];

    std::size_t next[256];
    std::memcpy(next, start, sizeof next);
    for (int b = 0; b < 256; ++b) {
        while (next[b] < start[b + 1]) {
            const std::size_t at = next[b];
            const int t = static_cast<int>((keys[at] >> shift) & 0xFF);
            if (t == b) {
                ++next[b];
            } else {
                std::swap(keys[at], keys[next[t]]);
                std::swap(vals[at], vals[next[t]]);
                ++next[t];
            }
        }
    }

    for (int b = 0; b < 256; ++b)
        if (count[b] > 1)
            radix_pass(keys + start[b], vals + start[b], count[b], shifts, nlevels, level + 1);
}

}  // namespace detail

// In-place MSD byte radix sort of (key, value) records, ascending by key.
// Bytes that are constant across the whole run are skipped.
template <typename KeyT>
void sort_bin_records(KeyT* keys, value_t* vals, std::size_t n) {
    if (n < 2) return;
    if (n < kRadixInsertionCutoff) {
        insertion_sort_records(keys, vals, n);
        return;
    }
    KeyT diff = 0;
    for (std::size_t i = 1; i < n; ++i) diff |= keys[i] ^ keys[0];
    if (diff == 0) return;

    int shifts[sizeof(KeyT)];
    int nlevels = 0;
    for (int byte = static_cast<int>(sizeof(KeyT)) - 1; byte >= 0; --byte)
        if ((diff >> (8 * byte)) & 0xFF) shifts[nlevels++] = 8 * byte;
    detail::radix_pass(keys, vals, n, shifts, nlevels, 0);
}

// Two-pointer duplicate merge over a key-sorted run; equal-key records sum
// into one. Exact zeros stay as structural nonzeros. Returns the surviving
// record count.
template <typename KeyT>
std::size_t compress_bin_records(KeyT* keys, value_t* vals, std::size_t n) {
    if (n == 0) return 0;
    std::size_t w = 0;
    for (std::size_t r = 1; r < n; ++r) {
        if (keys[r] == keys[w]) {
            vals[w] += vals[r];
        } else {
            ++w;
            keys[w] = keys[r];
            vals[w] = vals[r];
        }
    }
    return w + 1;
}

}  // namespace spgemm
