#include "spgemm/baseline.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>

namespace spgemm {

namespace {

constexpr int kColumnChunk = 256;  // dynamic scheduling unit

int thread_count(int nthreads) { return nthreads > 0 ? nthreads : omp_get_max_threads(); }

// Output columns are built into a flop-bound-sized scratch area (disjoint
// per column), then compacted into a tight CSC.
struct ScratchOutput {
    std::vector<offset_t> bound_start;  // prefix over per_column_flop
    std::vector<offset_t> count;        // actual nnz per column
    std::vector<index_t> rowids;
    std::vector<value_t> values;

    explicit ScratchOutput(const ColumnSymbolic& sym) {
        const std::size_t ncols = sym.per_column_flop.size();
        bound_start.resize(ncols + 1);
        bound_start[0] = 0;
        for (std::size_t j = 0; j < ncols; ++j)
            bound_start[j + 1] = bound_start[j] + sym.per_column_flop[j];
        count.assign(ncols, 0);
        rowids.resize(bound_start[ncols]);
        values.resize(bound_start[ncols]);
    }

    CscMatrix compact(MatrixDims dims, int nthreads) {
        CscMatrix out;
        out.dims = dims;
        out.colptr.resize(dims.ncols + 1);
        out.colptr[0] = 0;
        for (index_t j = 0; j < dims.ncols; ++j) out.colptr[j + 1] = out.colptr[j] + count[j];
        out.rowids.resize(out.colptr[dims.ncols]);
        out.values.resize(out.colptr[dims.ncols]);
#pragma omp parallel for schedule(static) num_threads(nthreads)
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(dims.ncols); ++j) {
            std::copy_n(rowids.begin() + bound_start[j], count[j],
                        out.rowids.begin() + out.colptr[j]);
            std::copy_n(values.begin() + bound_start[j], count[j],
                        out.values.begin() + out.colptr[j]);
        }
        return out;
    }
};

struct HeapEntry {
    index_t rowid;    // current head of this A column
    offset_t cursor;  // position in A.rowids/values
    offset_t end;
    value_t scale;    // B(i,j)

    // std:: heap primitives build a max-heap; invert to pop minimum rowid.
    friend bool operator<(const HeapEntry& x, const HeapEntry& y) { return x.rowid > y.rowid; }
};

}  // namespace

ColumnSymbolic column_symbolic(const CscMatrix& a, const CscMatrix& b) {
    require_multipliable(a.dims, b.dims);
    ColumnSymbolic sym;
    sym.per_column_flop.resize(b.dims.ncols);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(b.dims.ncols); ++j) {
        std::uint64_t f = 0;
        for (offset_t p = b.colptr[j]; p < b.colptr[j + 1]; ++p) f += a.col_nnz(b.rowids[p]);
        sym.per_column_flop[j] = f;
    }
    for (std::uint64_t pc : sym.per_column_flop)
        if (__builtin_add_overflow(sym.flop, pc, &sym.flop))
            throw parameter_error("flop count overflows 64 bits");
    return sym;
}

CscMatrix heap_multiply(const CscMatrix& a, const CscMatrix& b, int nthreads) {
    require_multipliable(a.dims, b.dims);
    const ColumnSymbolic sym = column_symbolic(a, b);
    ScratchOutput out(sym);
    const int nt = thread_count(nthreads);

#pragma omp parallel num_threads(nt)
    {
        std::vector<HeapEntry> heap;  // thread-private, reused across columns

#pragma omp for schedule(dynamic, kColumnChunk)
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(b.dims.ncols); ++j) {
            heap.clear();
            for (offset_t p = b.colptr[j]; p < b.colptr[j + 1]; ++p) {
                const index_t i = b.rowids[p];
                if (a.col_nnz(i) == 0) continue;
                heap.push_back(
                    {a.rowids[a.colptr[i]], a.colptr[i], a.colptr[i + 1], b.values[p]});
            }
            std::make_heap(heap.begin(), heap.end());

            index_t* rows = out.rowids.data() + out.bound_start[j];
            value_t* vals = out.values.data() + out.bound_start[j];
            offset_t n = 0;
            while (!heap.empty()) {
                std::pop_heap(heap.begin(), heap.end());
                HeapEntry& e = heap.back();
                const value_t prod = a.values[e.cursor] * e.scale;
                if (n > 0 && rows[n - 1] == e.rowid) {
                    vals[n - 1] += prod;
                } else {
                    rows[n] = e.rowid;
                    vals[n] = prod;
                    ++n;
                }
                if (++e.cursor == e.end) {
                    heap.pop_back();
                } else {
                    e.rowid = a.rowids[e.cursor];
                    std::push_heap(heap.begin(), heap.end());
                }
            }
            out.count[j] = n;
        }
    }
    return out.compact({a.dims.nrows, b.dims.ncols}, nt);
}

namespace {

constexpr index_t kEmptySlot = ~index_t{0};

// Fibonacci hashing into a power-of-two table.
inline std::size_t hash_slot(index_t rowid, std::size_t mask) {
    return static_cast<std::size_t>((rowid * 0x9E3779B97F4A7C15ULL) >> 32) & mask;
}

}  // namespace

CscMatrix hash_multiply(const CscMatrix& a, const CscMatrix& b, int nthreads) {
    require_multipliable(a.dims, b.dims);
    const ColumnSymbolic sym = column_symbolic(a, b);
    ScratchOutput out(sym);
    const int nt = thread_count(nthreads);

#pragma omp parallel num_threads(nt)
    {
        // Thread-private table, grown to the largest column seen so far;
        // only touched slots are reset between columns.
        std::vector<index_t> slot_row;
        std::vector<value_t> slot_val;
        std::vector<std::size_t> used;

#pragma omp for schedule(dynamic, kColumnChunk)
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(b.dims.ncols); ++j) {
            if (sym.per_column_flop[j] == 0) continue;
            const std::size_t table =
                std::bit_ceil<std::size_t>(2 * sym.per_column_flop[j]);
            if (slot_row.size() < table) {
                slot_row.assign(table, kEmptySlot);
                slot_val.resize(table);
            }
            const std::size_t mask = table - 1;
            used.clear();

            for (offset_t p = b.colptr[j]; p < b.colptr[j + 1]; ++p) {
                const index_t i = b.rowids[p];
                const value_t bval = b.values[p];
                for (offset_t q = a.colptr[i]; q < a.colptr[i + 1]; ++q) {
                    const index_t rowid = a.rowids[q];
                    std::size_t s = hash_slot(rowid, mask);
                    while (slot_row[s] != kEmptySlot && slot_row[s] != rowid) s = (s + 1) & mask;
                    if (slot_row[s] == kEmptySlot) {
                        slot_row[s] = rowid;
                        slot_val[s] = a.values[q] * bval;
                        used.push_back(s);
                    } else {
                        slot_val[s] += a.values[q] * bval;
                    }
                }
            }

            index_t* rows = out.rowids.data() + out.bound_start[j];
            value_t* vals = out.values.data() + out.bound_start[j];
            offset_t n = 0;
            std::sort(used.begin(), used.end(), [&](std::size_t x, std::size_t y) {
                return slot_row[x] < slot_row[y];
            });
            for (std::size_t s : used) {
                rows[n] = slot_row[s];
                vals[n] = slot_val[s];
                ++n;
                slot_row[s] = kEmptySlot;
            }
            out.count[j] = n;
        }
    }
    return out.compact({a.dims.nrows, b.dims.ncols}, nt);
}

}  // namespace spgemm
