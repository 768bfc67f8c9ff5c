#pragma once

#include "spgemm/types.hpp"

namespace spgemm {

struct ColumnSymbolic {
    std::uint64_t flop = 0;
    std::vector<std::uint64_t> per_column_flop;  // over output columns; also
                                                 // the per-column output bound
};

// per_column_flop[j] = sum over nonzero B(i,j) of nnz(A(:,i)).
ColumnSymbolic column_symbolic(const CscMatrix& a, const CscMatrix& b);

// Column SpGEMM with a min-heap k-way merge per output column: C(:,j) merges
// the columns of A selected by B(:,j), each scaled by its B entry.
CscMatrix heap_multiply(const CscMatrix& a, const CscMatrix& b, int nthreads = 0);

// Column SpGEMM accumulating each output column in an open-addressing hash
// table keyed by rowid (linear probing, table sized to 2x the column's flop
// bound), extracted and sorted per column.
CscMatrix hash_multiply(const CscMatrix& a, const CscMatrix& b, int nthreads = 0);

}  // namespace spgemm
