#pragma once

#include "spgemm/types.hpp"

namespace spgemm {

// Duplicate (row,col) entries of the COO input are summed.
CscMatrix coo_to_csc(const CooMatrix& m);
CsrMatrix coo_to_csr(const CooMatrix& m);

CooMatrix csc_to_coo(const CscMatrix& m);
CooMatrix csr_to_coo(const CsrMatrix& m);

// Merges duplicates and sorts row-major; the canonical triple list used for
// cross-format and cross-algorithm comparison.
std::vector<CooEntry> normalized_triples(const CooMatrix& m);

}  // namespace spgemm
