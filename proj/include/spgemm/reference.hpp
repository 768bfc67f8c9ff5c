#pragma once

#include "spgemm/types.hpp"

namespace spgemm {

// Dense test oracle: C[i][j] = sum_k A[i][k]*B[k][j], exact zeros dropped,
// output in canonical row-major order. Refuses products whose dense size
// exceeds 2^24 entries.
inline constexpr std::uint64_t kReferenceDenseCap = std::uint64_t{1} << 24;

CooMatrix reference_multiply(const CooMatrix& a, const CooMatrix& b);

// Comparison helpers for cross-algorithm checks on normalized triple lists
// (see normalized_triples).
bool same_pattern(const std::vector<CooEntry>& a, const std::vector<CooEntry>& b);
bool same_values(const std::vector<CooEntry>& a, const std::vector<CooEntry>& b, double rel_tol);

}  // namespace spgemm
