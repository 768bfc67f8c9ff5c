#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace spgemm {

// beta: sustained memory bandwidth in bytes/second; b: bytes per stored
// nonzero (16 for 4-byte indices + 8-byte value in COO).
struct MachineModel {
    double beta = 0.0;
    double b = 16.0;
};

struct MultiplyStats {
    std::uint64_t nnz_a = 0;
    std::uint64_t nnz_b = 0;
    std::uint64_t nnz_c = 0;
    std::uint64_t flop = 0;
};

// flop / nnz(C); >= 1 whenever the product is nonempty. NaN for an empty
// product, where the ratio is undefined.
inline double compression_factor(const MultiplyStats& s) {
    if (s.nnz_c == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(s.flop) / static_cast<double>(s.nnz_c);
}

// Upper bound on arithmetic intensity: every matrix is touched exactly once.
inline double ai_upper(double cf, double b) { return cf / b; }

// Lower bound for column-by-column merging: the first input is re-read once
// per scalar multiplication in the worst case.
inline double ai_col_lower(double cf, double b) { return cf / ((2.0 + cf) * b); }

// Lower bound for outer-product expand-sort-compress: flop unmerged tuples
// are written once and read back once.
inline double ai_outer_lower(double cf, double b) { return cf / ((3.0 + 2.0 * cf) * b); }

// Bandwidth-bound performance ceiling in flops/second.
inline double peak_flops(const MachineModel& m, double ai) { return m.beta * ai; }
inline double peak_flops(double beta_bytes_per_s, double ai) { return beta_bytes_per_s * ai; }

// Per-phase memory traffic of the outer-product pipeline, in bytes. The sort
// and compress shuffles happen in cache; only their streamed sides count.
struct TrafficModel {
    double expand_read = 0.0;    // b*(nnz(A)+nnz(B))
    double expand_write = 0.0;   // b*flop
    double sort_read = 0.0;      // b*flop
    double compress_write = 0.0; // b*nnz(C)

    double total() const { return expand_read + expand_write + sort_read + compress_write; }
};

inline TrafficModel traffic_model(const MultiplyStats& s, double b) {
    TrafficModel t;
    t.expand_read = b * static_cast<double>(s.nnz_a + s.nnz_b);
    t.expand_write = b * static_cast<double>(s.flop);
    t.sort_read = b * static_cast<double>(s.flop);
    t.compress_write = b * static_cast<double>(s.nnz_c);
    return t;
}

// Empirical threshold: below this compression factor the outer-product
// pipeline wins over column merging, above it the extra tuple traffic
// dominates.
inline double crossover_cf() { return 4.0; }

// Analytic ratio ai_outer_lower/ai_col_lower = (2+cf)/(3+2cf), monotone
// decreasing from 3/5 toward 1/2.
inline double ai_ratio_outer_over_col(double cf) { return (2.0 + cf) / (3.0 + 2.0 * cf); }

}  // namespace spgemm
