#pragma once

#include <optional>
#include <string>

#include "spgemm/generate.hpp"
#include "spgemm/report.hpp"
#include "spgemm/types.hpp"

namespace spgemm {

struct StreamResult {
    std::uint64_t bytes_per_trial = 0;  // read + write, 2x buffer per pass
    int trials = 0;
    double seconds_median = 0.0;
    double gbps_median = 0.0;
    double gbps_min = 0.0;
    double gbps_max = 0.0;
};

inline double stream_gbps(std::uint64_t bytes, double seconds) {
    return static_cast<double>(bytes) / seconds / 1e9;
}

// Parallel copy kernel over a buffer_bytes-sized array pair; the median of
// `trials` timed passes calibrates the machine's sustained bandwidth beta.
// Meaningful only when buffer_bytes is several times the last-level cache
// (1 GiB default in the CLI).
StreamResult stream_copy_bench(std::uint64_t buffer_bytes, int trials = 5, int nthreads = 0);

enum class Algo { PB, Heap, Hash };

const char* algo_name(Algo a);
Algo algo_from_name(const std::string& name);

// One timed multiplication plus everything the Roofline model says about it.
struct BenchRecord {
    std::string algo;
    std::string matrix;     // file stem, or generator kind
    int scale = 0;          // 0 for file-backed matrices
    index_t edge_factor = 0;
    int nthreads = 1;
    MultiplyStats stats;
    double cf = 0.0;
    PhaseReport phases;
    double ai_upper = 0.0;
    double ai_outer_lower = 0.0;
    double peak_mflops = 0.0;         // beta * ai_upper, 0 when beta unknown
    double measured_over_peak = 0.0;
};

struct BenchInput {
    std::string name;
    CooMatrix a;
    CooMatrix b;
    int scale = 0;
    index_t edge_factor = 0;
};

struct BenchOptions {
    std::vector<Algo> algos;
    std::vector<int> thread_counts = {0};  // 0 = OpenMP default
    double beta = 0.0;                     // bytes/s; 0 = no model ceiling
    double b_bytes = 16.0;
    std::uint32_t nbins = 0;
    std::uint32_t lbin_bytes = 512;
    bool spot_check = true;  // cross-check against a second algorithm, n <= 2^14
    int timed_runs = 3;      // median-of-3 after one warm-up
};

// Warm-up plus median-of-N timing for every (algo, threads) combination on
// one input pair.
std::vector<BenchRecord> run_benchmark(const BenchInput& input, const BenchOptions& opt);

extern const char* kCsvHeader;

void emit_csv(const std::vector<BenchRecord>& records, const std::string& path);
std::vector<BenchRecord> parse_csv(const std::string& path);

// (AI, MFLOPS) points for each record plus the bandwidth ceiling polyline;
// peak_compute_mflops, when given, adds the flat roof with the knee at
// (peak/beta, peak).
void emit_plotdata(const std::vector<BenchRecord>& records, const std::string& path, double beta,
                   std::optional<double> peak_compute_mflops = std::nullopt);

}  // namespace spgemm
