#include "spgemm/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spgemm/baseline.hpp"
#include "spgemm/convert.hpp"
#include "spgemm/pb_spgemm.hpp"
#include "spgemm/reference.hpp"

namespace spgemm {

StreamResult stream_copy_bench(std::uint64_t buffer_bytes, int trials, int nthreads) {
    if (trials < 1) throw parameter_error("stream trials must be >= 1");
    const std::size_t n = std::max<std::size_t>(buffer_bytes / sizeof(double), 1);
    const int nt = nthreads > 0 ? nthreads : omp_get_max_threads();

    std::vector<double> src(n), dst(n);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        src[i] = static_cast<double>(i & 0xFF);
        dst[i] = 0.0;
    }

    std::vector<double> secs(trials);
    for (int t = 0; t < trials; ++t) {
        WallTimer timer;
#pragma omp parallel for schedule(static) num_threads(nt)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) dst[i] = src[i];
        secs[t] = timer.seconds();
        if (dst[n / 2] != src[n / 2]) throw internal_error("copy kernel failed");
    }

    StreamResult res;
    res.bytes_per_trial = 2 * static_cast<std::uint64_t>(n) * sizeof(double);
    res.trials = trials;
    std::vector<double> sorted = secs;
    std::sort(sorted.begin(), sorted.end());
    res.seconds_median = sorted[trials / 2];
    res.gbps_median = stream_gbps(res.bytes_per_trial, res.seconds_median);
    res.gbps_min = stream_gbps(res.bytes_per_trial, sorted.back());
    res.gbps_max = stream_gbps(res.bytes_per_trial, sorted.front());
    return res;
}

const char* algo_name(Algo a) {
    switch (a) {
        case Algo::PB: return "pb";
        case Algo::Heap: return "heap";
        case Algo::Hash: return "hash";
    }
    return "?";
}

Algo algo_from_name(const std::string& name) {
    if (name == "pb") return Algo::PB;
    if (name == "heap") return Algo::Heap;
    if (name == "hash") return Algo::Hash;
    throw parameter_error("unknown algo '" + name + "' (want pb, heap, or hash)");
}

namespace {

struct PreparedInput {
    CscMatrix a_csc;
    CsrMatrix b_csr;
    CscMatrix b_csc;
};

struct RunOutput {
    PhaseReport phases;
    std::uint64_t nnz_c = 0;
    std::uint64_t flop = 0;
    CooMatrix coo_c;  // kept only when a spot check will need it
};

RunOutput run_once(Algo algo, const PreparedInput& in, const BenchOptions& opt, int nthreads,
                   bool keep_output) {
    RunOutput out;
    if (algo == Algo::PB) {
        PbConfig cfg;
        cfg.nbins = opt.nbins;
        cfg.lbin_bytes = opt.lbin_bytes;
        cfg.nthreads = nthreads;
        PbResult res = pb_multiply(in.a_csc, in.b_csr, cfg);
        out.flop = res.sym.flop;
        out.nnz_c = res.c.nnz();
        out.phases = res.phases;
        if (keep_output) out.coo_c = csr_to_coo(res.c);
    } else {
        WallTimer total;
        WallTimer phase;
        const ColumnSymbolic sym = column_symbolic(in.a_csc, in.b_csc);
        out.phases.t_symbolic = phase.lap();
        CscMatrix c = algo == Algo::Heap ? heap_multiply(in.a_csc, in.b_csc, nthreads)
                                         : hash_multiply(in.a_csc, in.b_csc, nthreads);
        out.phases.t_total = total.seconds();
        out.flop = sym.flop;
        out.nnz_c = c.nnz();
        if (keep_output) out.coo_c = csc_to_coo(c);
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchInput& input, const BenchOptions& opt) {
    PreparedInput in;
    in.a_csc = coo_to_csc(input.a);
    in.b_csr = coo_to_csr(input.b);
    in.b_csc = coo_to_csc(input.b);

    const bool check = opt.spot_check && input.a.dims.nrows <= (index_t{1} << 14) &&
                       input.b.dims.ncols <= (index_t{1} << 14);

    std::vector<BenchRecord> records;
    for (Algo algo : opt.algos) {
        for (int nthreads : opt.thread_counts) {
            // One warm-up, then keep the median-total timed run.
            run_once(algo, in, opt, nthreads, false);
            std::vector<RunOutput> runs;
            for (int r = 0; r < opt.timed_runs; ++r)
                runs.push_back(run_once(algo, in, opt, nthreads, false));
            std::sort(runs.begin(), runs.end(), [](const RunOutput& x, const RunOutput& y) {
                return x.phases.t_total < y.phases.t_total;
            });
            const RunOutput& mid = runs[runs.size() / 2];

            BenchRecord rec;
            rec.algo = algo_name(algo);
            rec.matrix = input.name;
            rec.scale = input.scale;
            rec.edge_factor = input.edge_factor;
            rec.nthreads = nthreads > 0 ? nthreads : omp_get_max_threads();
            rec.stats = {input.a.nnz(), input.b.nnz(), mid.nnz_c, mid.flop};
            rec.cf = compression_factor(rec.stats);
            rec.phases = mid.phases;
            rec.phases.derive(rec.stats, opt.b_bytes);
            rec.ai_upper = ai_upper(rec.cf, opt.b_bytes);
            rec.ai_outer_lower = ai_outer_lower(rec.cf, opt.b_bytes);
            if (opt.beta > 0.0) {
                rec.peak_mflops = peak_flops(opt.beta, rec.ai_upper) / 1e6;
                rec.measured_over_peak = rec.phases.mflops / rec.peak_mflops;
            }
            records.push_back(rec);
        }
    }

    if (check && opt.algos.size() >= 1) {
        // Spot check: compare the first algorithm's product against another.
        const Algo first = opt.algos.front();
        const Algo other = first == Algo::Hash ? Algo::Heap : Algo::Hash;
        auto lhs = run_once(first, in, opt, 0, true);
        auto rhs = run_once(other, in, opt, 0, true);
        const auto lt = normalized_triples(lhs.coo_c);
        const auto rt = normalized_triples(rhs.coo_c);
        if (!same_pattern(lt, rt) || !same_values(lt, rt, 1e-10))
            throw internal_error(std::string("spot check failed: ") + algo_name(first) +
                                 " disagrees with " + algo_name(other) + " on " + input.name);
    }
    return records;
}

const char* kCsvHeader =
    "algo,matrix,scale,edge_factor,nthreads,nnz_a,nnz_b,nnz_c,flop,cf,"
    "t_symbolic,t_expand,t_sort,t_compress,t_convert,t_total,mflops,"
    "bw_expand,bw_sort,bw_compress,ai_upper,ai_outer_lower,peak_mflops,measured_over_peak";

void emit_csv(const std::vector<BenchRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path + ": cannot open for writing");
    out << kCsvHeader << "\n";
    for (const BenchRecord& r : records) {
        out << r.algo << ',' << r.matrix << ',' << r.scale << ',' << r.edge_factor << ','
            << r.nthreads << ',' << r.stats.nnz_a << ',' << r.stats.nnz_b << ','
            << r.stats.nnz_c << ',' << r.stats.flop << ',' << fmt(r.cf) << ','
            << fmt(r.phases.t_symbolic) << ',' << fmt(r.phases.t_expand) << ','
            << fmt(r.phases.t_sort) << ',' << fmt(r.phases.t_compress) << ','
            << fmt(r.phases.t_convert) << ',' << fmt(r.phases.t_total) << ','
            << fmt(r.phases.mflops) << ',' << fmt(r.phases.bw_expand) << ','
            << fmt(r.phases.bw_sort) << ',' << fmt(r.phases.bw_compress) << ','
            << fmt(r.ai_upper) << ',' << fmt(r.ai_outer_lower) << ',' << fmt(r.peak_mflops)
            << ',' << fmt(r.measured_over_peak) << "\n";
    }
    if (!out) throw parse_error(path + ": write failed");
}

std::vector<BenchRecord> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ":1: empty file");
    if (line != kCsvHeader) throw parse_error(path + ":1: unexpected header");

    std::vector<BenchRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 24)
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected 24 fields, got " +
                              std::to_string(f.size()));
        BenchRecord r;
        r.algo = f[0];
        r.matrix = f[1];
        r.scale = std::stoi(f[2]);
        r.edge_factor = static_cast<index_t>(std::stoul(f[3]));
        r.nthreads = std::stoi(f[4]);
        r.stats.nnz_a = std::stoull(f[5]);
        r.stats.nnz_b = std::stoull(f[6]);
        r.stats.nnz_c = std::stoull(f[7]);
        r.stats.flop = std::stoull(f[8]);
        r.cf = std::stod(f[9]);
        r.phases.t_symbolic = std::stod(f[10]);
        r.phases.t_expand = std::stod(f[11]);
        r.phases.t_sort = std::stod(f[12]);
        r.phases.t_compress = std::stod(f[13]);
        r.phases.t_convert = std::stod(f[14]);
        r.phases.t_total = std::stod(f[15]);
        r.phases.mflops = std::stod(f[16]);
        r.phases.bw_expand = std::stod(f[17]);
        r.phases.bw_sort = std::stod(f[18]);
        r.phases.bw_compress = std::stod(f[19]);
        r.ai_upper = std::stod(f[20]);
        r.ai_outer_lower = std::stod(f[21]);
        r.peak_mflops = std::stod(f[22]);
        r.measured_over_peak = std::stod(f[23]);
        records.push_back(r);
    }
    return records;
}

void emit_plotdata(const std::vector<BenchRecord>& records, const std::string& path, double beta,
                   std::optional<double> peak_compute_mflops) {
    std::ofstream out(path);
    if (!out) throw parse_error(path + ": cannot open for writing");

    out << "# measured points: ai_flops_per_byte mflops algo matrix\n";
    double ai_max = 0.0;
    for (const BenchRecord& r : records) {
        out << fmt(r.ai_outer_lower) << ' ' << fmt(r.phases.mflops) << ' ' << r.algo << ' '
            << r.matrix << "\n";
        ai_max = std::max(ai_max, r.ai_upper);
    }
    if (ai_max == 0.0) ai_max = 1.0;

    out << "\n\n# roofline ceiling: ai_flops_per_byte mflops\n";
    const double beta_mflops_per_ai = beta / 1e6;
    const double ai_lo = 1e-3;
    if (peak_compute_mflops) {
        const double knee = *peak_compute_mflops / beta_mflops_per_ai;
        out << fmt(ai_lo) << ' ' << fmt(beta_mflops_per_ai * ai_lo) << "\n";
        out << fmt(knee) << ' ' << fmt(*peak_compute_mflops) << "\n";
        out << fmt(std::max(4.0 * knee, ai_max)) << ' ' << fmt(*peak_compute_mflops) << "\n";
    } else {
        out << fmt(ai_lo) << ' ' << fmt(beta_mflops_per_ai * ai_lo) << "\n";
        out << fmt(2.0 * ai_max) << ' ' << fmt(beta_mflops_per_ai * 2.0 * ai_max) << "\n";
    }
    if (!out) throw parse_error(path + ": write failed");
}

}  // namespace spgemm
