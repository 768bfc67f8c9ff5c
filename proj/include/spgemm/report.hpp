#pragma once

#include <chrono>

#include "spgemm/roofline.hpp"

namespace spgemm {

struct WallTimer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - t0).count();
        t0 = now;
        return s;
    }
};

// Wall time per pipeline phase plus the Table-style modeled traffic and the
// sustained bandwidth each phase derives from it. Column algorithms fill
// only t_symbolic and t_total.
struct PhaseReport {
    double t_symbolic = 0.0;
    double t_expand = 0.0;
    double t_sort = 0.0;
    double t_compress = 0.0;
    double t_convert = 0.0;
    double t_total = 0.0;

    double bytes_expand = 0.0;
    double bytes_sort = 0.0;
    double bytes_compress = 0.0;
    double bw_expand = 0.0;    // bytes/s
    double bw_sort = 0.0;
    double bw_compress = 0.0;
    double mflops = 0.0;       // flop / t_total / 1e6

    void derive(const MultiplyStats& stats, double b_bytes) {
        const TrafficModel t = traffic_model(stats, b_bytes);
        bytes_expand = t.expand_read + t.expand_write;
        bytes_sort = t.sort_read;
        bytes_compress = t.compress_write;
        if (t_expand > 0.0) bw_expand = bytes_expand / t_expand;
        if (t_sort > 0.0) bw_sort = bytes_sort / t_sort;
        if (t_compress > 0.0) bw_compress = bytes_compress / t_compress;
        if (t_total > 0.0) mflops = static_cast<double>(stats.flop) / t_total / 1e6;
    }
};

}  // namespace spgemm
