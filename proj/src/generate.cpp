#include "spgemm/generate.hpp"

#include <algorithm>
#include <cmath>

namespace spgemm {

void validate(const GenSpec& spec) {
    if (spec.scale < 1 || spec.scale > 30)
        throw parameter_error("scale must be in [1,30], got " + std::to_string(spec.scale));
    if (spec.edge_factor < 1) throw parameter_error("edge_factor must be >= 1");
    const auto& p = spec.rmat_params;
    double sum = p[0] + p[1] + p[2] + p[3];
    if (std::abs(sum - 1.0) > 1e-12)
        throw parameter_error("rmat probabilities sum to " + std::to_string(sum) + ", not 1");
    for (double q : p)
        if (q < 0.0) throw parameter_error("rmat probabilities must be nonnegative");
}

CooMatrix gen_er(const GenSpec& spec) {
    validate(spec);
    if (spec.kind != GenKind::ER) throw parameter_error("gen_er called with non-ER spec");
    for (double q : spec.rmat_params)
        if (std::abs(q - 0.25) > 1e-12)
            throw parameter_error("ER requires uniform quadrant probabilities of 0.25");
    const index_t n = index_t{1} << spec.scale;
    const index_t d = spec.edge_factor;
    if (d > n)
        throw parameter_error("edge_factor " + std::to_string(d) + " exceeds nrows " +
                              std::to_string(n));

    CooMatrix out;
    out.dims = {n, n};
    out.entries.resize(static_cast<std::size_t>(n) * d);

#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(n); ++j) {
        SplitMix64 rng(split_seed(spec.seed, static_cast<std::uint64_t>(j)));
        // Floyd's sampling: d distinct rows, uniform without replacement.
        CooEntry* col = out.entries.data() + static_cast<std::size_t>(j) * d;
        std::size_t filled = 0;
        for (index_t t = n - d; t < n; ++t) {
            index_t r = static_cast<index_t>(rng.next_below(t + 1));
            bool seen = false;
            for (std::size_t s = 0; s < filled; ++s)
                if (col[s].row == r) {
                    seen = true;
                    break;
                }
            col[filled++] = {seen ? t : r, static_cast<index_t>(j), 1.0};
        }
    }
    return out;
}

CooMatrix gen_rmat(const GenSpec& spec) {
    validate(spec);
    const index_t n = index_t{1} << spec.scale;
    const std::uint64_t nedges = static_cast<std::uint64_t>(spec.edge_factor) << spec.scale;
    const auto& p = spec.rmat_params;
    const double cut_a = p[0];
    const double cut_ab = p[0] + p[1];
    const double cut_abc = p[0] + p[1] + p[2];

    CooMatrix out;
    out.dims = {n, n};
    out.entries.resize(nedges);

#pragma omp parallel for schedule(static)
    for (std::int64_t e = 0; e < static_cast<std::int64_t>(nedges); ++e) {
        SplitMix64 rng(split_seed(spec.seed, static_cast<std::uint64_t>(e)));
        index_t row = 0, col = 0;
        for (int level = spec.scale - 1; level >= 0; --level) {
            double u = rng.next_unit();
            if (u >= cut_ab) row |= index_t{1} << level;       // quadrant c or d
            if (u >= cut_abc || (u >= cut_a && u < cut_ab))    // quadrant d or b
                col |= index_t{1} << level;
        }
        out.entries[e] = {row, col, 1.0};
    }

    // Collapse duplicate edges; the result is an unweighted pattern.
    std::sort(out.entries.begin(), out.entries.end(), coo_order_row_major);
    out.entries.erase(std::unique(out.entries.begin(), out.entries.end(),
                                  [](const CooEntry& a, const CooEntry& b) {
                                      return a.row == b.row && a.col == b.col;
                                  }),
                      out.entries.end());
    return out;
}

}  // namespace spgemm
