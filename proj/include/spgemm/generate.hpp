#pragma once

#include <array>

#include "spgemm/types.hpp"

namespace spgemm {

// splitmix64: the fixed PRNG behind both generators. Seeds are split per
// column (ER) / per edge (RMAT), so generation parallelizes while staying
// bit-deterministic for a given GenSpec.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound), rejection-sampled so the mapping is unbiased
    // and identical on every platform.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(seed ^ (stream * 0xD6E8FEB86659FD93ULL)).next();
}

enum class GenKind { ER, RMAT };

struct GenSpec {
    GenKind kind = GenKind::ER;
    int scale = 4;               // matrix is 2^scale x 2^scale
    index_t edge_factor = 4;     // average nonzeros per column
    std::uint64_t seed = 1;
    std::array<double, 4> rmat_params = {0.25, 0.25, 0.25, 0.25};  // (a,b,c,d)

    static GenSpec er(int scale, index_t edge_factor, std::uint64_t seed) {
        return GenSpec{GenKind::ER, scale, edge_factor, seed, {0.25, 0.25, 0.25, 0.25}};
    }
    // Graph500 parameters.
    static GenSpec rmat(int scale, index_t edge_factor, std::uint64_t seed) {
        return GenSpec{GenKind::RMAT, scale, edge_factor, seed, {0.57, 0.19, 0.19, 0.05}};
    }
};

void validate(const GenSpec& spec);

// Exactly edge_factor distinct rows per column, values 1.0.
CooMatrix gen_er(const GenSpec& spec);

// edge_factor * 2^scale quadrant-descent draws; duplicates collapsed to a
// single entry of value 1.0, so nnz <= edge_factor * 2^scale.
CooMatrix gen_rmat(const GenSpec& spec);

inline CooMatrix generate(const GenSpec& spec) {
    return spec.kind == GenKind::ER ? gen_er(spec) : gen_rmat(spec);
}

}  // namespace spgemm
