#include <cmath>

#include "doctest.h"
#include "spgemm/generate.hpp"
#include "spgemm/roofline.hpp"

using namespace spgemm;

TEST_CASE("compression_factor") {
    CHECK(compression_factor({0, 0, 9000000, 27500000}) == doctest::Approx(3.06).epsilon(0.01));
    // hood: table prints 16.41 after rounding; 1% absorbs it.
    CHECK(compression_factor({0, 0, 34200000, 562000000}) ==
          doctest::Approx(16.41).epsilon(0.01));
    CHECK(compression_factor({0, 0, 100, 100}) == 1.0);
    CHECK(std::isnan(compression_factor({0, 0, 0, 0})));
}

TEST_CASE("ai bounds at the paper's anchor points") {
    CHECK(ai_upper(1.0, 16.0) == 0.0625);          // 1/16
    CHECK(ai_upper(8.0, 16.0) == 0.5);
    CHECK(ai_upper(3.06, 16.0) == doctest::Approx(0.19125).epsilon(1e-12));

    CHECK(ai_col_lower(1.0, 16.0) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
    CHECK(ai_col_lower(2.0, 16.0) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));

    CHECK(ai_outer_lower(1.0, 16.0) == 0.0125);    // 1/80
    CHECK(ai_outer_lower(3.06, 16.0) == doctest::Approx(3.06 / (9.12 * 16.0)).epsilon(1e-15));
}

TEST_CASE("ai lower bounds approach their asymptotes") {
    CHECK(ai_col_lower(1e9, 16.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-6));
    CHECK(ai_outer_lower(1e9, 16.0) == doctest::Approx(1.0 / 32.0).epsilon(1e-6));
}

TEST_CASE("peak_flops") {
    CHECK(peak_flops(50e9, 1.0 / 16.0) == doctest::Approx(3.125e9));  // prints as 3.13 GFLOPS
    CHECK(peak_flops(40e9, 1.0 / 80.0) == doctest::Approx(500e6));
    CHECK(peak_flops(50e9, 0.0) == 0.0);
    MachineModel m{50e9, 16.0};
    CHECK(peak_flops(m, ai_upper(1.0, m.b)) == doctest::Approx(3.125e9));
}

TEST_CASE("traffic_model byte counts") {
    MultiplyStats s{1000, 1000, 4000, 5000};
    TrafficModel t = traffic_model(s, 16.0);
    CHECK(t.expand_read == 32000.0);
    CHECK(t.expand_write == 80000.0);
    CHECK(t.sort_read == 80000.0);
    CHECK(t.compress_write == 64000.0);
    CHECK(t.total() == 16.0 * (1000 + 1000 + 2 * 5000 + 4000));

    // identity squared at n=4: every count is 4
    MultiplyStats id{4, 4, 4, 4};
    CHECK(traffic_model(id, 16.0).total() == 320.0);
}

TEST_CASE("traffic total reproduces the outer AI bound when nnz counts align") {
    // With nnz(A)=nnz(B)=nnz(C)=flop/cf, flop/total collapses to the outer
    // lower bound formula.
    SplitMix64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const double cf = 1.0 + static_cast<double>(rng.next_below(900)) / 100.0;
        const std::uint64_t nnz = 1000 + rng.next_below(100000);
        const double flop = cf * static_cast<double>(nnz);
        MultiplyStats s{nnz, nnz, nnz, static_cast<std::uint64_t>(flop)};
        const double b = 16.0;
        const double total = b * (3.0 * static_cast<double>(nnz) + 2.0 * flop);
        CHECK(flop / total == doctest::Approx(ai_outer_lower(cf, b)).epsilon(1e-9));
    }
}

TEST_CASE("bound ordering holds across random (cf, b) samples") {
    SplitMix64 rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double cf = 1.0 + static_cast<double>(rng.next() >> 40) / 1e4;
        const double b = 1.0 + static_cast<double>(rng.next_below(64));
        CHECK(ai_outer_lower(cf, b) < ai_col_lower(cf, b));
        CHECK(ai_col_lower(cf, b) < ai_upper(cf, b));
    }
}

TEST_CASE("model functions are monotone in cf") {
    double prev_u = 0.0, prev_c = 0.0, prev_o = 0.0;
    for (double cf = 1.0; cf < 100.0; cf += 0.5) {
        CHECK(ai_upper(cf, 16.0) > prev_u);
        CHECK(ai_col_lower(cf, 16.0) > prev_c);
        CHECK(ai_outer_lower(cf, 16.0) > prev_o);
        prev_u = ai_upper(cf, 16.0);
        prev_c = ai_col_lower(cf, 16.0);
        prev_o = ai_outer_lower(cf, 16.0);
    }
}

TEST_CASE("crossover threshold and outer/column ratio") {
    CHECK(crossover_cf() == 4.0);
    CHECK(ai_ratio_outer_over_col(1.0) == doctest::Approx(3.0 / 5.0));
    double prev = 1.0;
    for (double cf = 1.0; cf < 50.0; cf += 1.0) {
        const double r = ai_ratio_outer_over_col(cf);
        CHECK(r < prev);
        CHECK(r == doctest::Approx(ai_outer_lower(cf, 16.0) / ai_col_lower(cf, 16.0))
                       .epsilon(1e-12));
        prev = r;
    }
}
