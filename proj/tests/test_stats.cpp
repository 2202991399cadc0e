#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/rng.hpp"
#include "qnet/stats.hpp"

using namespace qnet;

TEST_CASE("round_half_even rounds ties to the even neighbor") {
    REQUIRE(round_half_even(0.5) == 0);
    REQUIRE(round_half_even(1.5) == 2);
    REQUIRE(round_half_even(2.5) == 2);
    REQUIRE(round_half_even(3.5) == 4);
    REQUIRE(round_half_even(-0.5) == 0);
    REQUIRE(round_half_even(-1.5) == -2);
    REQUIRE(round_half_even(-2.5) == -2);
    REQUIRE(round_half_even(2.4999) == 2);
    REQUIRE(round_half_even(2.5001) == 3);
    REQUIRE(round_half_even(7.0) == 7);
    REQUIRE(round_half_even(0.0) == 0);
    REQUIRE(round_half_even(612.6) == 613);
    REQUIRE(round_half_even(612.5) == 612);
}

TEST_CASE("mean, sample sd and standard error on a fixed vector") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    REQUIRE(mean(v) == 2.5);
    // Sample variance 5/3.
    REQUIRE(sample_sd(v) == Catch::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    REQUIRE(standard_error(v) == Catch::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-15));

    const std::vector<double> constant{3.5, 3.5, 3.5};
    REQUIRE(mean(constant) == 3.5);
    REQUIRE(sample_sd(constant) == 0.0);
    REQUIRE(standard_error(constant) == 0.0);

    const std::vector<double> single{4.0};
    REQUIRE(mean(single) == 4.0);
    REQUIRE(sample_sd(single) == 0.0);
}

TEST_CASE("linear fit recovers exact lines") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(0.25 * i);
        y.push_back(2.0 * x.back() + 1.0);
    }
    const LinearFit fit = linear_fit(x, y);
    REQUIRE(fit.slope == Catch::Approx(2.0).epsilon(1e-12));
    REQUIRE(fit.intercept == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(fit.r == Catch::Approx(1.0).epsilon(1e-12));

    for (double& v : y) v = -v;
    const LinearFit neg = linear_fit(x, y);
    REQUIRE(neg.slope == Catch::Approx(-2.0).epsilon(1e-12));
    REQUIRE(neg.r == Catch::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("chi-squared survival matches closed forms") {
    // df = 2: sf(x) = exp(-x/2).
    for (const double x : {0.1, 1.0, 3.0, 10.0, 30.0}) {
        REQUIRE(chi_squared_sf(x, 2) == Catch::Approx(std::exp(-x / 2.0)).epsilon(1e-10));
    }
    // df = 4: sf(x) = exp(-x/2) (1 + x/2).
    for (const double x : {0.5, 2.0, 8.0, 20.0}) {
        REQUIRE(chi_squared_sf(x, 4) ==
                Catch::Approx(std::exp(-x / 2.0) * (1.0 + x / 2.0)).epsilon(1e-10));
    }
    // df = 1: sf(x) = erfc(sqrt(x/2)).
    for (const double x : {0.2, 1.0, 4.0, 9.0}) {
        REQUIRE(chi_squared_sf(x, 1) ==
                Catch::Approx(std::erfc(std::sqrt(x / 2.0))).epsilon(1e-9));
    }
    // df = 10: sf(x) = exp(-x/2) sum_{k<5} (x/2)^k / k!.
    for (const double x : {2.0, 9.0, 18.0, 35.0}) {
        double sum = 0.0, term = 1.0;
        for (int k = 0; k < 5; ++k) {
            sum += term;
            term *= (x / 2.0) / (k + 1);
        }
        REQUIRE(chi_squared_sf(x, 10) ==
                Catch::Approx(std::exp(-x / 2.0) * sum).epsilon(1e-9));
    }
    REQUIRE(chi_squared_sf(0.0, 3) == 1.0);
}

TEST_CASE("two-sample histogram test accepts identical and rejects disjoint data") {
    std::map<int, long long> a, b;
    for (int k = 1; k <= 8; ++k) {
        a[k] = 100 * k;
        b[k] = 100 * k;
    }
    const ChiSquareResult same = two_sample_histogram_chi2(a, b);
    REQUIRE(same.statistic == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(same.p_value == Catch::Approx(1.0).epsilon(1e-12));

    std::map<int, long long> lo, hi;
    for (int k = 1; k <= 4; ++k) lo[k] = 500;
    for (int k = 5; k <= 8; ++k) hi[k] = 500;
    const ChiSquareResult diff = two_sample_histogram_chi2(lo, hi);
    REQUIRE(diff.p_value < 1e-6);
}

TEST_CASE("two-sample histogram test pools sparse cells") {
    // Eight cells of 3 vs 3: the minimum expected count of 5 forces pairs of
    // neighboring cells to merge, leaving 4 pooled cells and df = 3.
    std::map<int, long long> a, b;
    for (int k = 1; k <= 8; ++k) {
        a[k] = 3;
        b[k] = 3;
    }
    const ChiSquareResult pooled = two_sample_histogram_chi2(a, b);
    REQUIRE(pooled.df == 3);
    REQUIRE(pooled.statistic == Catch::Approx(0.0).margin(1e-12));

    // A sparse tail folds into the last pooled cell instead of standing alone.
    std::map<int, long long> c, d;
    for (int k = 1; k <= 4; ++k) {
        c[k] = 10;
        d[k] = 10;
    }
    c[5] = 1;
    d[5] = 1;
    const ChiSquareResult tail = two_sample_histogram_chi2(c, d);
    REQUIRE(tail.df == 3);

    // Too little data to form two pooled cells is an error, not a verdict.
    std::map<int, long long> tiny_a{{1, 1}, {2, 1}}, tiny_b{{1, 1}, {2, 1}};
    REQUIRE_THROWS_AS(two_sample_histogram_chi2(tiny_a, tiny_b), data_error);
}

TEST_CASE("two-sample histogram test is calibrated on same-distribution draws") {
    // Two independent samples from one geometric-ish distribution should not
    // be flagged. Fixed seed keeps this deterministic.
    RngStream rng(20240811);
    std::map<int, long long> a, b;
    for (int i = 0; i < 20000; ++i) {
        int ka = 1, kb = 1;
        while (rng.uniform01() < 0.6 && ka < 30) ++ka;
        while (rng.uniform01() < 0.6 && kb < 30) ++kb;
        ++a[ka];
        ++b[kb];
    }
    const ChiSquareResult res = two_sample_histogram_chi2(a, b);
    REQUIRE(res.p_value > 1e-4);
}
