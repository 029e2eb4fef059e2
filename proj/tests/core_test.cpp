#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "extremo/blocks.hpp"
#include "extremo/csv.hpp"
#include "extremo/exceedance.hpp"
#include "extremo/order_stats.hpp"
#include "extremo/rng.hpp"
#include "extremo/threshold.hpp"
#include "extremo/time_series.hpp"

using namespace extremo;

namespace {

TimeSeries ramp(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i + 1);
    return TimeSeries(std::move(v));
}

TimeSeries random_series(RngStream& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = 10.0 * rng.next_open();
    return TimeSeries(std::move(v));
}

}  // namespace

TEST_CASE("time series construction validates input") {
    CHECK_THROWS_AS(TimeSeries({}), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries({1.0, INFINITY}), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries({1.0, 2.0, 3.0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries({1.0}, 0), std::invalid_argument);

    const TimeSeries vec({1.0, -2.0, 3.0, 4.0}, 2);
    CHECK(vec.length() == 2);
    CHECK(vec.dim() == 2);
    CHECK(vec.max_norm(0) == 2.0);
    CHECK(vec.max_coord(0) == 1.0);
    CHECK(vec.max_norm(1) == 4.0);
}

TEST_CASE("partition_blocks matches the floor-division contract") {
    const auto s = partition_blocks(10, 3);
    CHECK(s.block_count == 3);
    CHECK(s.block_range(0) == std::pair<std::size_t, std::size_t>{0, 3});
    CHECK(s.block_range(2) == std::pair<std::size_t, std::size_t>{6, 9});
    CHECK(s.excluded_count() == 1);

    CHECK(partition_blocks(10, 10).block_count == 1);
    CHECK(partition_blocks(2000, 100).block_count == 20);

    CHECK_THROWS_AS(partition_blocks(10, 0), std::invalid_argument);
    CHECK_THROWS_AS(partition_blocks(10, 11), std::invalid_argument);
}

TEST_CASE("partition_blocks covers the sample without overlap") {
    RngStream rng(11, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.next_below(300);
        const std::size_t r = 1 + rng.next_below(n);
        const auto s = partition_blocks(n, r);
        std::vector<int> hits(n, 0);
        for (std::size_t j = 0; j < s.block_count; ++j) {
            const auto [first, last] = s.block_range(j);
            REQUIRE(last - first == r);
            for (std::size_t i = first; i < last; ++i) ++hits[i];
        }
        std::size_t covered = 0;
        for (int h : hits) {
            REQUIRE(h <= 1);
            covered += static_cast<std::size_t>(h);
        }
        REQUIRE(covered == s.covered_count());
        REQUIRE(covered + s.excluded_count() == n);
    }
}

TEST_CASE("estimate_threshold resolves each spec mode") {
    const auto series10 = ramp(10);
    CHECK(estimate_threshold(series10, ThresholdSpec::order_statistic(5)) == 8.0);

    const auto series100 = ramp(100);
    CHECK(estimate_threshold(series100, ThresholdSpec::empirical_quantile(0.05)) == 95.0);

    CHECK(estimate_threshold(series10, ThresholdSpec::fixed(1.7)) == 1.7);
}

TEST_CASE("order-statistic threshold equals the sort oracle") {
    RngStream rng(12, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.next_below(200);
        const auto series = random_series(rng, n);
        const std::size_t k = 2 + rng.next_below(n);  // floor(n/k) >= ... checked below
        const std::size_t tail = n / k;
        if (tail < 1 || n - tail < 1) continue;

        std::vector<double> sorted(series.data());
        std::sort(sorted.begin(), sorted.end());
        const double oracle = sorted[n - tail - 1];
        CHECK(estimate_threshold(series, ThresholdSpec::order_statistic(k)) == oracle);
    }
}

TEST_CASE("thresholds are scale equivariant") {
    RngStream rng(13, 0, 0);
    for (double c : {2.0, 0.5, 10.0, 1.0 / 3.0, 7000.0}) {
        const auto series = random_series(rng, 157);
        std::vector<double> scaled(series.data());
        for (double& x : scaled) x *= c;
        const TimeSeries scaled_series(std::move(scaled));

        const auto spec = ThresholdSpec::empirical_quantile(0.1);
        const double a = estimate_threshold(series, spec);
        const double a_scaled = estimate_threshold(scaled_series, spec);
        CHECK(a_scaled == doctest::Approx(c * a).epsilon(1e-14));
    }
}

TEST_CASE("estimate_threshold rejects bad specs and degenerate results") {
    const auto series = ramp(10);
    CHECK_THROWS_AS(estimate_threshold(series, ThresholdSpec::order_statistic(20)),
                    std::invalid_argument);  // floor(10/20) = 0
    const TimeSeries vec({1.0, 2.0, 3.0, 4.0}, 2);
    CHECK_THROWS_AS(estimate_threshold(vec, ThresholdSpec::empirical_quantile(0.5)),
                    std::invalid_argument);
    const TimeSeries negative({-5.0, -4.0, -3.0, -2.0, -1.0});
    CHECK_THROWS_AS(estimate_threshold(negative, ThresholdSpec::empirical_quantile(0.5)),
                    std::runtime_error);
    CHECK_THROWS_AS(ThresholdSpec::empirical_quantile(1.0), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdSpec::fixed(0.0), std::invalid_argument);
}

TEST_CASE("exceedance indicators match hand enumeration") {
    const TimeSeries x({2.0, 3.0, 0.5, 2.5, 2.6});
    const auto pair = OrthantSetPair::tail(1.0);
    const auto ind = exceedance_indicators(x, 1.0, pair, 1);
    CHECK(ind.marginal == std::vector<std::uint8_t>{1, 1, 0, 1});
    CHECK(ind.joint == std::vector<std::uint8_t>{1, 0, 0, 1});

    const auto all_low = exceedance_indicators(TimeSeries({0.1, 0.2, 0.3}), 1.0, pair, 1);
    CHECK(all_low.marginal == std::vector<std::uint8_t>{0, 0});
    CHECK(all_low.joint == std::vector<std::uint8_t>{0, 0});

    const auto lag0 = exceedance_indicators(x, 1.0, pair, 0);
    CHECK(lag0.joint == lag0.marginal);
}

TEST_CASE("joint indicators never exceed marginal ones") {
    RngStream rng(14, 0, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto series = random_series(rng, 30 + rng.next_below(50));
        const std::size_t lag = rng.next_below(5);
        const auto pair = OrthantSetPair::tail(1.0 + rng.next_open());
        const auto ind = exceedance_indicators(series, 1.0 + 5.0 * rng.next_open(), pair, lag);
        for (std::size_t i = 0; i < ind.joint.size(); ++i) {
            REQUIRE(ind.joint[i] <= ind.marginal[i]);
        }
    }
}

TEST_CASE("indicators are invariant under joint scaling of series and threshold") {
    RngStream rng(15, 0, 0);
    for (double c : {2.0, 0.25, 17.0}) {
        const auto series = random_series(rng, 80);
        std::vector<double> scaled(series.data());
        for (double& v : scaled) v *= c;
        const TimeSeries scaled_series(std::move(scaled));
        const auto pair = OrthantSetPair::tail(1.0);
        const double a = 4.0 + rng.next_open();
        const auto base = exceedance_indicators(series, a, pair, 2);
        const auto after = exceedance_indicators(scaled_series, c * a, pair, 2);
        CHECK(base.marginal == after.marginal);
        CHECK(base.joint == after.joint);
    }
}

TEST_CASE("vector orthant membership is coordinatewise and strict") {
    const TimeSeries series({2.0, 3.0,   // in (1,inf)^2
                             2.0, 0.5,   // second coordinate too small
                             -1.0, 4.0,  // first coordinate negative
                             1.0, 1.5},  // boundary: 1 is not > 1
                            2);
    OrthantSetPair pair{{1.0, 1.0}, {1.0, 1.0}, 1.0};
    const auto flags = membership_a(series, 1.0, pair);
    CHECK(flags == std::vector<std::uint8_t>{1, 0, 0, 0});

    const auto ind = exceedance_indicators(series, 1.0, pair, 1);
    CHECK(ind.marginal == std::vector<std::uint8_t>{1, 0, 0});
    CHECK(ind.joint == std::vector<std::uint8_t>{0, 0, 0});

    // v_n needs only one large coordinate (complement of an open lower
    // orthant), unlike A-membership which needs all of them: every
    // observation here has some coordinate >= 1.
    CHECK(estimate_vn(series, 1.0, 1.0) == 1.0);
    CHECK(estimate_vn(series, 2.5, 1.0) == 0.5);  // (2,3) and (-1,4) only
}

TEST_CASE("estimate_vn counts the exceedance fraction") {
    const TimeSeries x({2.0, 0.5, 3.0, 0.1});
    CHECK(estimate_vn(x, 1.0, 1.0) == 0.5);
    CHECK(estimate_vn(TimeSeries({5.0, 6.0}), 1.0, 1.0) == 1.0);
    CHECK(estimate_vn(TimeSeries({0.5, 0.6}), 1.0, 1.0) == 0.0);
}

TEST_CASE("estimate_vn is nonincreasing in a and x_star") {
    RngStream rng(16, 0, 0);
    const auto series = random_series(rng, 200);
    double prev = 1.0;
    for (double a = 0.5; a < 12.0; a += 0.5) {
        const double v = estimate_vn(series, a, 1.0);
        REQUIRE(v <= prev);
        prev = v;
    }
    prev = 1.0;
    for (double x = 0.5; x < 12.0; x += 0.5) {
        const double v = estimate_vn(series, 1.0, x);
        REQUIRE(v <= prev);
        prev = v;
    }
}

TEST_CASE("orthant membership scales with the family") {
    const auto pair = OrthantSetPair::tail(1.0);
    const double obs[] = {2.5};
    CHECK(pair.in_a(obs, 1.0));
    CHECK_FALSE(pair.in_a(obs, 2.5));  // strict inequality
    const auto doubled = pair.scaled(2.0);
    CHECK(doubled.in_a(obs, 1.0));
    const double small[] = {1.5};
    CHECK_FALSE(doubled.in_a(small, 1.0));
}

TEST_CASE("csv round-trips scalar and vector series exactly") {
    RngStream rng(17, 0, 0);
    for (std::size_t dim : {std::size_t{1}, std::size_t{3}}) {
        std::vector<double> values(40 * dim);
        for (double& v : values) v = (rng.next_open() - 0.5) * 1e3;
        const TimeSeries series(values, dim);

        std::ostringstream out;
        write_series_csv(series, out);
        std::istringstream in(out.str());
        const TimeSeries back = read_series_csv(in);
        CHECK(back.dim() == dim);
        CHECK(back.data() == series.data());
    }
}

TEST_CASE("csv reader handles headers and rejects malformed input") {
    std::istringstream with_header("value\n1.5\n2.5\n");
    const auto series = read_series_csv(with_header, true);
    CHECK(series.length() == 2);
    CHECK(series.value(0) == 1.5);

    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(read_series_csv(ragged), std::runtime_error);
    std::istringstream junk("1,abc\n");
    CHECK_THROWS_AS(read_series_csv(junk), std::runtime_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_series_csv(empty), std::runtime_error);
}

TEST_CASE("ceil_index follows the exact-arithmetic convention") {
    CHECK(ceil_index(95.0) == 95);
    CHECK(ceil_index((1.0 - 0.05) * 100.0) == 95);
    CHECK(ceil_index((1.0 - 0.025) * 2000.0) == 1950);
    CHECK(ceil_index((1.0 - 0.01) * 1000.0) == 990);
    CHECK(ceil_index(94.3) == 95);
    CHECK(ceil_index(0.25 * 4.0) == 1);
    CHECK(ceil_index(0.0) == 0);
}
