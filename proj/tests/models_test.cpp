#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "extremo/models.hpp"
#include "extremo/rng.hpp"

using namespace extremo;

namespace {

double lag1_autocorr(const TimeSeries& s) {
    const std::size_t n = s.length();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += s.value(i);
    mean /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = s.value(i) - mean;
        den += d * d;
        if (i + 1 < n) num += d * (s.value(i + 1) - mean);
    }
    return num / den;
}

}  // namespace

TEST_CASE("degenerate garch is iid with variance alpha0") {
    const auto spec = ModelSpec::garch(2.0, 0.0, 0.0, InnovationDist::standard_normal(), 100);
    RngStream rng(31, 0, 0);
    const auto series = simulate(spec, 100000, rng);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < series.length(); ++i) {
        sum += series.value(i);
        sum2 += series.value(i) * series.value(i);
    }
    const double mean = sum / 100000.0;
    const double var = sum2 / 100000.0 - mean * mean;
    CHECK(std::abs(var - 2.0) < 0.05);
    CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("benchmark garch parameters pass validation") {
    // Unit-scale t8 trips the effective-persistence warning by design.
    const auto spec =
        ModelSpec::garch(1e-4, 0.08, 0.9, InnovationDist::student_t(8.0), 2000);
    CHECK(spec.alpha1 + spec.beta1 < 1.0);
    RngStream rng(32, 0, 0);
    const auto series = simulate(spec, 512, rng);
    CHECK(series.length() == 512);
}

TEST_CASE("garch parameter violations throw") {
    CHECK_THROWS_AS(ModelSpec::garch(0.0, 0.1, 0.1, InnovationDist::standard_normal()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec::garch(1.0, -0.1, 0.1, InnovationDist::standard_normal()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec::ar1(1.0, InnovationDist::standard_normal()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec::ma({}, InnovationDist::standard_normal()),
                    std::invalid_argument);
}

TEST_CASE("simulators are bit-identical for a fixed stream id") {
    const auto spec =
        ModelSpec::garch(1e-4, 0.08, 0.9, InnovationDist::student_t(8.0, true), 500);
    RngStream a(33, stream_purpose::model_series, 5);
    RngStream b(33, stream_purpose::model_series, 5);
    const auto s1 = simulate(spec, 2000, a);
    const auto s2 = simulate(spec, 2000, b);
    CHECK(s1.data() == s2.data());
}

TEST_CASE("ar1 with phi 0 reproduces raw innovations") {
    const auto spec = ModelSpec::ar1(0.0, InnovationDist::symmetrized_frechet(3.0), 50);
    RngStream rng(34, 0, 0);
    const auto series = simulate(spec, 1000, rng);

    RngStream replay(34, 0, 0);
    for (std::size_t t = 0; t < 50 + 1000; ++t) {
        const double eps = sample_symmetrized_frechet(3.0, replay);
        if (t >= 50) REQUIRE(series.value(t - 50) == eps);
    }
}

TEST_CASE("ar1 lag-1 autocorrelation approaches phi") {
    const auto spec = ModelSpec::ar1(0.8, InnovationDist::standard_normal(), 1000);
    RngStream rng(35, 0, 0);
    const auto series = simulate(spec, 100000, rng);
    CHECK(std::abs(lag1_autocorr(series) - 0.8) < 0.01);
}

TEST_CASE("ma output equals the brute-force convolution") {
    const std::vector<double> psi{1.0, 0.5, 0.8};
    const auto spec = ModelSpec::ma(psi, InnovationDist::symmetrized_frechet(3.0));
    RngStream rng(36, 0, 0);
    const auto series = simulate(spec, 200, rng);

    // Replay the innovation stream: q + n draws in time order.
    RngStream replay(36, 0, 0);
    std::vector<double> eps(2 + 200);
    for (double& e : eps) e = sample_symmetrized_frechet(3.0, replay);
    for (std::size_t t = 0; t < 200; ++t) {
        double x = 0.0;
        for (std::size_t j = 0; j < psi.size(); ++j) x += psi[j] * eps[t + 2 - j];
        REQUIRE(series.value(t) == x);
    }
}

TEST_CASE("single-coefficient ma copies its innovations") {
    const auto spec = ModelSpec::ma({1.0}, InnovationDist::standard_normal());
    RngStream rng(37, 0, 0);
    const auto series = simulate(spec, 500, rng);
    RngStream replay(37, 0, 0);
    for (std::size_t t = 0; t < 500; ++t) REQUIRE(series.value(t) == replay.next_normal());
}

TEST_CASE("ma(1,1) lag-1 autocorrelation is one half") {
    const auto spec = ModelSpec::ma({1.0, 1.0}, InnovationDist::standard_normal());
    RngStream rng(38, 0, 0);
    const auto series = simulate(spec, 100000, rng);
    CHECK(std::abs(lag1_autocorr(series) - 0.5) < 0.01);
}

TEST_CASE("symmetrized frechet draws match the closed-form law") {
    RngStream rng(39, 0, 0);
    const int n = 100000;
    std::vector<double> magnitudes;
    magnitudes.reserve(n);
    double sign_sum = 0.0;
    int above_one = 0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_symmetrized_frechet(3.0, rng);
        magnitudes.push_back(std::abs(x));
        sign_sum += (x > 0) ? 1.0 : -1.0;
        if (x > 1.0) ++above_one;
    }
    std::nth_element(magnitudes.begin(), magnitudes.begin() + n / 2, magnitudes.end());
    const double median = magnitudes[n / 2];
    CHECK(std::abs(median - std::pow(std::log(2.0), -1.0 / 3.0)) < 0.01);
    CHECK(std::abs(static_cast<double>(above_one) / n - (1.0 - std::exp(-1.0)) / 2.0) < 0.005);
    CHECK(std::abs(sign_sum / n) < 0.01);
}

TEST_CASE("frechet tail index recovered by a hill estimate") {
    RngStream rng(40, 0, 0);
    const int n = 1000000;
    std::vector<double> magnitudes(n);
    for (double& m : magnitudes) m = std::abs(sample_symmetrized_frechet(3.0, rng));
    const int k = n / 100;  // top 1%
    std::nth_element(magnitudes.begin(), magnitudes.end() - k - 1, magnitudes.end());
    const double cut = magnitudes[n - k - 1];
    double log_sum = 0.0;
    for (int i = n - k; i < n; ++i) {
        log_sum += std::log(magnitudes[i] / cut);
    }
    const double hill = static_cast<double>(k) / log_sum;
    CHECK(hill > 2.7);
    CHECK(hill < 3.3);
}

TEST_CASE("multiplier weights have mean zero and unit variance") {
    RngStream rng(41, 0, 0);
    const std::size_t n = 1000000;
    const auto xi = sample_multipliers(MultiplierDist::scaled_student_t(), n, rng);
    double sum = 0.0, sum2 = 0.0;
    for (double x : xi.xi) {
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum2 / static_cast<double>(n) - mean * mean;
    CHECK(std::abs(mean) < 0.004);
    CHECK(std::abs(var - 1.0) < 0.01);

    RngStream again(41, 0, 0);
    const auto xi2 = sample_multipliers(MultiplierDist::scaled_student_t(), 100, again);
    for (std::size_t i = 0; i < 100; ++i) REQUIRE(xi2.xi[i] == xi.xi[i]);

    CHECK_THROWS_AS(sample_multipliers(MultiplierDist::scaled_student_t(2.0), 4, rng),
                    std::invalid_argument);

    RngStream normal_rng(42, 0, 0);
    const auto gauss = sample_multipliers(MultiplierDist::standard_normal(), 100000, normal_rng);
    double gs = 0.0, gs2 = 0.0;
    for (double x : gauss.xi) {
        gs += x;
        gs2 += x * x;
    }
    CHECK(std::abs(gs / 100000.0) < 0.02);
    CHECK(std::abs(gs2 / 100000.0 - 1.0) < 0.03);
}

TEST_CASE("garch volatility stays positive") {
    const auto spec = ModelSpec::garch(1e-4, 0.08, 0.9, InnovationDist::student_t(8.0, true), 0);
    RngStream rng(43, 0, 0);
    const auto series = simulate(spec, 20000, rng);
    // X_t = sigma_t eps_t with sigma_t > 0: zero values only come from eps == 0.
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < series.length(); ++i) {
        if (series.value(i) == 0.0) ++zeros;
    }
    CHECK(zeros == 0);
}
