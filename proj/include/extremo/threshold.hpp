#pragma once

#include <cstddef>
#include <string>

#include "extremo/time_series.hpp"

namespace extremo {

/**
 * How to pick the normalizing threshold for exceedance statistics.
 *
 * OrderStatistic(k) mirrors the intermediate-sequence normalization: the
 * (n - floor(n/k))-th ascending order statistic of the observation norms,
 * i.e. the (floor(n/k) + 1) largest norm. EmpiricalQuantile(p) is the
 * ceil((1-p) * n)-th ascending order statistic of a scalar series. Fixed(a)
 * passes a through unchanged.
 */
struct ThresholdSpec {
    enum class Mode { OrderStatistic, EmpiricalQuantile, Fixed };

    Mode mode = Mode::Fixed;
    std::size_t k = 0;  // OrderStatistic
    double p = 0.0;     // EmpiricalQuantile
    double a = 0.0;     // Fixed

    static ThresholdSpec order_statistic(std::size_t k);
    static ThresholdSpec empirical_quantile(double p);
    static ThresholdSpec fixed(double a);

    /// Compact text form, e.g. "k32", "q0.05", "a1.7"; used in cache keys.
    [[nodiscard]] std::string describe() const;
};

/**
 * Resolve a threshold spec against a series.
 *
 * Uses every observation of `series`. OrderStatistic applies the maximum
 * norm first; EmpiricalQuantile requires a scalar series. Order-statistic
 * indices follow the type-1 (ascending, ceil) convention throughout, so
 * results are exactly reproducible. Throws std::invalid_argument on spec
 * violations and std::runtime_error if the resolved threshold is <= 0
 * (exceedance sets anchored at positive cornerpoints become degenerate).
 */
double estimate_threshold(const TimeSeries& series, const ThresholdSpec& spec);

}  // namespace extremo
