#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "extremo/orthants.hpp"
#include "extremo/time_series.hpp"

namespace extremo {

/// Marginal and joint exceedance indicator sequences at a fixed lag.
struct ExceedanceIndicators {
    std::vector<std::uint8_t> marginal;  // 1 iff X_i in a*A
    std::vector<std::uint8_t> joint;     // 1 iff X_i in a*A and X_{i+lag} in a*B
};

/**
 * Indicator sequences for i = 1..n with n = series.length() - lag.
 * joint[i] <= marginal[i] holds by construction.
 */
ExceedanceIndicators exceedance_indicators(const TimeSeries& series, double a,
                                           const OrthantSetPair& pair, std::size_t lag);

/// Per-observation membership flags for a*A over the whole series, no lag.
std::vector<std::uint8_t> membership_a(const TimeSeries& series, double a,
                                       const OrthantSetPair& pair);

/// Per-observation membership flags for a*B over the whole series.
std::vector<std::uint8_t> membership_b(const TimeSeries& series, double a,
                                       const OrthantSetPair& pair);

/**
 * Plug-in estimate of v_n = P{X not in (-inf, a * x_star)^d}: the fraction
 * of observations with some coordinate >= a * x_star. Nonincreasing in both
 * a and x_star.
 */
double estimate_vn(const TimeSeries& series, double a, double x_star);

}  // namespace extremo
