#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "extremo/orthants.hpp"
#include "extremo/threshold.hpp"
#include "extremo/time_series.hpp"

namespace extremo {

/**
 * Summand convention for the empirical extremogram.
 *
 * AllN (default): numerator and denominator both sum over i = 1..n with
 * n = length - h_max, so the lagged partner X_{i+h} always exists.
 * Truncated: the older convention with n = length, numerator over
 * i = 1..n-h and denominator over i = 1..n.
 */
enum class DenominatorConvention { AllN, Truncated };

/**
 * Per-lag conditional exceedance estimates
 *   rho(h) = #{i: X_i in aA, X_{i+h} in aB} / #{i: X_i in aA},  h = 0..h_max.
 * A lag is undefined (not zero) when the marginal count is zero.
 */
struct ExtremogramEstimate {
    std::vector<std::optional<double>> rho;  // h = 0..h_max
    std::size_t marginal_count = 0;
    std::vector<std::size_t> joint_counts;   // per lag
    double threshold = 0.0;                  // threshold actually used
    ThresholdSpec spec;                      // how the threshold was chosen
    std::size_t effective_n = 0;
    DenominatorConvention convention = DenominatorConvention::AllN;

    [[nodiscard]] std::size_t h_max() const noexcept { return rho.size() - 1; }
    [[nodiscard]] bool defined(std::size_t h) const { return rho[h].has_value(); }
};

/// Empirical extremogram at a fixed threshold a > 0.
/// Requires series.length() > h_max under the AllN convention.
ExtremogramEstimate empirical_extremogram(const TimeSeries& series, double a,
                                          const OrthantSetPair& pair, std::size_t h_max,
                                          DenominatorConvention convention =
                                              DenominatorConvention::AllN);

/// Empirical extremogram with the threshold resolved from `spec` over the
/// whole series first; both the spec and the resolved value are recorded.
/// Scale-equivariant specs (order statistic, quantile) make the estimate
/// invariant under positive rescaling of the series.
ExtremogramEstimate empirical_extremogram_estimated(const TimeSeries& series,
                                                    const ThresholdSpec& spec,
                                                    const OrthantSetPair& pair,
                                                    std::size_t h_max,
                                                    DenominatorConvention convention =
                                                        DenominatorConvention::AllN);

}  // namespace extremo
