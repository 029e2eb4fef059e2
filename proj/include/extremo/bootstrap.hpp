#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "extremo/cluster_process.hpp"
#include "extremo/extremogram.hpp"
#include "extremo/orthants.hpp"
#include "extremo/rng.hpp"
#include "extremo/time_series.hpp"

namespace extremo {

enum class BootstrapScheme { Multiplier, StationaryDMC, StationaryModified };

const char* scheme_name(BootstrapScheme scheme);

/**
 * Index rule for positions t past the end of a length-n segment.
 *
 * PaperModN1 is the published rule X_{(t mod (n-1)) + 1}, reproduced
 * verbatim; Circular is the conventional X_{((t-1) mod n) + 1}. Both leave
 * t <= n unchanged.
 */
enum class WraparoundRule { PaperModN1, Circular };

/// Apply the wraparound rule to a 1-based index t over a segment of length n.
inline std::size_t wrap_index(std::size_t t, std::size_t n, WraparoundRule rule) {
    if (t <= n) return t;
    if (rule == WraparoundRule::PaperModN1) return (t % (n - 1)) + 1;
    return ((t - 1) % n) + 1;
}

/**
 * Replicate matrix of one bootstrap run: B rows, one column per lag.
 * Stationary-scheme cells are count ratios in [0, 1]; multiplier cells are
 * signed weighted ratios and may fall outside [0, 1] (they are never
 * clipped, since only their quantiles are consumed). Cells with a zero
 * denominator are empty.
 */
struct BootstrapReplicates {
    std::vector<std::vector<std::optional<double>>> rows;  // B x (h_max + 1)
    BootstrapScheme scheme = BootstrapScheme::Multiplier;
    ExtremogramEstimate base;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t replicate_count() const noexcept { return rows.size(); }
    [[nodiscard]] std::size_t h_max() const { return base.h_max(); }
};

/**
 * One multiplier-bootstrap replicate row: block j of the first
 * floor(n/r) * r effective observations is reweighted by (1 + xi_j) in both
 * the joint and marginal sums,
 *
 *   rho*(h) = sum_j (1+xi_j) C_j(h) / sum_j (1+xi_j) M_j.
 *
 * xi must have exactly floor((length - h_max) / block_length) entries.
 * With xi = 0 this reproduces the base estimator restricted to the blocked
 * range exactly.
 */
std::vector<std::optional<double>> multiplier_bootstrap_extremogram(
    const TimeSeries& series, double a, const OrthantSetPair& pair, std::size_t h_max,
    std::size_t block_length, const MultiplierVector& xi);

/// Per-block joint and marginal exceedance counts over the blocked range;
/// computing them once lets many multiplier rows share the work.
struct BlockExceedanceCounts {
    std::size_t block_count = 0;
    std::size_t h_max = 0;
    std::vector<double> marginal;  // per block
    std::vector<double> joint;     // block-major: joint[j * (h_max + 1) + h]
};

BlockExceedanceCounts block_exceedance_counts(const TimeSeries& series, double a,
                                              const OrthantSetPair& pair, std::size_t h_max,
                                              std::size_t block_length);

/// One replicate row from precomputed block counts and weights 1 + xi_j.
std::vector<std::optional<double>> weighted_ratio_row(const BlockExceedanceCounts& counts,
                                                      const MultiplierVector& xi);

/**
 * Stationary-bootstrap resampling plan: blocks of geometric random length
 * (mean r) starting at uniform positions, glued until n positions are
 * filled, the last block truncated. Source index of output position
 * S_{j-1} + i is start_j - 1 + i, wrapped when it exceeds n.
 */
struct StationaryScheme {
    struct Block {
        std::size_t start = 1;  // 1-based source start K_j
        std::size_t length = 0; // truncated length L*_j
    };
    std::vector<Block> blocks;
    std::size_t total = 0;  // sum of lengths == n
};

/// Draw a resampling plan for n positions; per block the start K is drawn
/// before the length L.
StationaryScheme draw_stationary_scheme(std::size_t n, double mean_block_length,
                                        RngStream& rng);

/// 0-based source index per output position of a plan over n positions.
std::vector<std::size_t> stationary_indices(const StationaryScheme& scheme, std::size_t n,
                                            WraparoundRule rule = WraparoundRule::PaperModN1);

/// Stationary bootstrap of a whole series: output length equals input
/// length and every output value is an input value.
TimeSeries stationary_bootstrap_dmc(const TimeSeries& series, double mean_block_length,
                                    RngStream& rng,
                                    WraparoundRule rule = WraparoundRule::PaperModN1);

/// Index form of the same draw: 0-based source index per output position.
std::vector<std::size_t> dmc_resample_indices(std::size_t n, double mean_block_length,
                                              RngStream& rng,
                                              WraparoundRule rule = WraparoundRule::PaperModN1);

/// Summand convention for the extremogram of a DMC-resampled series, which
/// has no spare observations beyond its end.
enum class DmcConvention {
    AllNWrap,   // n summands, lagged index wrapped within the resample
    Truncated,  // numerator over i = 1..n-h, denominator over i = 1..n
};

/**
 * Extremogram of a resampled series (one DMC replicate row). Under
 * AllNWrap both sums run over every position, the lagged partner being
 * looked up through `rule`; under Truncated the numerator simply stops
 * h positions early.
 */
std::vector<std::optional<double>> dmc_replicate_extremogram(
    const TimeSeries& resampled, double a, const OrthantSetPair& pair, std::size_t h_max,
    WraparoundRule rule = WraparoundRule::PaperModN1,
    DmcConvention convention = DmcConvention::AllNWrap);

/// Same replicate row computed from a resampling index map and
/// per-observation membership flags of the source series.
std::vector<std::optional<double>> dmc_replicate_from_indices(
    std::span<const std::size_t> indices, std::span<const std::uint8_t> in_a,
    std::span<const std::uint8_t> in_b, std::size_t h_max,
    WraparoundRule rule = WraparoundRule::PaperModN1,
    DmcConvention convention = DmcConvention::AllNWrap);

/**
 * Modified stationary bootstrap value at lag h for a given resampling plan
 * over n positions: the plan is applied to the bivariate series
 * (X_t, X_{t+h}), so only pairs at true lag h are ever compared. Wrapped
 * source indices stay within 1..n-1 and the series must extend to n + h
 * observations. Empty when no resampled position is marginally extreme.
 */
std::optional<double> modified_stationary_replicate(const TimeSeries& series, double a,
                                                    const OrthantSetPair& pair, std::size_t h,
                                                    const StationaryScheme& scheme,
                                                    std::size_t n,
                                                    WraparoundRule rule =
                                                        WraparoundRule::PaperModN1);

/// Flag-level form of the modified replicate: in_a/in_b cover the source
/// series (length >= n + h), the plan covers n positions.
std::optional<double> modified_replicate_from_flags(const StationaryScheme& scheme,
                                                    std::size_t n,
                                                    std::span<const std::uint8_t> in_a,
                                                    std::span<const std::uint8_t> in_b,
                                                    std::size_t h,
                                                    WraparoundRule rule =
                                                        WraparoundRule::PaperModN1);

/// Draw-and-evaluate form with n = series.length() - h.
std::optional<double> stationary_bootstrap_modified(const TimeSeries& series, double a,
                                                    const OrthantSetPair& pair, std::size_t h,
                                                    double mean_block_length, RngStream& rng,
                                                    WraparoundRule rule =
                                                        WraparoundRule::PaperModN1);

/// Lower and upper empirical alpha/2 quantiles of one replicate column.
struct QuantilePair {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t defined_count = 0;
    std::size_t undefined_count = 0;
};

/**
 * Over the defined replicates: lower = ceil((alpha/2) B)-th ascending order
 * statistic, upper = the same index counted from the top. Empty when every
 * replicate is undefined.
 */
std::optional<QuantilePair> try_bootstrap_quantiles(
    std::span<const std::optional<double>> column, double alpha);

/// Throwing form of the above (no-interval error when all replicates are
/// undefined).
QuantilePair bootstrap_quantiles(std::span<const std::optional<double>> column, double alpha);

struct ConfidenceInterval {
    enum class Method { Direct, Transfer };

    double lower = 0.0;
    double upper = 0.0;
    double nominal_level = 0.0;  // 1 - alpha
    Method method = Method::Direct;
    double p1 = 0.0, p2 = 0.0;   // Transfer only
    // The raw interval can miss [0, 1] entirely; the intersection is then
    // empty and covers nothing. Endpoints collapse to the nearer boundary.
    bool empty = false;

    [[nodiscard]] double width() const noexcept { return empty ? 0.0 : upper - lower; }
    [[nodiscard]] bool covers(double x) const noexcept {
        return !empty && lower <= x && x <= upper;
    }
};

/// Basic bootstrap interval [2 rho - u_b, 2 rho - l_b] clipped to [0, 1].
ConfidenceInterval ci_direct(double base, double lower_q, double upper_q,
                             double nominal_level);

/**
 * Threshold-transfer interval: the bootstrap error at the easier threshold
 * p2 is rescaled by sqrt(p2/p1) to stand in for the error at p1,
 *
 *   [base_p1 - c (u_b - base_p2), base_p1 - c (l_b - base_p2)] /\ [0,1].
 *
 * Evaluated as (base_p1 + c * base_p2) - c * q so that p1 == p2 reduces to
 * ci_direct bit for bit. Requires 0 < p1 <= p2 < 1.
 */
ConfidenceInterval ci_transfer(double base_p1, double base_p2, double lower_q, double upper_q,
                               double p1, double p2, double nominal_level);

/// Simultaneous sup-norm band over the lag grid.
struct SimultaneousBand {
    double radius = 0.0;  // lambda_alpha
    double level = 0.0;   // alpha: target replicate mass inside the band
    std::size_t defined_rows = 0;
};

/**
 * Smallest lambda >= 0 such that at least a fraction `alpha` of the
 * fully-defined replicate rows satisfy max_h |rho*_b(h) - rho(h)| <= lambda:
 * the ceil(alpha B)-th ascending order statistic of the row-wise sup
 * deviations from the base estimate. Throws when no row is fully defined.
 */
SimultaneousBand simultaneous_band(const BootstrapReplicates& replicates, double alpha);

/// Replicate matrix as CSV: header h0..hH, one row per replicate, undefined
/// cells as the literal token NA.
void write_replicates_csv(const BootstrapReplicates& replicates, std::ostream& out);

}  // namespace extremo
