#include "extremo/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "extremo/csv.hpp"
#include "extremo/exceedance.hpp"
#include "extremo/order_stats.hpp"

namespace extremo {

const char* scheme_name(BootstrapScheme scheme) {
    switch (scheme) {
        case BootstrapScheme::Multiplier: return "multiplier";
        case BootstrapScheme::StationaryDMC: return "stationary_dmc";
        case BootstrapScheme::StationaryModified: return "stationary_modified";
    }
    return "?";
}

BlockExceedanceCounts block_exceedance_counts(const TimeSeries& series, double a,
                                              const OrthantSetPair& pair, std::size_t h_max,
                                              std::size_t block_length) {
    if (!(a > 0.0)) throw std::invalid_argument("block counts: threshold must be > 0");
    if (series.length() <= h_max) {
        throw std::invalid_argument("block counts: need length > h_max");
    }
    const std::size_t n = series.length() - h_max;
    if (block_length == 0 || block_length > n) {
        throw std::invalid_argument("block counts: bad block length");
    }

    const auto in_a = membership_a(series, a, pair);
    const auto in_b = membership_b(series, a, pair);

    BlockExceedanceCounts out;
    out.block_count = n / block_length;
    out.h_max = h_max;
    out.marginal.assign(out.block_count, 0.0);
    out.joint.assign(out.block_count * (h_max + 1), 0.0);

    for (std::size_t j = 0; j < out.block_count; ++j) {
        const std::size_t first = j * block_length;
        const std::size_t last = first + block_length;
        double m = 0.0;
        for (std::size_t i = first; i < last; ++i) m += in_a[i];
        out.marginal[j] = m;
        for (std::size_t h = 0; h <= h_max; ++h) {
            double c = 0.0;
            for (std::size_t i = first; i < last; ++i) {
                if (in_a[i] && in_b[i + h]) c += 1.0;
            }
            out.joint[j * (h_max + 1) + h] = c;
        }
    }
    return out;
}

std::vector<std::optional<double>> weighted_ratio_row(const BlockExceedanceCounts& counts,
                                                      const MultiplierVector& xi) {
    if (xi.size() != counts.block_count) {
        throw std::invalid_argument("weighted_ratio_row: multiplier count != block count");
    }
    const std::size_t lags = counts.h_max + 1;
    double denom = 0.0;
    std::vector<double> nums(lags, 0.0);
    for (std::size_t j = 0; j < counts.block_count; ++j) {
        const double w = 1.0 + xi.xi[j];
        denom += w * counts.marginal[j];
        for (std::size_t h = 0; h < lags; ++h) nums[h] += w * counts.joint[j * lags + h];
    }

    std::vector<std::optional<double>> row(lags);
    if (denom != 0.0) {
        // Signed weighted ratios on purpose; quantiles consume them raw.
        for (std::size_t h = 0; h < lags; ++h) row[h] = nums[h] / denom;
    }
    return row;
}

std::vector<std::optional<double>> multiplier_bootstrap_extremogram(
    const TimeSeries& series, double a, const OrthantSetPair& pair, std::size_t h_max,
    std::size_t block_length, const MultiplierVector& xi) {
    return weighted_ratio_row(block_exceedance_counts(series, a, pair, h_max, block_length),
                              xi);
}

StationaryScheme draw_stationary_scheme(std::size_t n, double mean_block_length,
                                        RngStream& rng) {
    if (n < 2) throw std::invalid_argument("stationary scheme: need n >= 2");
    if (!(mean_block_length >= 1.0)) {
        throw std::invalid_argument("stationary scheme: mean block length must be >= 1");
    }
    StationaryScheme scheme;
    while (scheme.total < n) {
        StationaryScheme::Block blk;
        blk.start = 1 + static_cast<std::size_t>(rng.next_below(n));
        std::size_t len = static_cast<std::size_t>(rng.next_geometric(mean_block_length));
        if (len > n - scheme.total) len = n - scheme.total;  // truncate the last block
        blk.length = len;
        scheme.total += len;
        scheme.blocks.push_back(blk);
    }
    return scheme;
}

std::vector<std::size_t> stationary_indices(const StationaryScheme& scheme, std::size_t n,
                                            WraparoundRule rule) {
    std::vector<std::size_t> indices;
    indices.reserve(scheme.total);
    for (const auto& blk : scheme.blocks) {
        for (std::size_t i = 1; i <= blk.length; ++i) {
            indices.push_back(wrap_index(blk.start - 1 + i, n, rule) - 1);
        }
    }
    return indices;
}

std::vector<std::size_t> dmc_resample_indices(std::size_t n, double mean_block_length,
                                              RngStream& rng, WraparoundRule rule) {
    return stationary_indices(draw_stationary_scheme(n, mean_block_length, rng), n, rule);
}

TimeSeries stationary_bootstrap_dmc(const TimeSeries& series, double mean_block_length,
                                    RngStream& rng, WraparoundRule rule) {
    const auto indices = dmc_resample_indices(series.length(), mean_block_length, rng, rule);
    std::vector<double> values;
    values.reserve(series.data().size());
    for (std::size_t idx : indices) {
        const auto obs = series.obs(idx);
        values.insert(values.end(), obs.begin(), obs.end());
    }
    return TimeSeries(std::move(values), series.dim());
}

std::vector<std::optional<double>> dmc_replicate_from_indices(
    std::span<const std::size_t> indices, std::span<const std::uint8_t> in_a,
    std::span<const std::uint8_t> in_b, std::size_t h_max, WraparoundRule rule,
    DmcConvention convention) {
    const std::size_t n = indices.size();
    if (n < 2) throw std::invalid_argument("dmc replicate: need n >= 2");
    if (convention == DmcConvention::Truncated && h_max >= n) {
        throw std::invalid_argument("dmc replicate: h_max too large for truncated sums");
    }

    std::size_t marginal = 0;
    for (std::size_t i = 0; i < n; ++i) marginal += in_a[indices[i]];

    std::vector<std::optional<double>> row(h_max + 1);
    if (marginal == 0) return row;

    for (std::size_t h = 0; h <= h_max; ++h) {
        std::size_t joint = 0;
        if (convention == DmcConvention::AllNWrap) {
            for (std::size_t i = 1; i <= n; ++i) {
                const std::size_t partner = wrap_index(i + h, n, rule);
                if (in_a[indices[i - 1]] && in_b[indices[partner - 1]]) ++joint;
            }
        } else {
            for (std::size_t i = 0; i + h < n; ++i) {
                if (in_a[indices[i]] && in_b[indices[i + h]]) ++joint;
            }
        }
        row[h] = static_cast<double>(joint) / static_cast<double>(marginal);
    }
    return row;
}

std::vector<std::optional<double>> dmc_replicate_extremogram(const TimeSeries& resampled,
                                                             double a,
                                                             const OrthantSetPair& pair,
                                                             std::size_t h_max,
                                                             WraparoundRule rule,
                                                             DmcConvention convention) {
    const auto in_a = membership_a(resampled, a, pair);
    const auto in_b = membership_b(resampled, a, pair);
    std::vector<std::size_t> identity(resampled.length());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    return dmc_replicate_from_indices(identity, in_a, in_b, h_max, rule, convention);
}

std::optional<double> modified_replicate_from_flags(const StationaryScheme& scheme,
                                                    std::size_t n,
                                                    std::span<const std::uint8_t> in_a,
                                                    std::span<const std::uint8_t> in_b,
                                                    std::size_t h, WraparoundRule rule) {
    if (n < 2) throw std::invalid_argument("modified replicate: need n >= 2");
    if (in_a.size() < n + h || in_b.size() < n + h) {
        throw std::invalid_argument("modified replicate: flags shorter than n + h");
    }
    // The plan resamples the bivariate series (X_t, X_{t+h}); wrapped source
    // positions stay in 1..n-1 so the lagged partner always exists.
    std::size_t joint = 0, marginal = 0;
    for (const auto& blk : scheme.blocks) {
        for (std::size_t i = 1; i <= blk.length; ++i) {
            const std::size_t t = wrap_index(blk.start - 1 + i, n, rule);
            if (in_a[t - 1]) {
                ++marginal;
                if (in_b[t - 1 + h]) ++joint;
            }
        }
    }
    if (marginal == 0) return std::nullopt;
    return static_cast<double>(joint) / static_cast<double>(marginal);
}

std::optional<double> modified_stationary_replicate(const TimeSeries& series, double a,
                                                    const OrthantSetPair& pair, std::size_t h,
                                                    const StationaryScheme& scheme,
                                                    std::size_t n, WraparoundRule rule) {
    if (series.length() < n + h) {
        throw std::invalid_argument("modified replicate: series shorter than n + h");
    }
    const auto in_a = membership_a(series, a, pair);
    const auto in_b = membership_b(series, a, pair);
    return modified_replicate_from_flags(scheme, n, in_a, in_b, h, rule);
}

std::optional<double> stationary_bootstrap_modified(const TimeSeries& series, double a,
                                                    const OrthantSetPair& pair, std::size_t h,
                                                    double mean_block_length, RngStream& rng,
                                                    WraparoundRule rule) {
    if (series.length() <= h) {
        throw std::invalid_argument("stationary_bootstrap_modified: series shorter than h + 1");
    }
    const std::size_t n = series.length() - h;
    const StationaryScheme scheme = draw_stationary_scheme(n, mean_block_length, rng);
    return modified_stationary_replicate(series, a, pair, h, scheme, n, rule);
}

std::optional<QuantilePair> try_bootstrap_quantiles(
    std::span<const std::optional<double>> column, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("bootstrap_quantiles: alpha must lie in (0, 1)");
    }
    std::vector<double> defined;
    defined.reserve(column.size());
    for (const auto& v : column) {
        if (v) defined.push_back(*v);
    }
    if (defined.empty()) return std::nullopt;

    QuantilePair qp;
    qp.defined_count = defined.size();
    qp.undefined_count = column.size() - defined.size();

    const std::size_t b = defined.size();
    const std::size_t k = ceil_index(alpha / 2.0 * static_cast<double>(b));
    const std::size_t lower_idx = std::max<std::size_t>(k, 1);
    const std::size_t upper_idx = b + 1 - lower_idx;  // same depth from the top
    std::sort(defined.begin(), defined.end());
    qp.lower = defined[lower_idx - 1];
    qp.upper = defined[upper_idx - 1];
    return qp;
}

QuantilePair bootstrap_quantiles(std::span<const std::optional<double>> column, double alpha) {
    auto qp = try_bootstrap_quantiles(column, alpha);
    if (!qp) throw std::runtime_error("bootstrap_quantiles: every replicate is undefined");
    return *qp;
}

namespace {

void clip_to_unit(ConfidenceInterval& ci, double raw_lower, double raw_upper) {
    ci.empty = raw_upper < 0.0 || raw_lower > 1.0;  // intersection with [0,1] is empty
    ci.lower = std::min(std::max(raw_lower, 0.0), 1.0);
    ci.upper = std::min(std::max(raw_upper, 0.0), 1.0);
}

}  // namespace

ConfidenceInterval ci_direct(double base, double lower_q, double upper_q,
                             double nominal_level) {
    if (!(lower_q <= upper_q)) throw std::invalid_argument("ci_direct: quantiles out of order");
    ConfidenceInterval ci;
    ci.method = ConfidenceInterval::Method::Direct;
    ci.nominal_level = nominal_level;
    clip_to_unit(ci, 2.0 * base - upper_q, 2.0 * base - lower_q);
    return ci;
}

ConfidenceInterval ci_transfer(double base_p1, double base_p2, double lower_q, double upper_q,
                               double p1, double p2, double nominal_level) {
    if (!(lower_q <= upper_q)) throw std::invalid_argument("ci_transfer: quantiles out of order");
    if (!(p1 > 0.0 && p1 <= p2 && p2 < 1.0)) {
        throw std::invalid_argument("ci_transfer: need 0 < p1 <= p2 < 1");
    }
    const double c = std::sqrt(p2 / p1);
    // base_p1 - c (q - base_p2), grouped so that p1 == p2 (c = 1, equal
    // bases) evaluates exactly like ci_direct.
    const double shifted = base_p1 + c * base_p2;
    ConfidenceInterval ci;
    ci.method = ConfidenceInterval::Method::Transfer;
    ci.nominal_level = nominal_level;
    ci.p1 = p1;
    ci.p2 = p2;
    clip_to_unit(ci, shifted - c * upper_q, shifted - c * lower_q);
    return ci;
}

SimultaneousBand simultaneous_band(const BootstrapReplicates& replicates, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("simultaneous_band: alpha must lie in (0, 1]");
    }
    const std::size_t lags = replicates.base.h_max() + 1;
    std::vector<double> sups;
    sups.reserve(replicates.rows.size());
    for (const auto& row : replicates.rows) {
        if (row.size() != lags) {
            throw std::invalid_argument("simultaneous_band: ragged replicate matrix");
        }
        double sup = 0.0;
        bool complete = true;
        for (std::size_t h = 0; h < lags; ++h) {
            if (!row[h] || !replicates.base.rho[h]) {
                complete = false;
                break;
            }
            sup = std::max(sup, std::abs(*row[h] - *replicates.base.rho[h]));
        }
        if (complete) sups.push_back(sup);
    }
    if (sups.empty()) {
        throw std::runtime_error("simultaneous_band: no fully-defined replicate row");
    }

    SimultaneousBand band;
    band.level = alpha;
    band.defined_rows = sups.size();
    const std::size_t k =
        std::max<std::size_t>(ceil_index(alpha * static_cast<double>(sups.size())), 1);
    band.radius = ascending_order_statistic_inplace(sups, k);
    return band;
}

void write_replicates_csv(const BootstrapReplicates& replicates, std::ostream& out) {
    const std::size_t lags = replicates.base.h_max() + 1;
    for (std::size_t h = 0; h < lags; ++h) {
        if (h > 0) out << ',';
        out << 'h' << h;
    }
    out << '\n';
    for (const auto& row : replicates.rows) {
        for (std::size_t h = 0; h < lags; ++h) {
            if (h > 0) out << ',';
            if (row[h]) {
                out << format_double(*row[h]);
            } else {
                out << "NA";
            }
        }
        out << '\n';
    }
}

}  // namespace extremo
