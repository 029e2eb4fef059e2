#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "extremo/models.hpp"
#include "extremo/orthants.hpp"
#include "extremo/threshold.hpp"

namespace extremo {

struct OracleBudget {
    std::size_t series_count = 0;
    std::size_t series_length = 0;
};

/**
 * Simulation estimate of the pre-asymptotic extremogram
 * P(X_h / a in B | X_0 / a in A) of a model at its own threshold, obtained
 * from independent long series. `pooled` is the ratio of total joint to
 * total marginal counts across all series (the primary estimate);
 * `mean_of_ratios` averages the per-series ratios instead. Standard errors
 * come from the between-series spread of the per-series ratios.
 */
struct PreasymptoticOracle {
    std::vector<std::optional<double>> pooled;          // h = 0..h_max
    std::vector<std::optional<double>> mean_of_ratios;  // h = 0..h_max
    std::vector<double> std_errors;                     // h = 0..h_max
    std::size_t defined_series = 0;  // series with at least one marginal exceedance
    ModelSpec model;
    ThresholdSpec threshold;
    std::size_t h_max = 0;
    OracleBudget budget;
    std::uint64_t seed = 0;

    /// Pre-asymptotic values as plain doubles; throws if any lag is undefined.
    [[nodiscard]] std::vector<double> values() const;
};

/**
 * Run the simulation oracle: `budget.series_count` independent series of
 * `budget.series_length` effective observations (plus h_max extra for the
 * lagged partners), thresholds resolved per series from `spec`, counts
 * pooled across series in index order. Series i uses the RNG stream
 * (seed, oracle_series, i), so the result is bit-identical for any worker
 * count. A=B=(1,inf) orthants are used, matching the tail dependence
 * coefficient studied by the harness.
 */
PreasymptoticOracle preasymptotic_extremogram(const ModelSpec& model, const ThresholdSpec& spec,
                                              std::size_t h_max, const OracleBudget& budget,
                                              std::uint64_t seed, unsigned threads = 0);

/// Cache key identifying one oracle run; doubles as the cache file stem.
std::string oracle_cache_key(const ModelSpec& model, const ThresholdSpec& spec,
                             std::size_t h_max, const OracleBudget& budget, std::uint64_t seed);

void write_oracle(const PreasymptoticOracle& oracle, std::ostream& out);
PreasymptoticOracle read_oracle(std::istream& in);

void save_oracle(const PreasymptoticOracle& oracle, const std::filesystem::path& dir);
std::optional<PreasymptoticOracle> load_oracle(const std::filesystem::path& dir,
                                               const std::string& key);

/// Load from cache or compute and save. The returned oracle always matches
/// the requested key.
PreasymptoticOracle ensure_oracle(const ModelSpec& model, const ThresholdSpec& spec,
                                  std::size_t h_max, const OracleBudget& budget,
                                  std::uint64_t seed, const std::filesystem::path& dir,
                                  unsigned threads = 0);

}  // namespace extremo
