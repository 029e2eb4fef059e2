#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "extremo/bootstrap.hpp"
#include "extremo/extremogram.hpp"
#include "extremo/models.hpp"
#include "extremo/preasymptotic.hpp"

namespace extremo {

struct TransferSpec {
    double p1 = 0.0;  // scored threshold (harder, fewer exceedances)
    double p2 = 0.0;  // threshold whose bootstrap supplies the error quantiles
};

/**
 * Full description of one Monte Carlo coverage experiment; parsed from a
 * flat key-value config file (see parse_experiment_config) or built in
 * code. validate() throws std::invalid_argument naming the offending field
 * and emits advisory warnings (never errors) when block settings break the
 * usual rate heuristics.
 */
struct ExperimentConfig {
    ModelSpec model;
    std::size_t n = 2000;           // simulated series length per repetition
    std::size_t sim_count = 500;    // Monte Carlo repetitions
    std::size_t replicates = 200;   // bootstrap replicas B per repetition
    std::size_t block_length = 100; // r
    std::size_t h_max = 10;
    std::vector<double> thresholds;      // exceedance probabilities p
    std::vector<BootstrapScheme> schemes;
    bool direct_ci = true;
    std::optional<TransferSpec> transfer;
    double nominal_level = 0.95;

    enum class Truth { OracleCache, Analytic };
    Truth truth = Truth::OracleCache;
    OracleBudget oracle_budget{100, 1000000};
    std::uint64_t oracle_seed = 1;
    std::filesystem::path oracle_dir = "oracle_cache";
    bool build_oracle_if_missing = false;

    MultiplierDist multipliers = MultiplierDist::scaled_student_t();
    WraparoundRule wraparound = WraparoundRule::PaperModN1;
    DenominatorConvention denominator = DenominatorConvention::AllN;
    DmcConvention dmc_convention = DmcConvention::AllNWrap;

    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

/// Parse the flat `key = value` config format (full grammar in README).
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/**
 * One (scheme, method, p, h) cell of the coverage study. Repetitions whose
 * base estimate is undefined score as non-covering and are counted in
 * undefined_base; zero_base counts repetitions whose base estimate exists
 * but equals 0 at this lag (the joint-exceedance pathology), and
 * covered_nonzero restricts coverage to the remaining repetitions.
 */
struct CoverageCell {
    BootstrapScheme scheme = BootstrapScheme::Multiplier;
    ConfidenceInterval::Method method = ConfidenceInterval::Method::Direct;
    double p = 0.0;       // scored threshold probability (p1 for transfer)
    double p_boot = 0.0;  // bootstrap threshold probability (p2 for transfer)
    std::size_t h = 0;
    double truth = 0.0;
    std::size_t sim_count = 0;
    std::size_t covered = 0;
    std::size_t undefined_base = 0;
    std::size_t zero_base = 0;
    std::size_t covered_nonzero = 0;
    double mean_width = 0.0;  // NaN when no interval was defined
    std::size_t width_count = 0;

    [[nodiscard]] double coverage() const;
    [[nodiscard]] double se() const;
    [[nodiscard]] double coverage_nonzero() const;  // NaN when nothing qualifies

    bool operator==(const CoverageCell& other) const;
};

struct CoverageTable {
    std::vector<CoverageCell> cells;
    double nominal_level = 0.0;

    [[nodiscard]] const CoverageCell* find(BootstrapScheme scheme,
                                           ConfidenceInterval::Method method, double p,
                                           std::size_t h) const;

    bool operator==(const CoverageTable& other) const;
};

/**
 * Run the experiment: per repetition simulate one series, estimate the
 * thresholds and base extremograms, draw B replicate rows per scheme, form
 * the configured intervals and score them against the truth. Repetition i
 * owns the RNG streams (seed, model_series, i) and
 * (seed, <scheme purpose>, replicate_stream_index(i, b)), so the table is
 * bit-identical for a fixed seed at any thread count.
 */
CoverageTable run_coverage_experiment(const ExperimentConfig& config);

enum class ReportFormat { Csv, PlotData };

void emit_report_csv(const CoverageTable& table, std::ostream& out);
std::string report_csv_string(const CoverageTable& table);
CoverageTable parse_report_csv(std::istream& in);

/**
 * Write report files. Csv writes a single file at `destination`; PlotData
 * treats `destination` as a directory and writes one panel file per
 * (method, p) with columns h, one coverage series per scheme, and the
 * nominal level. Returns the written paths. An empty table is an error,
 * never an empty file.
 */
std::vector<std::filesystem::path> emit_report(const CoverageTable& table, ReportFormat format,
                                               const std::filesystem::path& destination);

}  // namespace extremo
