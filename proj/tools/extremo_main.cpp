// Command-line front end: simulate benchmark series, estimate extremograms,
// attach bootstrap confidence intervals, run coverage experiments, and build
// the pre-asymptotic oracle cache.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "extremo/bootstrap.hpp"
#include "extremo/csv.hpp"
#include "extremo/exceedance.hpp"
#include "extremo/extremogram.hpp"
#include "extremo/harness.hpp"
#include "extremo/linear_process.hpp"
#include "extremo/models.hpp"
#include "extremo/preasymptotic.hpp"

namespace {

using namespace extremo;

struct ModelOptions {
    std::string model;
    double alpha0 = 1e-4, alpha1 = 0.08, beta1 = 0.9;
    double phi = 0.8;
    std::vector<double> coefficients;
    std::string innovation = "student_t";
    double nu = 8.0;
    bool unit_variance = false;
    double tail_alpha = 3.0;
    long long burn_in_arg = -1;  // < 0 means "use the model default"

    void add_to(CLI::App& cmd) {
        cmd.add_option("--model", model, "Model kind: garch, ar1 or ma")->required();
        cmd.add_option("--alpha0", alpha0, "GARCH alpha0");
        cmd.add_option("--alpha1", alpha1, "GARCH alpha1");
        cmd.add_option("--beta1", beta1, "GARCH beta1");
        cmd.add_option("--phi", phi, "AR(1) coefficient");
        cmd.add_option("--coefficients", coefficients,
                       "MA coefficients psi_0..psi_q (comma separated)")
            ->delimiter(',');
        cmd.add_option("--innovation", innovation,
                       "Innovation distribution: student_t, frechet or normal");
        cmd.add_option("--nu", nu, "Student-t degrees of freedom");
        cmd.add_flag("--unit-variance", unit_variance,
                     "Rescale Student-t innovations to unit variance");
        cmd.add_option("--tail-alpha", tail_alpha, "Symmetrized Frechet tail index");
        cmd.add_option("--burn-in", burn_in_arg, "Burn-in length override");
    }

    [[nodiscard]] ModelSpec build() const {
        const std::optional<std::size_t> burn_in =
            burn_in_arg >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(burn_in_arg))
                             : std::nullopt;
        InnovationDist innov;
        if (innovation == "student_t") {
            innov = InnovationDist::student_t(nu, unit_variance);
        } else if (innovation == "frechet") {
            innov = InnovationDist::symmetrized_frechet(tail_alpha);
        } else if (innovation == "normal") {
            innov = InnovationDist::standard_normal();
        } else {
            throw std::invalid_argument("unknown innovation '" + innovation + "'");
        }
        if (model == "garch") {
            return ModelSpec::garch(alpha0, alpha1, beta1, innov, burn_in.value_or(2000));
        }
        if (model == "ar1") return ModelSpec::ar1(phi, innov, burn_in.value_or(1000));
        if (model == "ma") {
            if (coefficients.empty()) {
                throw std::invalid_argument("ma model needs --coefficients");
            }
            return ModelSpec::ma(coefficients, innov);
        }
        throw std::invalid_argument("unknown model '" + model + "'");
    }
};

ThresholdSpec threshold_from(const std::optional<double>& p, const std::optional<std::size_t>& k,
                             const std::optional<double>& a) {
    const int given = (p ? 1 : 0) + (k ? 1 : 0) + (a ? 1 : 0);
    if (given != 1) {
        throw std::invalid_argument("choose exactly one of --p, --k, --a");
    }
    if (p) return ThresholdSpec::empirical_quantile(*p);
    if (k) return ThresholdSpec::order_statistic(*k);
    return ThresholdSpec::fixed(*a);
}

WraparoundRule wrap_from(const std::string& name) {
    if (name == "paper") return WraparoundRule::PaperModN1;
    if (name == "circular") return WraparoundRule::Circular;
    throw std::invalid_argument("unknown wraparound rule '" + name + "'");
}

MultiplierDist multipliers_from(const std::string& name) {
    if (name == "normal") return MultiplierDist::standard_normal();
    if (name.size() > 1 && name[0] == 't') {
        return MultiplierDist::scaled_student_t(std::stod(name.substr(1)));
    }
    throw std::invalid_argument("unknown multiplier distribution '" + name + "'");
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
}

int run_simulate(const ModelOptions& opts, std::size_t n, std::uint64_t seed,
                 const std::string& out) {
    const auto spec = opts.build();
    RngStream rng(seed, stream_purpose::model_series, 0);
    const auto series = simulate(spec, n, rng);
    if (out.empty() || out == "-") {
        write_series_csv(series, std::cout);
    } else {
        write_series_csv(series, std::filesystem::path(out));
    }
    return 0;
}

int run_extremogram(const std::string& input, bool header, const std::optional<double>& p,
                    const std::optional<std::size_t>& k, const std::optional<double>& a,
                    std::size_t h_max, double corner_a, double corner_b, bool truncated) {
    const auto series = read_series_csv(std::filesystem::path(input), header);
    OrthantSetPair pair{std::vector<double>(series.dim(), corner_a),
                        std::vector<double>(series.dim(), corner_b), 1.0};
    const auto convention =
        truncated ? DenominatorConvention::Truncated : DenominatorConvention::AllN;
    const auto est = empirical_extremogram_estimated(series, threshold_from(p, k, a), pair,
                                                     h_max, convention);
    for (std::size_t h = 0; h <= h_max; ++h) {
        std::cout << h << ',' << fmt_opt(est.rho[h]) << ',' << est.joint_counts[h] << ','
                  << est.marginal_count << ',' << format_double(est.threshold) << '\n';
    }
    return 0;
}

BootstrapReplicates draw_replicates(const TimeSeries& series, double a,
                                    const OrthantSetPair& pair, std::size_t h_max,
                                    std::size_t block_length, std::size_t count,
                                    BootstrapScheme scheme, const MultiplierDist& multipliers,
                                    WraparoundRule rule, std::uint64_t seed) {
    const std::size_t n_eff = series.length() - h_max;
    BootstrapReplicates reps;
    reps.scheme = scheme;
    reps.base = empirical_extremogram(series, a, pair, h_max);
    reps.seed = seed;
    reps.rows.resize(count);

    const auto in_a = membership_a(series, a, pair);
    const auto in_b = membership_b(series, a, pair);

    if (scheme == BootstrapScheme::Multiplier) {
        const auto counts = block_exceedance_counts(series, a, pair, h_max, block_length);
        for (std::size_t b = 0; b < count; ++b) {
            RngStream rng(seed, stream_purpose::multiplier_replicate,
                          replicate_stream_index(0, b));
            reps.rows[b] = weighted_ratio_row(
                counts, sample_multipliers(multipliers, counts.block_count, rng));
        }
    } else if (scheme == BootstrapScheme::StationaryDMC) {
        for (std::size_t b = 0; b < count; ++b) {
            RngStream rng(seed, stream_purpose::dmc_replicate, replicate_stream_index(0, b));
            const auto indices = dmc_resample_indices(
                series.length(), static_cast<double>(block_length), rng, rule);
            reps.rows[b] = dmc_replicate_from_indices(indices, in_a, in_b, h_max, rule);
        }
    } else {
        for (std::size_t b = 0; b < count; ++b) {
            RngStream rng(seed, stream_purpose::modified_replicate,
                          replicate_stream_index(0, b));
            const auto plan =
                draw_stationary_scheme(n_eff, static_cast<double>(block_length), rng);
            reps.rows[b].resize(h_max + 1);
            for (std::size_t h = 0; h <= h_max; ++h) {
                reps.rows[b][h] =
                    modified_replicate_from_flags(plan, n_eff, in_a, in_b, h, rule);
            }
        }
    }
    return reps;
}

int run_bootstrap(const std::string& input, bool header, const std::string& scheme_name_arg,
                  const std::optional<double>& p, const std::optional<double>& p1,
                  const std::optional<double>& p2, std::size_t replicate_count,
                  std::size_t block_length, std::size_t h_max, double level,
                  const std::string& multipliers, const std::string& wraparound,
                  const std::string& export_replicates, bool band, std::uint64_t seed) {
    const auto series = read_series_csv(std::filesystem::path(input), header);
    const auto pair = OrthantSetPair::tail(1.0);
    const auto rule = wrap_from(wraparound);
    const auto mult = multipliers_from(multipliers);

    BootstrapScheme scheme;
    if (scheme_name_arg == "multiplier") {
        scheme = BootstrapScheme::Multiplier;
    } else if (scheme_name_arg == "stationary_dmc") {
        scheme = BootstrapScheme::StationaryDMC;
    } else if (scheme_name_arg == "stationary_modified") {
        scheme = BootstrapScheme::StationaryModified;
    } else {
        throw std::invalid_argument("unknown scheme '" + scheme_name_arg + "'");
    }

    const bool transfer = p1.has_value() || p2.has_value();
    if (transfer && (!p1 || !p2)) {
        throw std::invalid_argument("transfer intervals need both --p1 and --p2");
    }
    if (!transfer && !p) throw std::invalid_argument("choose --p, or --p1 with --p2");

    const double p_boot = transfer ? *p2 : *p;
    const double a_boot =
        estimate_threshold(series, ThresholdSpec::empirical_quantile(p_boot));
    const auto reps = draw_replicates(series, a_boot, pair, h_max, block_length,
                                      replicate_count, scheme, mult, rule, seed);

    std::optional<ExtremogramEstimate> base_p1;
    if (transfer) {
        base_p1 = empirical_extremogram_estimated(
            series, ThresholdSpec::empirical_quantile(*p1), pair, h_max);
    }

    const double alpha = 1.0 - level;
    for (std::size_t h = 0; h <= h_max; ++h) {
        std::vector<std::optional<double>> column(reps.rows.size());
        for (std::size_t b = 0; b < reps.rows.size(); ++b) column[b] = reps.rows[b][h];
        const auto qp = try_bootstrap_quantiles(column, alpha);
        const auto& base = transfer ? *base_p1 : reps.base;

        std::cout << h << ',' << fmt_opt(base.rho[h]) << ',';
        if (qp && base.rho[h] && (!transfer || reps.base.rho[h])) {
            const auto ci = transfer
                                ? ci_transfer(*base.rho[h], *reps.base.rho[h], qp->lower,
                                              qp->upper, *p1, *p2, level)
                                : ci_direct(*base.rho[h], qp->lower, qp->upper, level);
            std::cout << format_double(ci.lower) << ',' << format_double(ci.upper);
        } else {
            std::cout << "NA,NA";
        }
        std::cout << ',' << (qp ? qp->undefined_count : reps.rows.size()) << '\n';
    }

    if (band) {
        const auto sb = simultaneous_band(reps, level);
        std::cout << "band," << format_double(sb.radius) << ',' << sb.defined_rows << '\n';
    }
    if (!export_replicates.empty()) {
        std::ofstream out(export_replicates);
        if (!out) throw std::runtime_error("cannot write " + export_replicates);
        write_replicates_csv(reps, out);
    }
    return 0;
}

int run_coverage(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                 const std::optional<unsigned>& threads, const std::string& out_dir,
                 const std::string& format, bool build_oracle) {
    auto cfg = load_experiment_config(std::filesystem::path(config_path));
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (build_oracle) cfg.build_oracle_if_missing = true;

    const auto table = run_coverage_experiment(cfg);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    if (format == "csv" || format == "both") {
        const auto paths = emit_report(table, ReportFormat::Csv, dir / "coverage.csv");
        written.insert(written.end(), paths.begin(), paths.end());
    }
    if (format == "plot" || format == "both") {
        const auto paths = emit_report(table, ReportFormat::PlotData, dir);
        written.insert(written.end(), paths.begin(), paths.end());
    }
    if (written.empty()) {
        throw std::invalid_argument("unknown report format '" + format + "'");
    }
    for (const auto& path : written) std::cout << "wrote " << path.string() << '\n';
    return 0;
}

int run_oracle(const ModelOptions& opts, double p, std::size_t h_max,
               std::size_t series_count, std::size_t series_length, std::uint64_t seed,
               const std::string& cache_dir, unsigned threads) {
    const auto model = opts.build();
    const auto spec = ThresholdSpec::empirical_quantile(p);
    const OracleBudget budget{series_count, series_length};
    const auto oracle =
        ensure_oracle(model, spec, h_max, budget, seed, cache_dir, threads);
    std::cout << "key " << oracle_cache_key(model, spec, h_max, budget, seed) << '\n';
    for (std::size_t h = 0; h <= h_max; ++h) {
        std::cout << h << ',' << fmt_opt(oracle.pooled[h]) << ','
                  << format_double(oracle.std_errors[h]) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extremogram estimation with multiplier and stationary block bootstraps"};
    app.require_subcommand(1);

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a benchmark model to CSV");
    ModelOptions sim_model;
    sim_model.add_to(*simulate_cmd);
    std::size_t sim_n = 2000;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    simulate_cmd->add_option("--n", sim_n, "Series length");
    simulate_cmd->add_option("--seed", sim_seed, "RNG seed");
    simulate_cmd->add_option("--out", sim_out, "Output CSV path ('-' for stdout)");

    // extremogram
    auto* extremogram_cmd =
        app.add_subcommand("extremogram", "Per-lag empirical extremogram of a CSV series");
    std::string ext_input;
    bool ext_header = false;
    std::optional<double> ext_p, ext_a;
    std::optional<std::size_t> ext_k;
    std::size_t ext_hmax = 10;
    double ext_xa = 1.0, ext_xb = 1.0;
    bool ext_truncated = false;
    extremogram_cmd->add_option("--input", ext_input, "Input series CSV")->required();
    extremogram_cmd->add_flag("--header", ext_header, "Input has a header row");
    extremogram_cmd->add_option("--p", ext_p, "Threshold exceedance probability");
    extremogram_cmd->add_option("--k", ext_k, "Order-statistic threshold parameter k");
    extremogram_cmd->add_option("--a", ext_a, "Fixed threshold value");
    extremogram_cmd->add_option("--hmax", ext_hmax, "Largest lag");
    extremogram_cmd->add_option("--xa", ext_xa, "Cornerpoint of the conditioning set A");
    extremogram_cmd->add_option("--xb", ext_xb, "Cornerpoint of the target set B");
    extremogram_cmd->add_flag("--truncated", ext_truncated,
                              "Classic summand convention (numerator over n-h terms)");

    // bootstrap
    auto* bootstrap_cmd =
        app.add_subcommand("bootstrap", "Bootstrap confidence intervals for a CSV series");
    std::string boot_input, boot_scheme = "multiplier", boot_mult = "t5",
                boot_wrap = "paper", boot_export;
    bool boot_header = false, boot_band = false;
    std::optional<double> boot_p, boot_p1, boot_p2;
    std::size_t boot_b = 1000, boot_r = 100, boot_hmax = 10;
    double boot_level = 0.95;
    std::uint64_t boot_seed = 0;
    bootstrap_cmd->add_option("--input", boot_input, "Input series CSV")->required();
    bootstrap_cmd->add_flag("--header", boot_header, "Input has a header row");
    bootstrap_cmd->add_option("--scheme", boot_scheme,
                              "multiplier, stationary_dmc or stationary_modified");
    bootstrap_cmd->add_option("--p", boot_p, "Threshold exceedance probability (direct CI)");
    bootstrap_cmd->add_option("--p1", boot_p1, "Scored threshold probability (transfer CI)");
    bootstrap_cmd->add_option("--p2", boot_p2, "Bootstrap threshold probability (transfer CI)");
    bootstrap_cmd->add_option("--B", boot_b, "Number of bootstrap replicas");
    bootstrap_cmd->add_option("--r", boot_r, "Block length (mean block length)");
    bootstrap_cmd->add_option("--hmax", boot_hmax, "Largest lag");
    bootstrap_cmd->add_option("--level", boot_level, "Nominal confidence level");
    bootstrap_cmd->add_option("--multipliers", boot_mult, "t<nu> or normal");
    bootstrap_cmd->add_option("--wraparound", boot_wrap, "paper or circular");
    bootstrap_cmd->add_option("--export-replicates", boot_export,
                              "Write the replicate matrix to this CSV path");
    bootstrap_cmd->add_flag("--band", boot_band, "Also print the simultaneous band radius");
    bootstrap_cmd->add_option("--seed", boot_seed, "RNG seed");

    // coverage
    auto* coverage_cmd =
        app.add_subcommand("coverage", "Run a Monte Carlo coverage experiment from a config");
    std::string cov_config, cov_out = ".", cov_format = "both";
    std::optional<std::uint64_t> cov_seed;
    std::optional<unsigned> cov_threads;
    bool cov_build_oracle = false;
    coverage_cmd->add_option("--config", cov_config, "Experiment config file")->required();
    coverage_cmd->add_option("--seed", cov_seed, "Seed override");
    coverage_cmd->add_option("--threads", cov_threads, "Worker thread count (0 = hardware)");
    coverage_cmd->add_option("--out", cov_out, "Report output directory");
    coverage_cmd->add_option("--format", cov_format, "csv, plot or both");
    coverage_cmd->add_flag("--build-oracle", cov_build_oracle,
                           "Build missing oracle cache entries instead of failing");

    // oracle
    auto* oracle_cmd =
        app.add_subcommand("oracle", "Build or refresh a pre-asymptotic oracle cache entry");
    ModelOptions oracle_model;
    oracle_model.add_to(*oracle_cmd);
    double oracle_p = 0.05;
    std::size_t oracle_hmax = 10, oracle_count = 100, oracle_len = 1000000;
    std::uint64_t oracle_seed = 1;
    std::string oracle_dir = "oracle_cache";
    unsigned oracle_threads = 0;
    oracle_cmd->add_option("--p", oracle_p, "Threshold exceedance probability");
    oracle_cmd->add_option("--hmax", oracle_hmax, "Largest lag");
    oracle_cmd->add_option("--series-count", oracle_count, "Independent series to simulate");
    oracle_cmd->add_option("--series-length", oracle_len, "Effective length per series");
    oracle_cmd->add_option("--seed", oracle_seed, "Oracle RNG seed");
    oracle_cmd->add_option("--cache-dir", oracle_dir,
                           "Cache directory (or EXTREMO_ORACLE_DIR)");
    oracle_cmd->add_option("--threads", oracle_threads, "Worker thread count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate_cmd->parsed()) {
            return run_simulate(sim_model, sim_n, sim_seed, sim_out);
        }
        if (extremogram_cmd->parsed()) {
            return run_extremogram(ext_input, ext_header, ext_p, ext_k, ext_a, ext_hmax,
                                   ext_xa, ext_xb, ext_truncated);
        }
        if (bootstrap_cmd->parsed()) {
            return run_bootstrap(boot_input, boot_header, boot_scheme, boot_p, boot_p1,
                                 boot_p2, boot_b, boot_r, boot_hmax, boot_level, boot_mult,
                                 boot_wrap, boot_export, boot_band, boot_seed);
        }
        if (coverage_cmd->parsed()) {
            return run_coverage(cov_config, cov_seed, cov_threads, cov_out, cov_format,
                                cov_build_oracle);
        }
        if (oracle_cmd->parsed()) {
            const char* env_dir = std::getenv("EXTREMO_ORACLE_DIR");
            if (env_dir != nullptr && oracle_dir == "oracle_cache") oracle_dir = env_dir;
            return run_oracle(oracle_model, oracle_p, oracle_hmax, oracle_count, oracle_len,
                              oracle_seed, oracle_dir, oracle_threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
