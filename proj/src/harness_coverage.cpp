#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "extremo/exceedance.hpp"
#include "extremo/harness.hpp"
#include "extremo/linear_process.hpp"
#include "extremo/parallel.hpp"

namespace extremo {

namespace {

double cell_ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nan("");
    return static_cast<double>(num) / static_cast<double>(den);
}

/// One scored interval family: direct at p, or transfer p1 <- p2.
struct ScoredMethod {
    ConfidenceInterval::Method method = ConfidenceInterval::Method::Direct;
    double p_scored = 0.0;
    double p_boot = 0.0;
};

struct CellContribution {
    std::uint8_t covered = 0;
    std::uint8_t undefined_base = 0;
    std::uint8_t zero_base = 0;
    std::uint8_t covered_nonzero = 0;
    std::uint8_t width_defined = 0;
    double width = 0.0;
};

/// Per-repetition data for one threshold probability.
struct BaseAtP {
    bool threshold_ok = false;
    double a = 0.0;
    ExtremogramEstimate estimate;
    std::vector<std::uint8_t> in_a;
    std::vector<std::uint8_t> in_b;
};

std::vector<double> sorted_unique(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::size_t index_of(const std::vector<double>& values, double v) {
    const auto it = std::find(values.begin(), values.end(), v);
    return static_cast<std::size_t>(it - values.begin());
}

std::uint64_t purpose_of(BootstrapScheme scheme) {
    switch (scheme) {
        case BootstrapScheme::Multiplier: return stream_purpose::multiplier_replicate;
        case BootstrapScheme::StationaryDMC: return stream_purpose::dmc_replicate;
        case BootstrapScheme::StationaryModified: return stream_purpose::modified_replicate;
    }
    return stream_purpose::generic;
}

double innovation_tail_index(const InnovationDist& innovation) {
    switch (innovation.kind) {
        case InnovationDist::Kind::SymmetrizedFrechet:
            return innovation.tail_alpha;
        case InnovationDist::Kind::StudentT:
            return innovation.nu;  // t_nu tails are regularly varying of index nu
        case InnovationDist::Kind::StandardNormal:
            break;
    }
    throw std::invalid_argument(
        "coverage: analytic truth needs regularly varying innovations (frechet or student_t)");
}

std::vector<double> analytic_truth(const ModelSpec& model, std::size_t h_max) {
    const double alpha = innovation_tail_index(model.innovation);
    switch (model.kind) {
        case ModelSpec::Kind::Ar1:
            return linear_process_extremogram(ar1_coefficients(model.phi, 512), alpha, h_max);
        case ModelSpec::Kind::Ma:
            return linear_process_extremogram(model.psi, alpha, h_max);
        case ModelSpec::Kind::Garch:
            break;
    }
    throw std::invalid_argument("coverage: analytic truth is only known for linear models");
}

}  // namespace

double CoverageCell::coverage() const { return cell_ratio(covered, sim_count); }

double CoverageCell::se() const {
    const double c = coverage();
    return std::sqrt(c * (1.0 - c) / static_cast<double>(sim_count));
}

double CoverageCell::coverage_nonzero() const {
    return cell_ratio(covered_nonzero, sim_count - undefined_base - zero_base);
}

namespace {

bool double_eq(double a, double b) {
    return (a == b) || (std::isnan(a) && std::isnan(b));
}

}  // namespace

bool CoverageCell::operator==(const CoverageCell& other) const {
    return scheme == other.scheme && method == other.method && double_eq(p, other.p) &&
           double_eq(p_boot, other.p_boot) && h == other.h && double_eq(truth, other.truth) &&
           sim_count == other.sim_count && covered == other.covered &&
           undefined_base == other.undefined_base && zero_base == other.zero_base &&
           covered_nonzero == other.covered_nonzero &&
           double_eq(mean_width, other.mean_width) && width_count == other.width_count;
}

bool CoverageTable::operator==(const CoverageTable& other) const {
    return nominal_level == other.nominal_level && cells == other.cells;
}

const CoverageCell* CoverageTable::find(BootstrapScheme scheme,
                                        ConfidenceInterval::Method method, double p,
                                        std::size_t h) const {
    for (const auto& cell : cells) {
        if (cell.scheme == scheme && cell.method == method && cell.p == p && cell.h == h) {
            return &cell;
        }
    }
    return nullptr;
}

CoverageTable run_coverage_experiment(const ExperimentConfig& config) {
    config.validate();

    const std::size_t n_total = config.n;
    const std::size_t n_eff = n_total - config.h_max;
    const std::size_t lags = config.h_max + 1;
    const OrthantSetPair pair = OrthantSetPair::tail(1.0);
    const double alpha = 1.0 - config.nominal_level;

    // Scored interval families, in emission order.
    std::vector<ScoredMethod> methods;
    if (config.direct_ci) {
        for (double p : config.thresholds) {
            methods.push_back({ConfidenceInterval::Method::Direct, p, p});
        }
    }
    if (config.transfer) {
        methods.push_back(
            {ConfidenceInterval::Method::Transfer, config.transfer->p1, config.transfer->p2});
    }

    // Thresholds that need base estimates / replicate matrices.
    std::vector<double> p_bases, p_boots;
    for (const auto& m : methods) {
        p_bases.push_back(m.p_scored);
        p_bases.push_back(m.p_boot);
        p_boots.push_back(m.p_boot);
    }
    p_bases = sorted_unique(std::move(p_bases));
    p_boots = sorted_unique(std::move(p_boots));

    // Truth per scored threshold.
    std::vector<std::vector<double>> truth_by_method(methods.size());
    if (config.truth == ExperimentConfig::Truth::Analytic) {
        const auto truth = analytic_truth(config.model, config.h_max);
        for (auto& t : truth_by_method) t = truth;
    } else {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const auto spec = ThresholdSpec::empirical_quantile(methods[mi].p_scored);
            const auto key = oracle_cache_key(config.model, spec, config.h_max,
                                              config.oracle_budget, config.oracle_seed);
            auto cached = load_oracle(config.oracle_dir, key);
            if (!cached) {
                if (!config.build_oracle_if_missing) {
                    throw std::runtime_error(
                        "coverage: missing pre-asymptotic oracle cache entry '" + key +
                        "' under " + config.oracle_dir.string() +
                        "; build it with the oracle command or set "
                        "oracle.build_if_missing = true");
                }
                cached = ensure_oracle(config.model, spec, config.h_max, config.oracle_budget,
                                       config.oracle_seed, config.oracle_dir, config.threads);
            }
            truth_by_method[mi] = cached->values();
        }
    }

    const std::size_t n_cells = config.schemes.size() * methods.size() * lags;
    std::vector<std::vector<CellContribution>> per_rep(config.sim_count);

    const std::size_t block_count = n_eff / config.block_length;

    parallel_for(config.sim_count, config.threads, [&](std::size_t rep) {
        RngStream series_stream(config.seed, stream_purpose::model_series, rep);
        const TimeSeries series = simulate(config.model, n_total, series_stream);

        // Base estimates and membership flags per threshold probability.
        std::vector<BaseAtP> bases(p_bases.size());
        for (std::size_t pi = 0; pi < p_bases.size(); ++pi) {
            BaseAtP& bd = bases[pi];
            try {
                bd.a = estimate_threshold(series,
                                          ThresholdSpec::empirical_quantile(p_bases[pi]));
                bd.threshold_ok = true;
            } catch (const std::runtime_error&) {
                continue;  // degenerate threshold: every lag scores undefined
            }
            bd.estimate = empirical_extremogram(series, bd.a, pair, config.h_max,
                                                config.denominator);
            bd.in_a = membership_a(series, bd.a, pair);
            bd.in_b = membership_b(series, bd.a, pair);
        }

        std::vector<CellContribution> contrib(n_cells);
        std::size_t cell = 0;

        for (const BootstrapScheme scheme : config.schemes) {
            // Replicate quantiles per bootstrap threshold and lag.
            std::vector<std::vector<std::optional<QuantilePair>>> quantiles(
                p_boots.size(), std::vector<std::optional<QuantilePair>>(lags));

            for (std::size_t bi = 0; bi < p_boots.size(); ++bi) {
                const BaseAtP& bd = bases[index_of(p_bases, p_boots[bi])];
                if (!bd.threshold_ok) continue;

                std::vector<std::vector<std::optional<double>>> rows(
                    config.replicates, std::vector<std::optional<double>>(lags));

                if (scheme == BootstrapScheme::Multiplier) {
                    const auto counts = block_exceedance_counts(series, bd.a, pair,
                                                                config.h_max,
                                                                config.block_length);
                    for (std::size_t b = 0; b < config.replicates; ++b) {
                        RngStream rng(config.seed, purpose_of(scheme),
                                      replicate_stream_index(rep, b));
                        const auto xi =
                            sample_multipliers(config.multipliers, block_count, rng);
                        rows[b] = weighted_ratio_row(counts, xi);
                    }
                } else if (scheme == BootstrapScheme::StationaryDMC) {
                    for (std::size_t b = 0; b < config.replicates; ++b) {
                        RngStream rng(config.seed, purpose_of(scheme),
                                      replicate_stream_index(rep, b));
                        const auto indices =
                            dmc_resample_indices(n_total,
                                                 static_cast<double>(config.block_length), rng,
                                                 config.wraparound);
                        rows[b] = dmc_replicate_from_indices(indices, bd.in_a, bd.in_b,
                                                             config.h_max, config.wraparound,
                                                             config.dmc_convention);
                    }
                } else {
                    for (std::size_t b = 0; b < config.replicates; ++b) {
                        RngStream rng(config.seed, purpose_of(scheme),
                                      replicate_stream_index(rep, b));
                        const auto plan = draw_stationary_scheme(
                            n_eff, static_cast<double>(config.block_length), rng);
                        for (std::size_t h = 0; h < lags; ++h) {
                            rows[b][h] = modified_replicate_from_flags(
                                plan, n_eff, bd.in_a, bd.in_b, h, config.wraparound);
                        }
                    }
                }

                std::vector<std::optional<double>> column(config.replicates);
                for (std::size_t h = 0; h < lags; ++h) {
                    for (std::size_t b = 0; b < config.replicates; ++b) column[b] = rows[b][h];
                    quantiles[bi][h] = try_bootstrap_quantiles(column, alpha);
                }
            }

            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                const ScoredMethod& m = methods[mi];
                const BaseAtP& bd = bases[index_of(p_bases, m.p_scored)];
                const BaseAtP& bb = bases[index_of(p_bases, m.p_boot)];
                const auto& qcol = quantiles[index_of(p_boots, m.p_boot)];

                for (std::size_t h = 0; h < lags; ++h, ++cell) {
                    CellContribution& c = contrib[cell];
                    if (!bd.threshold_ok || !bd.estimate.rho[h]) {
                        c.undefined_base = 1;
                        continue;
                    }
                    const double base = *bd.estimate.rho[h];
                    if (base == 0.0) c.zero_base = 1;

                    std::optional<ConfidenceInterval> interval;
                    if (qcol[h]) {
                        if (m.method == ConfidenceInterval::Method::Direct) {
                            interval = ci_direct(base, qcol[h]->lower, qcol[h]->upper,
                                                 config.nominal_level);
                        } else if (bb.threshold_ok && bb.estimate.rho[h]) {
                            interval = ci_transfer(base, *bb.estimate.rho[h], qcol[h]->lower,
                                                   qcol[h]->upper, m.p_scored, m.p_boot,
                                                   config.nominal_level);
                        }
                    }
                    if (!interval) continue;  // no interval: scored as non-covering

                    c.width = interval->width();
                    c.width_defined = 1;
                    if (interval->covers(truth_by_method[mi][h])) {
                        c.covered = 1;
                        if (base != 0.0) c.covered_nonzero = 1;
                    }
                }
            }
        }
        per_rep[rep] = std::move(contrib);
    });

    // Reduce in repetition order so sums are bit-stable at any thread count.
    CoverageTable table;
    table.nominal_level = config.nominal_level;
    table.cells.resize(n_cells);
    std::size_t cell = 0;
    std::vector<double> width_sums(n_cells, 0.0);
    for (const BootstrapScheme scheme : config.schemes) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            for (std::size_t h = 0; h < lags; ++h, ++cell) {
                CoverageCell& out = table.cells[cell];
                out.scheme = scheme;
                out.method = methods[mi].method;
                out.p = methods[mi].p_scored;
                out.p_boot = methods[mi].p_boot;
                out.h = h;
                out.truth = truth_by_method[mi][h];
                out.sim_count = config.sim_count;
            }
        }
    }
    for (std::size_t rep = 0; rep < config.sim_count; ++rep) {
        const auto& contrib = per_rep[rep];
        for (std::size_t i = 0; i < n_cells; ++i) {
            CoverageCell& out = table.cells[i];
            out.covered += contrib[i].covered;
            out.undefined_base += contrib[i].undefined_base;
            out.zero_base += contrib[i].zero_base;
            out.covered_nonzero += contrib[i].covered_nonzero;
            if (contrib[i].width_defined) {
                width_sums[i] += contrib[i].width;
                ++out.width_count;
            }
        }
    }
    for (std::size_t i = 0; i < n_cells; ++i) {
        table.cells[i].mean_width =
            table.cells[i].width_count > 0
                ? width_sums[i] / static_cast<double>(table.cells[i].width_count)
                : std::nan("");
    }
    return table;
}

}  // namespace extremo
