#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "extremo/harness.hpp"
#include "extremo/linear_process.hpp"

using namespace extremo;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.model = ModelSpec::ar1(0.5, InnovationDist::symmetrized_frechet(3.0), 200);
    cfg.n = 300;
    cfg.sim_count = 40;
    cfg.replicates = 50;
    cfg.block_length = 30;
    cfg.h_max = 3;
    cfg.thresholds = {0.1};
    cfg.schemes = {BootstrapScheme::Multiplier};
    cfg.direct_ci = true;
    cfg.nominal_level = 0.9;
    cfg.truth = ExperimentConfig::Truth::Analytic;
    cfg.seed = 77;
    cfg.threads = 2;
    return cfg;
}

}  // namespace

TEST_CASE("config files parse with defaults and reject bad fields") {
    std::istringstream good(
        "model = ar1\n"
        "ar1.phi = 0.8\n"
        "innovation = frechet\n"
        "innovation.alpha = 3\n"
        "thresholds = 0.05, 0.01\n"
        "ci_methods = direct,transfer\n"
        "transfer.p1 = 0.01\n"
        "transfer.p2 = 0.05\n"
        "seed = 9\n");
    const auto cfg = parse_experiment_config(good);
    CHECK(cfg.model.kind == ModelSpec::Kind::Ar1);
    CHECK(cfg.model.phi == 0.8);
    CHECK(cfg.n == 2000);
    CHECK(cfg.sim_count == 500);
    CHECK(cfg.replicates == 200);
    CHECK(cfg.block_length == 100);
    CHECK(cfg.h_max == 10);
    CHECK(cfg.thresholds == std::vector<double>{0.05, 0.01});
    CHECK(cfg.schemes.size() == 3);
    CHECK(cfg.direct_ci);
    REQUIRE(cfg.transfer.has_value());
    CHECK(cfg.transfer->p1 == 0.01);
    CHECK(cfg.transfer->p2 == 0.05);
    CHECK(cfg.seed == 9);

    auto expect_error = [](const char* text, const char* needle) {
        std::istringstream in(text);
        try {
            parse_experiment_config(in);
            FAIL_CHECK("expected config error for: " << text);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("model = ar1\nar1.phi = 0.8\ninnovation = frechet\ninnovation.alpha = 3\n"
                 "thresholds = 0.05\nbanana = 1\n",
                 "banana");
    expect_error("model = quux\ninnovation = normal\nthresholds = 0.05\n", "model");
    expect_error("model = ar1\ninnovation = frechet\ninnovation.alpha = 3\n"
                 "thresholds = 0.05\n",
                 "ar1.phi");
    expect_error("model = ar1\nar1.phi = 0.8\ninnovation = frechet\ninnovation.alpha = 3\n"
                 "thresholds = 2.0\n",
                 "thresholds");
    expect_error("model = ar1\nar1.phi = 0.8\ninnovation = frechet\ninnovation.alpha = 3\n"
                 "thresholds = 0.05\nseed = 1\nseed = 2\n",
                 "seed");
}

TEST_CASE("coverage tables are identical across thread counts") {
    auto cfg = small_config();
    cfg.threads = 1;
    const auto one = run_coverage_experiment(cfg);
    cfg.threads = 4;
    const auto four = run_coverage_experiment(cfg);
    CHECK(one == four);
    CHECK(report_csv_string(one) == report_csv_string(four));
}

TEST_CASE("the harness reproduces a hand-rolled multiplier experiment") {
    const auto cfg = small_config();
    const auto table = run_coverage_experiment(cfg);
    REQUIRE(table.cells.size() == 4);

    const auto pair = OrthantSetPair::tail(1.0);
    const auto truth = linear_process_extremogram(ar1_coefficients(0.5, 512), 3.0, cfg.h_max);
    const std::size_t n_eff = cfg.n - cfg.h_max;
    const std::size_t m = n_eff / cfg.block_length;
    const double alpha = 1.0 - cfg.nominal_level;

    std::vector<std::size_t> covered(cfg.h_max + 1, 0), undefined(cfg.h_max + 1, 0),
        zero(cfg.h_max + 1, 0), covered_nonzero(cfg.h_max + 1, 0), width_count(cfg.h_max + 1, 0);
    std::vector<double> width_sum(cfg.h_max + 1, 0.0);

    for (std::size_t rep = 0; rep < cfg.sim_count; ++rep) {
        RngStream series_stream(cfg.seed, stream_purpose::model_series, rep);
        const auto series = simulate(cfg.model, cfg.n, series_stream);
        const double a =
            estimate_threshold(series, ThresholdSpec::empirical_quantile(cfg.thresholds[0]));
        const auto base = empirical_extremogram(series, a, pair, cfg.h_max);
        const auto counts =
            block_exceedance_counts(series, a, pair, cfg.h_max, cfg.block_length);

        std::vector<std::vector<std::optional<double>>> rows(cfg.replicates);
        for (std::size_t b = 0; b < cfg.replicates; ++b) {
            RngStream rng(cfg.seed, stream_purpose::multiplier_replicate,
                          replicate_stream_index(rep, b));
            rows[b] = weighted_ratio_row(counts,
                                         sample_multipliers(cfg.multipliers, m, rng));
        }
        for (std::size_t h = 0; h <= cfg.h_max; ++h) {
            if (!base.rho[h]) {
                ++undefined[h];
                continue;
            }
            if (*base.rho[h] == 0.0) ++zero[h];
            std::vector<std::optional<double>> column(cfg.replicates);
            for (std::size_t b = 0; b < cfg.replicates; ++b) column[b] = rows[b][h];
            const auto qp = try_bootstrap_quantiles(column, alpha);
            if (!qp) continue;
            const auto ci =
                ci_direct(*base.rho[h], qp->lower, qp->upper, cfg.nominal_level);
            width_sum[h] += ci.width();
            ++width_count[h];
            if (ci.covers(truth[h])) {
                ++covered[h];
                if (*base.rho[h] != 0.0) ++covered_nonzero[h];
            }
        }
    }

    for (std::size_t h = 0; h <= cfg.h_max; ++h) {
        const auto* cell =
            table.find(BootstrapScheme::Multiplier, ConfidenceInterval::Method::Direct, 0.1, h);
        REQUIRE(cell != nullptr);
        CHECK(cell->truth == truth[h]);
        CHECK(cell->covered == covered[h]);
        CHECK(cell->undefined_base == undefined[h]);
        CHECK(cell->zero_base == zero[h]);
        CHECK(cell->covered_nonzero == covered_nonzero[h]);
        CHECK(cell->width_count == width_count[h]);
        if (width_count[h] > 0) {
            CHECK(cell->mean_width ==
                  width_sum[h] / static_cast<double>(width_count[h]));
        }
        CHECK(cell->sim_count == cfg.sim_count);
        CHECK(cell->covered + (cell->sim_count - cell->covered) == cfg.sim_count);
    }
}

TEST_CASE("independent noise makes lag coverage a clipping event") {
    // phi = 0: truth is 0 beyond lag 0, so an interval covers exactly when
    // its clipped lower bound is 0.
    auto cfg = small_config();
    cfg.model = ModelSpec::ar1(0.0, InnovationDist::symmetrized_frechet(3.0), 50);
    cfg.sim_count = 30;
    const auto table = run_coverage_experiment(cfg);

    const auto pair = OrthantSetPair::tail(1.0);
    const std::size_t m = (cfg.n - cfg.h_max) / cfg.block_length;
    for (std::size_t h = 1; h <= cfg.h_max; ++h) {
        std::size_t expect = 0;
        for (std::size_t rep = 0; rep < cfg.sim_count; ++rep) {
            RngStream series_stream(cfg.seed, stream_purpose::model_series, rep);
            const auto series = simulate(cfg.model, cfg.n, series_stream);
            const double a = estimate_threshold(
                series, ThresholdSpec::empirical_quantile(cfg.thresholds[0]));
            const auto base = empirical_extremogram(series, a, pair, cfg.h_max);
            if (!base.rho[h]) continue;
            const auto counts =
                block_exceedance_counts(series, a, pair, cfg.h_max, cfg.block_length);
            std::vector<std::optional<double>> column(cfg.replicates);
            for (std::size_t b = 0; b < cfg.replicates; ++b) {
                RngStream rng(cfg.seed, stream_purpose::multiplier_replicate,
                              replicate_stream_index(rep, b));
                column[b] =
                    weighted_ratio_row(counts, sample_multipliers(cfg.multipliers, m, rng))[h];
            }
            const auto qp = try_bootstrap_quantiles(column, 1.0 - cfg.nominal_level);
            if (!qp) continue;
            const auto ci = ci_direct(*base.rho[h], qp->lower, qp->upper, cfg.nominal_level);
            if (ci.lower == 0.0 && !ci.empty) ++expect;
        }
        const auto* cell =
            table.find(BootstrapScheme::Multiplier, ConfidenceInterval::Method::Direct, 0.1, h);
        REQUIRE(cell != nullptr);
        CHECK(cell->truth == 0.0);
        CHECK(cell->covered == expect);
    }
}

TEST_CASE("transfer at p1 == p2 matches direct coverage cell by cell") {
    auto cfg = small_config();
    cfg.transfer = TransferSpec{0.1, 0.1};
    const auto table = run_coverage_experiment(cfg);
    for (std::size_t h = 0; h <= cfg.h_max; ++h) {
        const auto* direct =
            table.find(BootstrapScheme::Multiplier, ConfidenceInterval::Method::Direct, 0.1, h);
        const auto* transfer = table.find(BootstrapScheme::Multiplier,
                                          ConfidenceInterval::Method::Transfer, 0.1, h);
        REQUIRE(direct != nullptr);
        REQUIRE(transfer != nullptr);
        CHECK(direct->covered == transfer->covered);
        CHECK(direct->undefined_base == transfer->undefined_base);
        CHECK(direct->zero_base == transfer->zero_base);
        CHECK(direct->mean_width == transfer->mean_width);
    }
}

TEST_CASE("all three schemes run and bookkeeping stays consistent") {
    auto cfg = small_config();
    cfg.schemes = {BootstrapScheme::Multiplier, BootstrapScheme::StationaryDMC,
                   BootstrapScheme::StationaryModified};
    cfg.sim_count = 12;
    const auto table = run_coverage_experiment(cfg);
    REQUIRE(table.cells.size() == 3 * (cfg.h_max + 1));
    for (const auto& cell : table.cells) {
        CHECK(cell.sim_count == cfg.sim_count);
        CHECK(cell.covered <= cell.sim_count - cell.undefined_base);
        CHECK(cell.covered_nonzero <= cell.covered);
        CHECK(cell.zero_base + cell.undefined_base <= cell.sim_count);
        if (cell.h == 0) {
            // rho(0) = 1 and every scheme reproduces it, so lag 0 covers
            // whenever the base is defined.
            CHECK(cell.covered == cell.sim_count - cell.undefined_base);
        }
        const double c = cell.coverage();
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(cell.se() == std::sqrt(c * (1.0 - c) / static_cast<double>(cell.sim_count)));
    }
}

TEST_CASE("a one-repetition experiment still populates the table") {
    ExperimentConfig cfg;
    cfg.model = ModelSpec::ar1(0.3, InnovationDist::symmetrized_frechet(3.0), 20);
    cfg.n = 50;
    cfg.sim_count = 1;
    cfg.replicates = 2;
    cfg.block_length = 10;
    cfg.h_max = 2;
    cfg.thresholds = {0.2};
    cfg.schemes = {BootstrapScheme::Multiplier};
    cfg.nominal_level = 0.9;
    cfg.truth = ExperimentConfig::Truth::Analytic;
    cfg.seed = 4;
    cfg.threads = 1;
    const auto table = run_coverage_experiment(cfg);
    REQUIRE(table.cells.size() == 3);
    for (const auto& cell : table.cells) {
        CHECK(cell.sim_count == 1);
        const double c = cell.coverage();
        CHECK((c == 0.0 || c == 1.0));
    }
}

TEST_CASE("report csv round-trips the table exactly") {
    auto cfg = small_config();
    cfg.transfer = TransferSpec{0.05, 0.1};
    cfg.thresholds = {0.1, 0.05};
    cfg.sim_count = 10;
    const auto table = run_coverage_experiment(cfg);

    const auto text = report_csv_string(table);
    std::istringstream in(text);
    const auto back = parse_report_csv(in);
    CHECK(back == table);
    CHECK(report_csv_string(back) == text);
}

TEST_CASE("emit_report writes csv files and plot panels") {
    auto cfg = small_config();
    cfg.schemes = {BootstrapScheme::Multiplier, BootstrapScheme::StationaryDMC,
                   BootstrapScheme::StationaryModified};
    cfg.sim_count = 6;
    const auto table = run_coverage_experiment(cfg);

    const auto dir = std::filesystem::temp_directory_path() / "extremo_report_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    const auto csv_paths = emit_report(table, ReportFormat::Csv, dir / "coverage.csv");
    REQUIRE(csv_paths.size() == 1);
    CHECK(std::filesystem::exists(csv_paths[0]));

    const auto plot_paths = emit_report(table, ReportFormat::PlotData, dir / "plots");
    REQUIRE(plot_paths.size() == 1);  // one (method, p) panel
    std::ifstream panel(plot_paths[0]);
    std::string line;
    std::getline(panel, line);  // comment
    std::getline(panel, line);
    CHECK(line == "h multiplier stationary_dmc stationary_modified nominal");
    std::size_t rows = 0;
    while (std::getline(panel, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == cfg.h_max + 1);

    const CoverageTable empty;
    CHECK_THROWS_AS(emit_report(empty, ReportFormat::Csv, dir / "nothing.csv"),
                    std::invalid_argument);
    CHECK_FALSE(std::filesystem::exists(dir / "nothing.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("missing oracle cache names the key instead of computing silently") {
    auto cfg = small_config();
    cfg.truth = ExperimentConfig::Truth::OracleCache;
    cfg.oracle_dir = std::filesystem::temp_directory_path() / "extremo_missing_oracle";
    cfg.build_oracle_if_missing = false;
    std::filesystem::remove_all(cfg.oracle_dir);
    try {
        run_coverage_experiment(cfg);
        FAIL_CHECK("expected a missing-oracle error");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find("oracle") != std::string::npos);
        CHECK(what.find("q0.1") != std::string::npos);
    }
}

TEST_CASE("oracle truth path builds the cache when allowed") {
    auto cfg = small_config();
    cfg.sim_count = 8;
    cfg.truth = ExperimentConfig::Truth::OracleCache;
    cfg.oracle_dir = std::filesystem::temp_directory_path() / "extremo_build_oracle";
    cfg.build_oracle_if_missing = true;
    cfg.oracle_budget = {4, 4000};
    cfg.oracle_seed = 2;
    std::filesystem::remove_all(cfg.oracle_dir);

    const auto table = run_coverage_experiment(cfg);
    CHECK(table.cells.size() == cfg.h_max + 1);
    CHECK(std::filesystem::exists(cfg.oracle_dir));
    // Truth came from the oracle: lag 0 is exactly 1.
    CHECK(table.cells[0].truth == 1.0);

    // Second run hits the cache and reproduces the table.
    const auto again = run_coverage_experiment(cfg);
    CHECK(again == table);
    std::filesystem::remove_all(cfg.oracle_dir);
}
