#include "extremo/preasymptotic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "extremo/csv.hpp"
#include "extremo/exceedance.hpp"
#include "extremo/extremogram.hpp"
#include "extremo/parallel.hpp"
#include "extremo/rng.hpp"

namespace extremo {

std::vector<double> PreasymptoticOracle::values() const {
    std::vector<double> out(pooled.size());
    for (std::size_t h = 0; h < pooled.size(); ++h) {
        if (!pooled[h]) {
            throw std::runtime_error(
                "oracle: pre-asymptotic extremogram undefined at lag " + std::to_string(h) +
                " (no conditional events across the entire budget)");
        }
        out[h] = *pooled[h];
    }
    return out;
}

PreasymptoticOracle preasymptotic_extremogram(const ModelSpec& model, const ThresholdSpec& spec,
                                              std::size_t h_max, const OracleBudget& budget,
                                              std::uint64_t seed, unsigned threads) {
    model.validate();
    if (budget.series_count == 0 || budget.series_length == 0) {
        throw std::invalid_argument("oracle: budget must be positive");
    }

    struct SeriesCounts {
        std::uint64_t marginal = 0;
        std::vector<std::uint64_t> joint;
        std::vector<double> ratio;  // per-lag; NaN when marginal == 0
    };
    std::vector<SeriesCounts> per_series(budget.series_count);

    const OrthantSetPair pair = OrthantSetPair::tail(1.0);

    parallel_for(budget.series_count, threads, [&](std::size_t s) {
        RngStream rng(seed, stream_purpose::oracle_series, s);
        const TimeSeries series = simulate(model, budget.series_length + h_max, rng);
        const double a = estimate_threshold(series, spec);
        const auto in_a = membership_a(series, a, pair);

        SeriesCounts& sc = per_series[s];
        sc.joint.assign(h_max + 1, 0);
        sc.ratio.assign(h_max + 1, std::nan(""));

        const std::size_t n = budget.series_length;
        std::uint64_t marginal = 0;
        for (std::size_t i = 0; i < n; ++i) marginal += in_a[i];
        sc.marginal = marginal;
        for (std::size_t h = 0; h <= h_max; ++h) {
            std::uint64_t joint = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (in_a[i] && in_a[i + h]) ++joint;
            }
            sc.joint[h] = joint;
            if (marginal > 0) {
                sc.ratio[h] = static_cast<double>(joint) / static_cast<double>(marginal);
            }
        }
    });

    PreasymptoticOracle oracle;
    oracle.model = model;
    oracle.threshold = spec;
    oracle.h_max = h_max;
    oracle.budget = budget;
    oracle.seed = seed;
    oracle.pooled.resize(h_max + 1);
    oracle.mean_of_ratios.resize(h_max + 1);
    oracle.std_errors.assign(h_max + 1, 0.0);

    std::uint64_t marginal_total = 0;
    for (const auto& sc : per_series) {
        marginal_total += sc.marginal;
        if (sc.marginal > 0) ++oracle.defined_series;
    }

    for (std::size_t h = 0; h <= h_max; ++h) {
        std::uint64_t joint_total = 0;
        double ratio_sum = 0.0;
        for (const auto& sc : per_series) {
            joint_total += sc.joint[h];
            if (sc.marginal > 0) ratio_sum += sc.ratio[h];
        }
        if (marginal_total > 0) {
            oracle.pooled[h] =
                static_cast<double>(joint_total) / static_cast<double>(marginal_total);
        }
        if (oracle.defined_series > 0) {
            const double mean = ratio_sum / static_cast<double>(oracle.defined_series);
            oracle.mean_of_ratios[h] = mean;
            double ss = 0.0;
            for (const auto& sc : per_series) {
                if (sc.marginal > 0) ss += (sc.ratio[h] - mean) * (sc.ratio[h] - mean);
            }
            if (oracle.defined_series > 1) {
                const double var = ss / static_cast<double>(oracle.defined_series - 1);
                oracle.std_errors[h] =
                    std::sqrt(var / static_cast<double>(oracle.defined_series));
            }
        }
    }
    return oracle;
}

namespace {

void write_model(const ModelSpec& model, std::ostream& out) {
    switch (model.kind) {
        case ModelSpec::Kind::Garch:
            out << "model garch " << format_double(model.alpha0) << ' '
                << format_double(model.alpha1) << ' ' << format_double(model.beta1) << '\n';
            break;
        case ModelSpec::Kind::Ar1:
            out << "model ar1 " << format_double(model.phi) << '\n';
            break;
        case ModelSpec::Kind::Ma: {
            out << "model ma";
            for (double c : model.psi) out << ' ' << format_double(c);
            out << '\n';
            break;
        }
    }
    switch (model.innovation.kind) {
        case InnovationDist::Kind::StudentT:
            out << "innovation student_t " << format_double(model.innovation.nu) << ' '
                << (model.innovation.unit_variance ? "unit_variance" : "unit_scale") << '\n';
            break;
        case InnovationDist::Kind::SymmetrizedFrechet:
            out << "innovation frechet " << format_double(model.innovation.tail_alpha) << '\n';
            break;
        case InnovationDist::Kind::StandardNormal:
            out << "innovation normal\n";
            break;
    }
    out << "burn_in " << model.burn_in << '\n';
}

void write_threshold(const ThresholdSpec& spec, std::ostream& out) {
    switch (spec.mode) {
        case ThresholdSpec::Mode::OrderStatistic:
            out << "threshold order_statistic " << spec.k << '\n';
            break;
        case ThresholdSpec::Mode::EmpiricalQuantile:
            out << "threshold quantile " << format_double(spec.p) << '\n';
            break;
        case ThresholdSpec::Mode::Fixed:
            out << "threshold fixed " << format_double(spec.a) << '\n';
            break;
    }
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("oracle: bad number '" + s + "'");
    return v;
}

}  // namespace

void write_oracle(const PreasymptoticOracle& oracle, std::ostream& out) {
    out << "extremo-oracle v1\n";
    write_model(oracle.model, out);
    write_threshold(oracle.threshold, out);
    out << "h_max " << oracle.h_max << '\n';
    out << "series_count " << oracle.budget.series_count << '\n';
    out << "series_length " << oracle.budget.series_length << '\n';
    out << "seed " << oracle.seed << '\n';
    out << "defined_series " << oracle.defined_series << '\n';
    out << "columns h pooled mean_of_ratios se\n";
    for (std::size_t h = 0; h <= oracle.h_max; ++h) {
        out << h << ' ';
        out << (oracle.pooled[h] ? format_double(*oracle.pooled[h]) : "NA") << ' ';
        out << (oracle.mean_of_ratios[h] ? format_double(*oracle.mean_of_ratios[h]) : "NA")
            << ' ';
        out << format_double(oracle.std_errors[h]) << '\n';
    }
}

PreasymptoticOracle read_oracle(std::istream& in) {
    PreasymptoticOracle oracle;
    std::string line;
    if (!std::getline(in, line) || line != "extremo-oracle v1") {
        throw std::runtime_error("oracle: bad header");
    }

    ModelSpec model;
    bool saw_columns = false;
    while (std::getline(in, line)) {
        const auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "model") {
            if (toks.size() < 2) throw std::runtime_error("oracle: bad model line");
            if (toks[1] == "garch" && toks.size() == 5) {
                model.kind = ModelSpec::Kind::Garch;
                model.alpha0 = to_double(toks[2]);
                model.alpha1 = to_double(toks[3]);
                model.beta1 = to_double(toks[4]);
            } else if (toks[1] == "ar1" && toks.size() == 3) {
                model.kind = ModelSpec::Kind::Ar1;
                model.phi = to_double(toks[2]);
            } else if (toks[1] == "ma" && toks.size() >= 3) {
                model.kind = ModelSpec::Kind::Ma;
                for (std::size_t i = 2; i < toks.size(); ++i) {
                    model.psi.push_back(to_double(toks[i]));
                }
            } else {
                throw std::runtime_error("oracle: bad model line");
            }
        } else if (key == "innovation") {
            if (toks.size() >= 2 && toks[1] == "student_t" && toks.size() == 4) {
                model.innovation =
                    InnovationDist::student_t(to_double(toks[2]), toks[3] == "unit_variance");
            } else if (toks.size() == 3 && toks[1] == "frechet") {
                model.innovation = InnovationDist::symmetrized_frechet(to_double(toks[2]));
            } else if (toks.size() == 2 && toks[1] == "normal") {
                model.innovation = InnovationDist::standard_normal();
            } else {
                throw std::runtime_error("oracle: bad innovation line");
            }
        } else if (key == "burn_in" && toks.size() == 2) {
            model.burn_in = static_cast<std::size_t>(std::stoull(toks[1]));
        } else if (key == "threshold") {
            if (toks.size() == 3 && toks[1] == "order_statistic") {
                oracle.threshold =
                    ThresholdSpec::order_statistic(static_cast<std::size_t>(std::stoull(toks[2])));
            } else if (toks.size() == 3 && toks[1] == "quantile") {
                oracle.threshold = ThresholdSpec::empirical_quantile(to_double(toks[2]));
            } else if (toks.size() == 3 && toks[1] == "fixed") {
                oracle.threshold = ThresholdSpec::fixed(to_double(toks[2]));
            } else {
                throw std::runtime_error("oracle: bad threshold line");
            }
        } else if (key == "h_max" && toks.size() == 2) {
            oracle.h_max = static_cast<std::size_t>(std::stoull(toks[1]));
        } else if (key == "series_count" && toks.size() == 2) {
            oracle.budget.series_count = static_cast<std::size_t>(std::stoull(toks[1]));
        } else if (key == "series_length" && toks.size() == 2) {
            oracle.budget.series_length = static_cast<std::size_t>(std::stoull(toks[1]));
        } else if (key == "seed" && toks.size() == 2) {
            oracle.seed = std::stoull(toks[1]);
        } else if (key == "defined_series" && toks.size() == 2) {
            oracle.defined_series = static_cast<std::size_t>(std::stoull(toks[1]));
        } else if (key == "columns") {
            saw_columns = true;
            break;
        } else {
            throw std::runtime_error("oracle: unknown key '" + key + "'");
        }
    }
    if (!saw_columns) throw std::runtime_error("oracle: missing value table");

    oracle.model = model;
    oracle.pooled.assign(oracle.h_max + 1, std::nullopt);
    oracle.mean_of_ratios.assign(oracle.h_max + 1, std::nullopt);
    oracle.std_errors.assign(oracle.h_max + 1, 0.0);
    for (std::size_t h = 0; h <= oracle.h_max; ++h) {
        if (!std::getline(in, line)) throw std::runtime_error("oracle: truncated value table");
        const auto toks = tokens_of(line);
        if (toks.size() != 4 || std::stoull(toks[0]) != h) {
            throw std::runtime_error("oracle: bad value row '" + line + "'");
        }
        if (toks[1] != "NA") oracle.pooled[h] = to_double(toks[1]);
        if (toks[2] != "NA") oracle.mean_of_ratios[h] = to_double(toks[2]);
        oracle.std_errors[h] = to_double(toks[3]);
    }
    return oracle;
}

std::string oracle_cache_key(const ModelSpec& model, const ThresholdSpec& spec,
                             std::size_t h_max, const OracleBudget& budget,
                             std::uint64_t seed) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "__%s__h%zu__c%zu__l%zu__s%llu", spec.describe().c_str(),
                  h_max, budget.series_count, budget.series_length,
                  static_cast<unsigned long long>(seed));
    return model.describe() + buf;
}

void save_oracle(const PreasymptoticOracle& oracle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto key = oracle_cache_key(oracle.model, oracle.threshold, oracle.h_max,
                                      oracle.budget, oracle.seed);
    const auto path = dir / (key + ".oracle");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("oracle: cannot write " + path.string());
    write_oracle(oracle, out);
}

std::optional<PreasymptoticOracle> load_oracle(const std::filesystem::path& dir,
                                               const std::string& key) {
    const auto path = dir / (key + ".oracle");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    return read_oracle(in);
}

PreasymptoticOracle ensure_oracle(const ModelSpec& model, const ThresholdSpec& spec,
                                  std::size_t h_max, const OracleBudget& budget,
                                  std::uint64_t seed, const std::filesystem::path& dir,
                                  unsigned threads) {
    const auto key = oracle_cache_key(model, spec, h_max, budget, seed);
    if (auto cached = load_oracle(dir, key)) return *std::move(cached);
    PreasymptoticOracle oracle = preasymptotic_extremogram(model, spec, h_max, budget, seed,
                                                           threads);
    save_oracle(oracle, dir);
    return oracle;
}

}  // namespace extremo
