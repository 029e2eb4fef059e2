#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "extremo/harness.hpp"

namespace extremo {

namespace {

[[noreturn]] void bad_field(const std::string& key, const std::string& why) {
    throw std::invalid_argument("config: field '" + key + "' " + why);
}

std::string trim(const std::string& s) {
    std::size_t lo = 0, hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return s.substr(lo, hi - lo);
}

class KeyValues {
public:
    explicit KeyValues(std::istream& in) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            const std::string stripped = trim(line);
            if (stripped.empty()) continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                            " is not 'key = value'");
            }
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty()) bad_field("(line " + std::to_string(line_no) + ")", "has no key");
            if (!kv_.emplace(key, value).second) bad_field(key, "appears twice");
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string take(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) bad_field(key, "is required but missing");
        taken_.insert(it->first);
        return it->second;
    }

    std::string take_or(const std::string& key, const std::string& fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        taken_.insert(it->first);
        return it->second;
    }

    double take_double(const std::string& key) { return parse_double(key, take(key)); }
    double take_double_or(const std::string& key, double fallback) {
        return has(key) ? take_double(key) : fallback;
    }

    std::uint64_t take_uint(const std::string& key) { return parse_uint(key, take(key)); }
    std::uint64_t take_uint_or(const std::string& key, std::uint64_t fallback) {
        return has(key) ? take_uint(key) : fallback;
    }

    bool take_bool_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = take(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        bad_field(key, "must be true or false");
    }

    std::vector<double> take_double_list(const std::string& key) {
        const std::string v = take(key);
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) bad_field(key, "has an empty list entry");
            out.push_back(parse_double(key, t));
        }
        if (out.empty()) bad_field(key, "must be a nonempty list");
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : kv_) {
            if (!taken_.count(key)) bad_field(key, "is not a recognized key");
        }
    }

private:
    double parse_double(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) bad_field(key, "has trailing text after the number");
            return x;
        } catch (const std::invalid_argument&) {
            bad_field(key, "is not a number: '" + v + "'");
        } catch (const std::out_of_range&) {
            bad_field(key, "is out of range: '" + v + "'");
        }
    }

    std::uint64_t parse_uint(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const unsigned long long x = std::stoull(v, &used);
            if (used != v.size()) bad_field(key, "has trailing text after the number");
            return x;
        } catch (const std::exception&) {
            bad_field(key, "is not a nonnegative integer: '" + v + "'");
        }
    }

    std::map<std::string, std::string> kv_;
    std::set<std::string> taken_;
};

InnovationDist parse_innovation(KeyValues& kv) {
    const std::string kind = kv.take("innovation");
    if (kind == "student_t") {
        return InnovationDist::student_t(kv.take_double("innovation.nu"),
                                         kv.take_bool_or("innovation.unit_variance", false));
    }
    if (kind == "frechet") {
        return InnovationDist::symmetrized_frechet(kv.take_double("innovation.alpha"));
    }
    if (kind == "normal") return InnovationDist::standard_normal();
    bad_field("innovation", "must be student_t, frechet or normal");
}

ModelSpec parse_model(KeyValues& kv) {
    const std::string kind = kv.take("model");
    const InnovationDist innovation = parse_innovation(kv);
    if (kind == "garch") {
        const auto burn = static_cast<std::size_t>(kv.take_uint_or("burn_in", 2000));
        return ModelSpec::garch(kv.take_double("garch.alpha0"), kv.take_double("garch.alpha1"),
                                kv.take_double("garch.beta1"), innovation, burn);
    }
    if (kind == "ar1") {
        const auto burn = static_cast<std::size_t>(kv.take_uint_or("burn_in", 1000));
        return ModelSpec::ar1(kv.take_double("ar1.phi"), innovation, burn);
    }
    if (kind == "ma") {
        return ModelSpec::ma(kv.take_double_list("ma.coefficients"), innovation);
    }
    bad_field("model", "must be garch, ar1 or ma");
}

std::vector<BootstrapScheme> parse_schemes(const std::string& value) {
    std::vector<BootstrapScheme> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t == "multiplier") {
            out.push_back(BootstrapScheme::Multiplier);
        } else if (t == "stationary_dmc") {
            out.push_back(BootstrapScheme::StationaryDMC);
        } else if (t == "stationary_modified") {
            out.push_back(BootstrapScheme::StationaryModified);
        } else {
            bad_field("schemes", "has unknown scheme '" + t + "'");
        }
    }
    if (out.empty()) bad_field("schemes", "must list at least one scheme");
    return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
    KeyValues kv(in);
    ExperimentConfig cfg;

    cfg.model = parse_model(kv);
    cfg.n = static_cast<std::size_t>(kv.take_uint_or("n", 2000));
    cfg.sim_count = static_cast<std::size_t>(kv.take_uint_or("sim_count", 500));
    cfg.replicates = static_cast<std::size_t>(kv.take_uint_or("replicates", 200));
    cfg.block_length = static_cast<std::size_t>(kv.take_uint_or("block_length", 100));
    cfg.h_max = static_cast<std::size_t>(kv.take_uint_or("h_max", 10));
    cfg.thresholds = kv.take_double_list("thresholds");
    cfg.schemes = parse_schemes(
        kv.take_or("schemes", "multiplier,stationary_dmc,stationary_modified"));

    {
        const std::string methods = kv.take_or("ci_methods", "direct");
        cfg.direct_ci = false;
        std::stringstream ss(methods);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (t == "direct") {
                cfg.direct_ci = true;
            } else if (t == "transfer") {
                cfg.transfer = TransferSpec{kv.take_double("transfer.p1"),
                                            kv.take_double("transfer.p2")};
            } else {
                bad_field("ci_methods", "has unknown method '" + t + "'");
            }
        }
        if (!cfg.direct_ci && !cfg.transfer) {
            bad_field("ci_methods", "must enable at least one method");
        }
    }

    cfg.nominal_level = kv.take_double_or("nominal_level", 0.95);

    {
        const std::string truth = kv.take_or("truth", "oracle");
        if (truth == "oracle") {
            cfg.truth = ExperimentConfig::Truth::OracleCache;
        } else if (truth == "analytic") {
            cfg.truth = ExperimentConfig::Truth::Analytic;
        } else {
            bad_field("truth", "must be oracle or analytic");
        }
    }
    cfg.oracle_budget.series_count =
        static_cast<std::size_t>(kv.take_uint_or("oracle.series_count", 100));
    cfg.oracle_budget.series_length =
        static_cast<std::size_t>(kv.take_uint_or("oracle.series_length", 1000000));
    cfg.oracle_seed = kv.take_uint_or("oracle.seed", 1);
    cfg.oracle_dir = kv.take_or("oracle.dir", "oracle_cache");
    cfg.build_oracle_if_missing = kv.take_bool_or("oracle.build_if_missing", false);

    {
        const std::string mult = kv.take_or("multipliers", "t5");
        if (mult == "normal") {
            cfg.multipliers = MultiplierDist::standard_normal();
        } else if (mult.size() > 1 && mult[0] == 't') {
            cfg.multipliers = MultiplierDist::scaled_student_t(std::stod(mult.substr(1)));
        } else {
            bad_field("multipliers", "must be normal or t<nu>");
        }
    }
    {
        const std::string wrap = kv.take_or("wraparound", "paper");
        if (wrap == "paper") {
            cfg.wraparound = WraparoundRule::PaperModN1;
        } else if (wrap == "circular") {
            cfg.wraparound = WraparoundRule::Circular;
        } else {
            bad_field("wraparound", "must be paper or circular");
        }
    }
    {
        const std::string denom = kv.take_or("denominator", "all_n");
        if (denom == "all_n") {
            cfg.denominator = DenominatorConvention::AllN;
        } else if (denom == "truncated") {
            cfg.denominator = DenominatorConvention::Truncated;
        } else {
            bad_field("denominator", "must be all_n or truncated");
        }
    }
    {
        const std::string conv = kv.take_or("dmc_convention", "all_n_wrap");
        if (conv == "all_n_wrap") {
            cfg.dmc_convention = DmcConvention::AllNWrap;
        } else if (conv == "truncated") {
            cfg.dmc_convention = DmcConvention::Truncated;
        } else {
            bad_field("dmc_convention", "must be all_n_wrap or truncated");
        }
    }

    cfg.seed = kv.take_uint_or("seed", 0);
    cfg.threads = static_cast<unsigned>(kv.take_uint_or("threads", 0));

    kv.finish();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    return parse_experiment_config(in);
}

void ExperimentConfig::validate() const {
    model.validate();
    if (sim_count < 1) throw std::invalid_argument("config: field 'sim_count' must be >= 1");
    if (replicates < 2) throw std::invalid_argument("config: field 'replicates' must be >= 2");
    if (!(nominal_level > 0.0 && nominal_level < 1.0)) {
        throw std::invalid_argument("config: field 'nominal_level' must lie in (0, 1)");
    }
    if (n <= h_max) throw std::invalid_argument("config: field 'n' must exceed h_max");
    const std::size_t n_eff = n - h_max;
    if (n_eff < 2) throw std::invalid_argument("config: effective sample size must be >= 2");
    if (block_length == 0 || block_length > n_eff) {
        throw std::invalid_argument(
            "config: field 'block_length' must lie in [1, n - h_max]");
    }
    if (schemes.empty()) throw std::invalid_argument("config: field 'schemes' is empty");
    if (direct_ci && thresholds.empty()) {
        throw std::invalid_argument("config: field 'thresholds' is empty");
    }
    for (double p : thresholds) {
        if (!(p > 0.0 && p < 1.0)) {
            throw std::invalid_argument("config: field 'thresholds' must lie in (0, 1)");
        }
    }
    if (transfer) {
        if (!(transfer->p1 > 0.0 && transfer->p1 <= transfer->p2 && transfer->p2 < 1.0)) {
            throw std::invalid_argument(
                "config: fields 'transfer.p1'/'transfer.p2' need 0 < p1 <= p2 < 1");
        }
    }

    // Advisory rate heuristic, never an error: the block length should stay
    // well below sqrt(n * v_n) * sqrt(n) ~ n sqrt(p).
    for (double p : thresholds) {
        const double limit = static_cast<double>(n) * std::sqrt(p) / 2.0;
        if (static_cast<double>(block_length) > limit) {
            std::fprintf(stderr,
                         "warning: block_length %zu exceeds n*sqrt(p)/2 = %.1f at p = %g; "
                         "block asymptotics are doubtful at this scale\n",
                         block_length, limit, p);
        }
    }
}

}  // namespace extremo
