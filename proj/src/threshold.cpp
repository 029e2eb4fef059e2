#include "extremo/threshold.hpp"

#include <cstdio>
#include <stdexcept>

#include "extremo/order_stats.hpp"

namespace extremo {

ThresholdSpec ThresholdSpec::order_statistic(std::size_t k) {
    if (k == 0) throw std::invalid_argument("ThresholdSpec: k must be positive");
    ThresholdSpec s;
    s.mode = Mode::OrderStatistic;
    s.k = k;
    return s;
}

ThresholdSpec ThresholdSpec::empirical_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("ThresholdSpec: p must lie in (0, 1)");
    }
    ThresholdSpec s;
    s.mode = Mode::EmpiricalQuantile;
    s.p = p;
    return s;
}

ThresholdSpec ThresholdSpec::fixed(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("ThresholdSpec: fixed threshold must be > 0");
    ThresholdSpec s;
    s.mode = Mode::Fixed;
    s.a = a;
    return s;
}

std::string ThresholdSpec::describe() const {
    char buf[64];
    switch (mode) {
        case Mode::OrderStatistic:
            std::snprintf(buf, sizeof buf, "k%zu", k);
            break;
        case Mode::EmpiricalQuantile:
            std::snprintf(buf, sizeof buf, "q%.12g", p);
            break;
        case Mode::Fixed:
            std::snprintf(buf, sizeof buf, "a%.12g", a);
            break;
    }
    return buf;
}

double estimate_threshold(const TimeSeries& series, const ThresholdSpec& spec) {
    const std::size_t n = series.length();
    double result = 0.0;

    switch (spec.mode) {
        case ThresholdSpec::Mode::OrderStatistic: {
            if (spec.k == 0) throw std::invalid_argument("estimate_threshold: k must be positive");
            const std::size_t tail = n / spec.k;  // floor(n/k)
            if (tail < 1) {
                throw std::invalid_argument("estimate_threshold: floor(n/k) must be >= 1");
            }
            if (n - tail < 1) {
                throw std::invalid_argument("estimate_threshold: n - floor(n/k) must be >= 1");
            }
            std::vector<double> norms(n);
            for (std::size_t i = 0; i < n; ++i) norms[i] = series.max_norm(i);
            result = ascending_order_statistic_inplace(norms, n - tail);
            break;
        }
        case ThresholdSpec::Mode::EmpiricalQuantile: {
            if (!(spec.p > 0.0 && spec.p < 1.0)) {
                throw std::invalid_argument("estimate_threshold: p must lie in (0, 1)");
            }
            if (series.dim() != 1) {
                throw std::invalid_argument(
                    "estimate_threshold: empirical quantile requires a scalar series");
            }
            const std::size_t idx = ceil_index((1.0 - spec.p) * static_cast<double>(n));
            std::vector<double> scratch(series.data());
            result = ascending_order_statistic_inplace(scratch, idx);
            break;
        }
        case ThresholdSpec::Mode::Fixed:
            result = spec.a;
            break;
    }

    if (!(result > 0.0)) {
        throw std::runtime_error("estimate_threshold: degenerate threshold (<= 0)");
    }
    return result;
}

}  // namespace extremo
