#include "extremo/exceedance.hpp"

#include <stdexcept>

namespace extremo {

namespace {

void check_pair(const TimeSeries& series, double a, const OrthantSetPair& pair) {
    if (!(a > 0.0)) throw std::invalid_argument("exceedance: threshold must be > 0");
    if (pair.lower_a.size() != series.dim() || pair.lower_b.size() != series.dim()) {
        throw std::invalid_argument("exceedance: set pair dimension does not match series");
    }
}

}  // namespace

ExceedanceIndicators exceedance_indicators(const TimeSeries& series, double a,
                                           const OrthantSetPair& pair, std::size_t lag) {
    check_pair(series, a, pair);
    if (series.length() <= lag) {
        throw std::invalid_argument("exceedance_indicators: series shorter than lag + 1");
    }
    const std::size_t n = series.length() - lag;
    ExceedanceIndicators out;
    out.marginal.resize(n);
    out.joint.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool in_a = pair.in_a(series.obs(i), a);
        out.marginal[i] = in_a ? 1 : 0;
        out.joint[i] = (in_a && pair.in_b(series.obs(i + lag), a)) ? 1 : 0;
    }
    return out;
}

std::vector<std::uint8_t> membership_a(const TimeSeries& series, double a,
                                       const OrthantSetPair& pair) {
    check_pair(series, a, pair);
    std::vector<std::uint8_t> flags(series.length());
    for (std::size_t i = 0; i < series.length(); ++i) {
        flags[i] = pair.in_a(series.obs(i), a) ? 1 : 0;
    }
    return flags;
}

std::vector<std::uint8_t> membership_b(const TimeSeries& series, double a,
                                       const OrthantSetPair& pair) {
    check_pair(series, a, pair);
    std::vector<std::uint8_t> flags(series.length());
    for (std::size_t i = 0; i < series.length(); ++i) {
        flags[i] = pair.in_b(series.obs(i), a) ? 1 : 0;
    }
    return flags;
}

double estimate_vn(const TimeSeries& series, double a, double x_star) {
    if (!(a > 0.0) || !(x_star > 0.0)) {
        throw std::invalid_argument("estimate_vn: a and x_star must be > 0");
    }
    const double cut = a * x_star;
    std::size_t count = 0;
    for (std::size_t i = 0; i < series.length(); ++i) {
        if (series.max_coord(i) >= cut) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(series.length());
}

}  // namespace extremo
