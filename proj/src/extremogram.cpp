#include "extremo/extremogram.hpp"

#include <stdexcept>

#include "extremo/exceedance.hpp"

namespace extremo {

ExtremogramEstimate empirical_extremogram(const TimeSeries& series, double a,
                                          const OrthantSetPair& pair, std::size_t h_max,
                                          DenominatorConvention convention) {
    if (!(a > 0.0)) throw std::invalid_argument("empirical_extremogram: threshold must be > 0");
    const std::size_t len = series.length();
    if (convention == DenominatorConvention::AllN && len <= h_max) {
        throw std::invalid_argument("empirical_extremogram: need length > h_max");
    }

    const auto in_a = membership_a(series, a, pair);
    const auto in_b = membership_b(series, a, pair);

    ExtremogramEstimate est;
    est.threshold = a;
    est.spec = ThresholdSpec::fixed(a);
    est.convention = convention;
    est.effective_n = (convention == DenominatorConvention::AllN) ? len - h_max : len;
    est.rho.resize(h_max + 1);
    est.joint_counts.assign(h_max + 1, 0);

    const std::size_t n = est.effective_n;
    std::size_t marginal = 0;
    for (std::size_t i = 0; i < n; ++i) marginal += in_a[i];
    est.marginal_count = marginal;

    for (std::size_t h = 0; h <= h_max; ++h) {
        const std::size_t upper = (convention == DenominatorConvention::AllN) ? n : n - h;
        std::size_t joint = 0;
        for (std::size_t i = 0; i < upper; ++i) {
            if (in_a[i] && in_b[i + h]) ++joint;
        }
        est.joint_counts[h] = joint;
        if (marginal > 0) {
            est.rho[h] = static_cast<double>(joint) / static_cast<double>(marginal);
        }
    }
    return est;
}

ExtremogramEstimate empirical_extremogram_estimated(const TimeSeries& series,
                                                    const ThresholdSpec& spec,
                                                    const OrthantSetPair& pair,
                                                    std::size_t h_max,
                                                    DenominatorConvention convention) {
    const double a = estimate_threshold(series, spec);
    ExtremogramEstimate est = empirical_extremogram(series, a, pair, h_max, convention);
    est.spec = spec;
    return est;
}

}  // namespace extremo
