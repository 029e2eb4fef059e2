#include "extremo/cluster_process.hpp"

#include <cmath>
#include <stdexcept>

namespace extremo {

StandardizedSeries standardize(const TimeSeries& series, double a, double x_star) {
    if (!(a > 0.0) || !(x_star > 0.0)) {
        throw std::invalid_argument("standardize: a and x_star must be > 0");
    }
    StandardizedSeries out;
    out.dim = series.dim();
    out.values.assign(series.data().size(), 0.0);
    const double cut = a * x_star;
    for (std::size_t i = 0; i < series.length(); ++i) {
        // Keep X_i / a when X_i falls outside (-inf, a x_star)^d.
        if (series.max_coord(i) >= cut) {
            const auto obs = series.obs(i);
            for (std::size_t j = 0; j < out.dim; ++j) out.values[i * out.dim + j] = obs[j] / a;
        }
    }
    return out;
}

namespace {

void check_process_args(const StandardizedSeries& series, const BlockScheme& scheme,
                        double v_n) {
    if (!(v_n > 0.0)) {
        throw std::invalid_argument("cluster process: degenerate normalization (v_n <= 0)");
    }
    if (v_n > 1.0) {
        throw std::invalid_argument("cluster process: v_n must lie in (0, 1]");
    }
    if (scheme.covered_count() > series.length()) {
        throw std::invalid_argument("cluster process: block scheme exceeds series length");
    }
}

std::vector<double> block_values(const StandardizedSeries& series, const BlockScheme& scheme,
                                 const ClusterFunctional& f) {
    std::vector<double> values(scheme.block_count);
    for (std::size_t j = 0; j < scheme.block_count; ++j) {
        const auto [first, last] = scheme.block_range(j);
        values[j] = f(BlockView{&series, first, last - first});
    }
    return values;
}

}  // namespace

ProcessValue empirical_process(const StandardizedSeries& series, const BlockScheme& scheme,
                               const ClusterFunctional& f, double v_n,
                               const Centering& centering) {
    check_process_args(series, scheme, v_n);
    const auto values = block_values(series, scheme, f);

    ProcessValue out;
    out.normalization = std::sqrt(static_cast<double>(scheme.n) * v_n);

    double center = centering.value;
    if (centering.mode == Centering::Mode::EmpiricalMean) {
        double sum = 0.0;
        bool any_nonzero = false;
        for (double v : values) {
            sum += v;
            any_nonzero = any_nonzero || (v != 0.0);
        }
        center = sum / static_cast<double>(values.size());
        out.all_blocks_zero = !any_nonzero;
    }

    double sum = 0.0;
    for (double v : values) sum += v - center;
    out.value = sum / out.normalization;
    return out;
}

ProcessValue multiplier_process(const StandardizedSeries& series, const BlockScheme& scheme,
                                const ClusterFunctional& f, const MultiplierVector& xi,
                                double v_n, const Centering& centering) {
    check_process_args(series, scheme, v_n);
    if (xi.size() != scheme.block_count) {
        throw std::invalid_argument("multiplier_process: multiplier count != block count");
    }
    const auto values = block_values(series, scheme, f);

    ProcessValue out;
    out.normalization = std::sqrt(static_cast<double>(scheme.n) * v_n);

    double center = centering.value;
    if (centering.mode == Centering::Mode::EmpiricalMean) {
        double sum = 0.0;
        bool any_nonzero = false;
        for (double v : values) {
            sum += v;
            any_nonzero = any_nonzero || (v != 0.0);
        }
        center = sum / static_cast<double>(values.size());
        out.all_blocks_zero = !any_nonzero;
    }

    double sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) sum += xi.xi[j] * (values[j] - center);
    out.value = sum / out.normalization;
    return out;
}

ProcessValue bootstrap_process(const StandardizedSeries& series, const BlockScheme& scheme,
                               const ClusterFunctional& f, const MultiplierVector& xi,
                               double v_n) {
    return multiplier_process(series, scheme, f, xi, v_n, Centering::empirical_mean());
}

}  // namespace extremo
