#include "extremo/time_series.hpp"

#include <cmath>
#include <stdexcept>

namespace extremo {

TimeSeries::TimeSeries(std::vector<double> values, std::size_t dim)
    : values_(std::move(values)), dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("TimeSeries: dimension must be positive");
    if (values_.empty() || values_.size() % dim_ != 0) {
        throw std::invalid_argument(
            "TimeSeries: length must be a positive multiple of the dimension");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("TimeSeries: all values must be finite");
        }
    }
}

double TimeSeries::max_norm(std::size_t i) const {
    const double* p = values_.data() + i * dim_;
    double m = std::abs(p[0]);
    for (std::size_t j = 1; j < dim_; ++j) m = std::max(m, std::abs(p[j]));
    return m;
}

double TimeSeries::max_coord(std::size_t i) const {
    const double* p = values_.data() + i * dim_;
    double m = p[0];
    for (std::size_t j = 1; j < dim_; ++j) m = std::max(m, p[j]);
    return m;
}

}  // namespace extremo
