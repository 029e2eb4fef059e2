#include "extremo/order_stats.hpp"

#include <algorithm>

namespace extremo {

double ascending_order_statistic_inplace(std::vector<double>& scratch, std::size_t k) {
    if (k == 0 || k > scratch.size()) {
        throw std::invalid_argument("order statistic index out of range");
    }
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(scratch.begin(), nth, scratch.end());
    return *nth;
}

double ascending_order_statistic(std::span<const double> values, std::size_t k) {
    std::vector<double> scratch(values.begin(), values.end());
    return ascending_order_statistic_inplace(scratch, k);
}

}  // namespace extremo
