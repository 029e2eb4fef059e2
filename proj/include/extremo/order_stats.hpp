#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace extremo {

/**
 * Smallest integer >= x, guarded against floating-point roundup: products
 * like (1-p)*n that are integers in exact arithmetic can land one ulp above
 * the integer, which plain ceil would push up by one. The relative nudge of
 * 1e-12 restores the exact-arithmetic convention while leaving genuinely
 * fractional values untouched.
 */
inline std::size_t ceil_index(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("ceil_index: negative argument");
    return static_cast<std::size_t>(std::ceil(x * (1.0 - 1e-12)));
}

/// k-th ascending order statistic (1-based) of `values`.
double ascending_order_statistic(std::span<const double> values, std::size_t k);

/// Same, but selects in place on a caller-owned scratch buffer.
double ascending_order_statistic_inplace(std::vector<double>& scratch, std::size_t k);

}  // namespace extremo
