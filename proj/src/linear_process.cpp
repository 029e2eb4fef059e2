#include "extremo/linear_process.hpp"

#include <cmath>
#include <stdexcept>

namespace extremo {

std::vector<double> linear_process_extremogram(std::span<const double> psi, double tail_index,
                                               std::size_t h_max) {
    if (!(tail_index > 0.0)) {
        throw std::invalid_argument("linear_process_extremogram: tail index must be > 0");
    }
    if (psi.empty()) {
        throw std::invalid_argument("linear_process_extremogram: no coefficients");
    }
    double denom = 0.0;
    for (double c : psi) {
        if (c < 0.0) {
            throw std::invalid_argument(
                "linear_process_extremogram: coefficients must be nonnegative");
        }
        denom += std::pow(c, tail_index);
    }
    if (!(denom > 0.0)) {
        throw std::invalid_argument("linear_process_extremogram: all coefficients are zero");
    }

    std::vector<double> rho(h_max + 1, 0.0);
    for (std::size_t h = 0; h <= h_max; ++h) {
        double num = 0.0;
        for (std::size_t j = 0; j + h < psi.size(); ++j) {
            num += std::pow(std::min(psi[j], psi[j + h]), tail_index);
        }
        rho[h] = num / denom;
    }
    rho[0] = 1.0;  // exact by definition; the ratio above equals it up to rounding
    return rho;
}

std::vector<double> ar1_coefficients(double phi, std::size_t count) {
    if (!(phi >= 0.0 && phi < 1.0)) {
        throw std::invalid_argument("ar1_coefficients: phi must lie in [0, 1)");
    }
    if (count == 0) throw std::invalid_argument("ar1_coefficients: count must be positive");
    std::vector<double> psi(count);
    double c = 1.0;
    for (std::size_t j = 0; j < count; ++j) {
        psi[j] = c;
        c *= phi;
    }
    return psi;
}

}  // namespace extremo
