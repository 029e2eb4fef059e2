#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace extremo {

/**
 * Limit extremogram of a finite linear process X_t = sum_j psi_j eps_{t-j}
 * with nonnegative coefficients, symmetric regularly varying innovations of
 * tail index alpha, and sets A = B = (1, inf):
 *
 *   rho(h) = sum_j min(psi_j, psi_{j+h})^alpha / sum_j psi_j^alpha.
 *
 * rho(0) = 1 and rho(h) = 0 for every h beyond the largest nonzero
 * coefficient index. Throws std::invalid_argument if alpha <= 0, any
 * coefficient is negative, or all coefficients are zero.
 */
std::vector<double> linear_process_extremogram(std::span<const double> psi, double tail_index,
                                               std::size_t h_max);

/// Coefficients psi_j = phi^j, j = 0..count-1, of an AR(1) expansion;
/// convenience for feeding autoregressive models into the formula above.
std::vector<double> ar1_coefficients(double phi, std::size_t count);

}  // namespace extremo
