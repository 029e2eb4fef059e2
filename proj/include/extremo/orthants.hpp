#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace extremo {

/**
 * A pair (A, B) of open upper-right orthants A = scale * (lower_a, inf) and
 * B = scale * (lower_b, inf). Membership is strict in every coordinate, and
 * scaling by any lambda > 0 stays inside the family.
 */
struct OrthantSetPair {
    std::vector<double> lower_a;  // cornerpoint of A
    std::vector<double> lower_b;  // cornerpoint of B
    double scale = 1.0;

    /// Scalar tail pair A = B = (x, inf), the tail dependence coefficient sets.
    static OrthantSetPair tail(double x = 1.0) { return {{x}, {x}, 1.0}; }

    [[nodiscard]] std::size_t dim() const noexcept { return lower_a.size(); }

    /// x in threshold * A, i.e. x_j > threshold * scale * lower_a_j for all j.
    [[nodiscard]] bool in_a(std::span<const double> x, double threshold) const {
        for (std::size_t j = 0; j < lower_a.size(); ++j) {
            if (!(x[j] > threshold * scale * lower_a[j])) return false;
        }
        return true;
    }

    [[nodiscard]] bool in_b(std::span<const double> x, double threshold) const {
        for (std::size_t j = 0; j < lower_b.size(); ++j) {
            if (!(x[j] > threshold * scale * lower_b[j])) return false;
        }
        return true;
    }

    /// The pair (lambda * A, lambda * B).
    [[nodiscard]] OrthantSetPair scaled(double lambda) const {
        return {lower_a, lower_b, scale * lambda};
    }
};

}  // namespace extremo
