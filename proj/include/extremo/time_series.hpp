#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace extremo {

/**
 * Ordered real-valued observations, scalar or fixed-dimension vectors.
 *
 * Values are stored flat in observation-major order and must all be finite.
 * For lag analysis up to h_max the effective sample size is
 * length() - h_max; the trailing h_max observations only ever appear as the
 * lagged partner of an earlier observation.
 */
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::size_t dim = 1);

    [[nodiscard]] std::size_t length() const noexcept { return values_.size() / dim_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] std::span<const double> obs(std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }

    /// Scalar value at index i; meaningful only when dim() == 1.
    [[nodiscard]] double value(std::size_t i) const { return values_[i]; }

    /// Maximum norm max_j |x_j| of observation i.
    [[nodiscard]] double max_norm(std::size_t i) const;

    /// Largest coordinate max_j x_j of observation i (no absolute value);
    /// observation i lies outside (-inf, v)^d exactly when max_coord(i) >= v.
    [[nodiscard]] double max_coord(std::size_t i) const;

    [[nodiscard]] const std::vector<double>& data() const noexcept { return values_; }

private:
    std::vector<double> values_;
    std::size_t dim_;
};

}  // namespace extremo
