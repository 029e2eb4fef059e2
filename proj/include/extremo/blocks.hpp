#pragma once

#include <cstddef>
#include <utility>

#include "extremo/time_series.hpp"

namespace extremo {

/**
 * Partition of an effective sample of size n into block_count disjoint
 * blocks of exactly block_length consecutive observations. Trailing
 * observations beyond block_count * block_length are excluded from block
 * sums but remain part of non-blocked statistics.
 */
struct BlockScheme {
    std::size_t n = 0;             // effective sample size
    std::size_t block_length = 0;  // r
    std::size_t block_count = 0;   // m = floor(n / r)

    /// Half-open 0-based index range [first, last) of block j.
    [[nodiscard]] std::pair<std::size_t, std::size_t> block_range(std::size_t j) const {
        return {j * block_length, (j + 1) * block_length};
    }

    [[nodiscard]] std::size_t covered_count() const noexcept {
        return block_count * block_length;
    }
    [[nodiscard]] std::size_t excluded_count() const noexcept { return n - covered_count(); }
};

/// Partition n observations into floor(n / block_length) blocks.
/// Throws std::invalid_argument unless 1 <= block_length <= n.
BlockScheme partition_blocks(std::size_t n, std::size_t block_length);

/// Convenience overload over a whole series.
BlockScheme partition_blocks(const TimeSeries& series, std::size_t block_length);

}  // namespace extremo
