#include "extremo/blocks.hpp"

#include <stdexcept>

namespace extremo {

BlockScheme partition_blocks(std::size_t n, std::size_t block_length) {
    if (block_length == 0) throw std::invalid_argument("partition_blocks: block length is 0");
    if (block_length > n) {
        throw std::invalid_argument("partition_blocks: block length exceeds sample size");
    }
    return {n, block_length, n / block_length};
}

BlockScheme partition_blocks(const TimeSeries& series, std::size_t block_length) {
    return partition_blocks(series.length(), block_length);
}

}  // namespace extremo
