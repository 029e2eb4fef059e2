#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "extremo/blocks.hpp"
#include "extremo/time_series.hpp"

namespace extremo {

/**
 * A series of "standardized extremes": observation i equals X_i / a when
 * X_i / a falls outside (-inf, x_star)^d and the zero vector otherwise.
 * Zeros mark non-extreme positions; block functionals must vanish on
 * all-zero blocks.
 */
struct StandardizedSeries {
    std::vector<double> values;  // flat, observation-major
    std::size_t dim = 1;

    [[nodiscard]] std::size_t length() const noexcept { return values.size() / dim; }
    [[nodiscard]] std::span<const double> obs(std::size_t i) const {
        return {values.data() + i * dim, dim};
    }
    [[nodiscard]] bool is_zero(std::size_t i) const {
        for (std::size_t j = 0; j < dim; ++j) {
            if (values[i * dim + j] != 0.0) return false;
        }
        return true;
    }
};

StandardizedSeries standardize(const TimeSeries& series, double a, double x_star);

/// A contiguous run of observations of a standardized series; functional
/// evaluation streams over the run, nothing is copied.
struct BlockView {
    const StandardizedSeries* series = nullptr;
    std::size_t first = 0;
    std::size_t count = 0;

    [[nodiscard]] std::size_t size() const noexcept { return count; }
    [[nodiscard]] std::size_t dim() const noexcept { return series->dim; }
    [[nodiscard]] std::span<const double> obs(std::size_t i) const {
        return series->obs(first + i);
    }
    [[nodiscard]] bool is_zero(std::size_t i) const { return series->is_zero(first + i); }
};

/// Cluster functional: f(all-zero block) = 0 and the value depends only on
/// the core of the block (leading/trailing zeros are immaterial). These two
/// properties are the caller's contract; they are asserted by tests, not
/// enforced at runtime.
using ClusterFunctional = std::function<double(const BlockView&)>;

/// Generalized tail array sum f_phi(y_1..y_r) = sum_i phi(y_i), phi(0) = 0.
struct TailArraySum {
    std::function<double(std::span<const double>)> phi;

    double operator()(const BlockView& block) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < block.size(); ++i) sum += phi(block.obs(i));
        return sum;
    }

    [[nodiscard]] ClusterFunctional as_functional() const {
        return [copy = *this](const BlockView& b) { return copy(b); };
    }
};

/// i.i.d. mean-0 variance-1 weights, one per block.
struct MultiplierVector {
    std::vector<double> xi;

    [[nodiscard]] std::size_t size() const noexcept { return xi.size(); }
    [[nodiscard]] double mean() const {
        double s = 0.0;
        for (double x : xi) s += x;
        return s / static_cast<double>(xi.size());
    }
};

/**
 * Block centering policy. The true expectation E f(Y_n) is a single number
 * by row stationarity and is known only to simulation oracles; the
 * empirical mean of the block values is the data-driven substitute.
 */
struct Centering {
    enum class Mode { EmpiricalMean, Expectation };

    Mode mode = Mode::EmpiricalMean;
    double value = 0.0;

    static Centering empirical_mean() { return {Mode::EmpiricalMean, 0.0}; }
    static Centering expectation(double v) { return {Mode::Expectation, v}; }
};

struct ProcessValue {
    double value = 0.0;
    double normalization = 0.0;   // sqrt(n * v_n)
    bool all_blocks_zero = false; // empirical-mean centering saw only zero f-values
};

/**
 * Empirical process of cluster functionals:
 *   Z_n(f) = (n v_n)^{-1/2} sum_j (f(Y_j) - centering).
 * With empirical-mean centering the sum is exactly zero by construction.
 * Requires v_n in (0, 1] and scheme.n <= series length.
 */
ProcessValue empirical_process(const StandardizedSeries& series, const BlockScheme& scheme,
                               const ClusterFunctional& f, double v_n,
                               const Centering& centering);

/**
 * Multiplier process Z_{n,xi}(f) = (n v_n)^{-1/2} sum_j xi_j (f(Y_j) - centering).
 * xi must have exactly scheme.block_count entries.
 */
ProcessValue multiplier_process(const StandardizedSeries& series, const BlockScheme& scheme,
                                const ClusterFunctional& f, const MultiplierVector& xi,
                                double v_n, const Centering& centering);

/**
 * Bootstrap process Z*_{n,xi}(f): like the multiplier process but centered at
 * the empirical block mean, so it is fully data-driven.
 */
ProcessValue bootstrap_process(const StandardizedSeries& series, const BlockScheme& scheme,
                               const ClusterFunctional& f, const MultiplierVector& xi,
                               double v_n);

}  // namespace extremo
