#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "extremo/cluster_process.hpp"
#include "extremo/rng.hpp"
#include "extremo/time_series.hpp"

namespace extremo {

/// Innovation distribution for the benchmark models.
struct InnovationDist {
    enum class Kind { StudentT, SymmetrizedFrechet, StandardNormal };

    Kind kind = Kind::StandardNormal;
    double nu = 0.0;            // StudentT degrees of freedom
    bool unit_variance = false; // StudentT: rescale to Var = 1 (needs nu > 2)
    double tail_alpha = 0.0;    // SymmetrizedFrechet tail index

    static InnovationDist student_t(double nu, bool unit_variance = false);
    static InnovationDist symmetrized_frechet(double alpha);
    static InnovationDist standard_normal();

    double sample(RngStream& rng) const;
    [[nodiscard]] std::string describe() const;
};

/**
 * One of the three benchmark time-series models:
 *   Garch:  X_t = sigma_t eps_t, sigma_t^2 = alpha0 + alpha1 X_{t-1}^2 + beta1 sigma_{t-1}^2
 *   Ar1:    X_t = phi X_{t-1} + eps_t
 *   Ma:     X_t = sum_j psi_j eps_{t-j}, finite order
 */
struct ModelSpec {
    enum class Kind { Garch, Ar1, Ma };

    Kind kind = Kind::Ar1;
    double alpha0 = 0.0, alpha1 = 0.0, beta1 = 0.0;  // Garch
    double phi = 0.0;                                 // Ar1
    std::vector<double> psi;                          // Ma coefficients psi_0..psi_q
    InnovationDist innovation;
    std::size_t burn_in = 0;

    static ModelSpec garch(double alpha0, double alpha1, double beta1,
                           InnovationDist innovation, std::size_t burn_in = 2000);
    static ModelSpec ar1(double phi, InnovationDist innovation, std::size_t burn_in = 1000);
    static ModelSpec ma(std::vector<double> psi, InnovationDist innovation);

    /// Throws std::invalid_argument on parameter violations.
    void validate() const;

    /// Advisory stderr warning for legal but unusual parameters
    /// (alpha1 + beta1 >= 1 has no finite-variance stationary solution).
    void warn_unusual() const;

    [[nodiscard]] std::string describe() const;
};

/// Simulate n observations; deterministic function of (spec, n, stream).
TimeSeries simulate(const ModelSpec& spec, std::size_t n, RngStream& rng);

TimeSeries simulate_garch(const ModelSpec& spec, std::size_t n, RngStream& rng);
TimeSeries simulate_ar1(const ModelSpec& spec, std::size_t n, RngStream& rng);
TimeSeries simulate_ma(const ModelSpec& spec, std::size_t n, RngStream& rng);

/// Draw with P{eps > x} = P{eps < -x} = (1 - exp(-x^-alpha)) / 2 for x > 0:
/// a fair sign times a Frechet(alpha) magnitude (-ln U)^(-1/alpha).
double sample_symmetrized_frechet(double alpha, RngStream& rng);

/// Multiplier weight distribution: mean 0, variance 1.
struct MultiplierDist {
    enum class Kind { ScaledStudentT, StandardNormal };

    Kind kind = Kind::ScaledStudentT;
    double nu = 5.0;

    static MultiplierDist scaled_student_t(double nu = 5.0) {
        return {Kind::ScaledStudentT, nu};
    }
    static MultiplierDist standard_normal() { return {Kind::StandardNormal, 0.0}; }

    [[nodiscard]] std::string describe() const;
};

/// m i.i.d. multiplier weights. The scaled-t variant multiplies a t_nu draw
/// by sqrt((nu - 2) / nu) and requires nu > 2.
MultiplierVector sample_multipliers(const MultiplierDist& dist, std::size_t m, RngStream& rng);

}  // namespace extremo
