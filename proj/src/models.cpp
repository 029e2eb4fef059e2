#include "extremo/models.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace extremo {

InnovationDist InnovationDist::student_t(double nu, bool unit_variance) {
    if (!(nu > 0.0)) throw std::invalid_argument("InnovationDist: nu must be > 0");
    if (unit_variance && !(nu > 2.0)) {
        throw std::invalid_argument("InnovationDist: unit variance needs nu > 2");
    }
    InnovationDist d;
    d.kind = Kind::StudentT;
    d.nu = nu;
    d.unit_variance = unit_variance;
    return d;
}

InnovationDist InnovationDist::symmetrized_frechet(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("InnovationDist: alpha must be > 0");
    InnovationDist d;
    d.kind = Kind::SymmetrizedFrechet;
    d.tail_alpha = alpha;
    return d;
}

InnovationDist InnovationDist::standard_normal() {
    InnovationDist d;
    d.kind = Kind::StandardNormal;
    return d;
}

double InnovationDist::sample(RngStream& rng) const {
    switch (kind) {
        case Kind::StudentT: {
            const double t = rng.next_student_t(nu);
            return unit_variance ? t * std::sqrt((nu - 2.0) / nu) : t;
        }
        case Kind::SymmetrizedFrechet:
            return sample_symmetrized_frechet(tail_alpha, rng);
        case Kind::StandardNormal:
            return rng.next_normal();
    }
    return 0.0;  // unreachable
}

std::string InnovationDist::describe() const {
    char buf[64];
    switch (kind) {
        case Kind::StudentT:
            std::snprintf(buf, sizeof buf, unit_variance ? "tv%.12g" : "t%.12g", nu);
            break;
        case Kind::SymmetrizedFrechet:
            std::snprintf(buf, sizeof buf, "frechet%.12g", tail_alpha);
            break;
        case Kind::StandardNormal:
            std::snprintf(buf, sizeof buf, "normal");
            break;
    }
    return buf;
}

ModelSpec ModelSpec::garch(double alpha0, double alpha1, double beta1,
                           InnovationDist innovation, std::size_t burn_in) {
    ModelSpec s;
    s.kind = Kind::Garch;
    s.alpha0 = alpha0;
    s.alpha1 = alpha1;
    s.beta1 = beta1;
    s.innovation = innovation;
    s.burn_in = burn_in;
    s.validate();
    s.warn_unusual();
    return s;
}

ModelSpec ModelSpec::ar1(double phi, InnovationDist innovation, std::size_t burn_in) {
    ModelSpec s;
    s.kind = Kind::Ar1;
    s.phi = phi;
    s.innovation = innovation;
    s.burn_in = burn_in;
    s.validate();
    return s;
}

ModelSpec ModelSpec::ma(std::vector<double> psi, InnovationDist innovation) {
    ModelSpec s;
    s.kind = Kind::Ma;
    s.psi = std::move(psi);
    s.innovation = innovation;
    s.burn_in = 0;
    s.validate();
    return s;
}

void ModelSpec::validate() const {
    switch (kind) {
        case Kind::Garch:
            if (!(alpha0 > 0.0)) throw std::invalid_argument("garch: alpha0 must be > 0");
            if (alpha1 < 0.0 || beta1 < 0.0) {
                throw std::invalid_argument("garch: alpha1 and beta1 must be >= 0");
            }
            break;
        case Kind::Ar1:
            if (!(std::abs(phi) < 1.0)) throw std::invalid_argument("ar1: |phi| must be < 1");
            break;
        case Kind::Ma: {
            if (psi.empty()) throw std::invalid_argument("ma: needs at least one coefficient");
            for (double c : psi) {
                if (!std::isfinite(c)) throw std::invalid_argument("ma: coefficients must be finite");
            }
            break;
        }
    }
}

void ModelSpec::warn_unusual() const {
    if (kind != Kind::Garch) return;
    if (alpha1 + beta1 >= 1.0) {
        std::fprintf(stderr,
                     "warning: garch alpha1 + beta1 = %g >= 1 "
                     "(no finite-variance stationary solution)\n",
                     alpha1 + beta1);
        return;
    }
    // The variance condition really involves E[eps^2]: alpha1 E[eps^2] + beta1.
    double second_moment = 1.0;
    bool finite = true;
    switch (innovation.kind) {
        case InnovationDist::Kind::StudentT:
            if (innovation.unit_variance) {
                second_moment = 1.0;
            } else if (innovation.nu > 2.0) {
                second_moment = innovation.nu / (innovation.nu - 2.0);
            } else {
                finite = false;
            }
            break;
        case InnovationDist::Kind::SymmetrizedFrechet:
            finite = innovation.tail_alpha > 2.0;
            if (finite) second_moment = std::tgamma(1.0 - 2.0 / innovation.tail_alpha);
            break;
        case InnovationDist::Kind::StandardNormal:
            break;
    }
    if (!finite) {
        std::fprintf(stderr,
                     "warning: garch innovations have infinite variance; the process has "
                     "no finite-variance stationary solution for any alpha1 > 0\n");
    } else if (alpha1 * second_moment + beta1 >= 1.0) {
        std::fprintf(stderr,
                     "warning: garch effective persistence alpha1 E[eps^2] + beta1 = %g >= 1 "
                     "(no finite-variance stationary solution; consider unit-variance "
                     "innovations)\n",
                     alpha1 * second_moment + beta1);
    }
}

std::string ModelSpec::describe() const {
    char buf[160];
    switch (kind) {
        case Kind::Garch:
            std::snprintf(buf, sizeof buf, "garch_%.12g_%.12g_%.12g_%s_b%zu", alpha0, alpha1,
                          beta1, innovation.describe().c_str(), burn_in);
            return buf;
        case Kind::Ar1:
            std::snprintf(buf, sizeof buf, "ar1_%.12g_%s_b%zu", phi,
                          innovation.describe().c_str(), burn_in);
            return buf;
        case Kind::Ma: {
            std::string out = "ma";
            for (double c : psi) {
                std::snprintf(buf, sizeof buf, "_%.12g", c);
                out += buf;
            }
            out += "_" + innovation.describe();
            return out;
        }
    }
    return {};
}

TimeSeries simulate(const ModelSpec& spec, std::size_t n, RngStream& rng) {
    switch (spec.kind) {
        case ModelSpec::Kind::Garch:
            return simulate_garch(spec, n, rng);
        case ModelSpec::Kind::Ar1:
            return simulate_ar1(spec, n, rng);
        case ModelSpec::Kind::Ma:
            return simulate_ma(spec, n, rng);
    }
    throw std::invalid_argument("simulate: unknown model kind");
}

TimeSeries simulate_garch(const ModelSpec& spec, std::size_t n, RngStream& rng) {
    if (spec.kind != ModelSpec::Kind::Garch) throw std::invalid_argument("not a garch spec");
    spec.validate();
    if (n == 0) throw std::invalid_argument("simulate_garch: n must be positive");

    // Start the recursion at the unconditional variance when it exists.
    double sigma2 = (spec.alpha1 + spec.beta1 < 1.0)
                        ? spec.alpha0 / (1.0 - spec.alpha1 - spec.beta1)
                        : spec.alpha0;
    double x_prev = 0.0;
    std::vector<double> out(n);
    const std::size_t total = spec.burn_in + n;
    for (std::size_t t = 0; t < total; ++t) {
        if (t > 0) sigma2 = spec.alpha0 + spec.alpha1 * x_prev * x_prev + spec.beta1 * sigma2;
        const double x = std::sqrt(sigma2) * spec.innovation.sample(rng);
        x_prev = x;
        if (t >= spec.burn_in) out[t - spec.burn_in] = x;
    }
    return TimeSeries(std::move(out));
}

TimeSeries simulate_ar1(const ModelSpec& spec, std::size_t n, RngStream& rng) {
    if (spec.kind != ModelSpec::Kind::Ar1) throw std::invalid_argument("not an ar1 spec");
    spec.validate();
    if (n == 0) throw std::invalid_argument("simulate_ar1: n must be positive");

    double x = 0.0;
    std::vector<double> out(n);
    const std::size_t total = spec.burn_in + n;
    for (std::size_t t = 0; t < total; ++t) {
        x = spec.phi * x + spec.innovation.sample(rng);
        if (t >= spec.burn_in) out[t - spec.burn_in] = x;
    }
    return TimeSeries(std::move(out));
}

TimeSeries simulate_ma(const ModelSpec& spec, std::size_t n, RngStream& rng) {
    if (spec.kind != ModelSpec::Kind::Ma) throw std::invalid_argument("not an ma spec");
    spec.validate();
    if (n == 0) throw std::invalid_argument("simulate_ma: n must be positive");

    // q extra leading innovations make the convolution exact from t = 0;
    // draws are in time order eps_{1-q}, ..., eps_n.
    const std::size_t q = spec.psi.size() - 1;
    std::vector<double> eps(q + n);
    for (double& e : eps) e = spec.innovation.sample(rng);

    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        double x = 0.0;
        for (std::size_t j = 0; j < spec.psi.size(); ++j) x += spec.psi[j] * eps[t + q - j];
        out[t] = x;
    }
    return TimeSeries(std::move(out));
}

double sample_symmetrized_frechet(double alpha, RngStream& rng) {
    if (!(alpha > 0.0)) throw std::invalid_argument("symmetrized frechet: alpha must be > 0");
    const double magnitude = std::pow(-std::log(rng.next_open()), -1.0 / alpha);
    return rng.next_sign() * magnitude;
}

std::string MultiplierDist::describe() const {
    if (kind == Kind::StandardNormal) return "normal";
    char buf[32];
    std::snprintf(buf, sizeof buf, "t%.12g-scaled", nu);
    return buf;
}

MultiplierVector sample_multipliers(const MultiplierDist& dist, std::size_t m, RngStream& rng) {
    if (m == 0) throw std::invalid_argument("sample_multipliers: m must be >= 1");
    MultiplierVector out;
    out.xi.resize(m);
    if (dist.kind == MultiplierDist::Kind::ScaledStudentT) {
        if (!(dist.nu > 2.0)) {
            throw std::invalid_argument("sample_multipliers: scaled t needs nu > 2");
        }
        const double scale = std::sqrt((dist.nu - 2.0) / dist.nu);
        for (double& x : out.xi) x = scale * rng.next_student_t(dist.nu);
    } else {
        for (double& x : out.xi) x = rng.next_normal();
    }
    return out;
}

}  // namespace extremo
