#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "bepw/core/filter.hpp"
#include "bepw/error.hpp"

namespace bepw {

/// Roots of lambda^2 + lambda + mu |xi|^2 = 0, larger real part first.
inline std::pair<std::complex<double>, std::complex<double>> lambda_pm(double mu, double xi) {
    if (!(mu > 0.0)) throw ParameterError("lambda_pm: mu must be positive");
    const double a = 4.0 * mu * xi * xi;
    if (a <= 1.0) {
        // -a / (2 (1 + sqrt(1 - a))) avoids cancellation for small xi
        const double lp = -0.5 * a / (1.0 + std::sqrt(1.0 - a));
        return {{lp, 0.0}, {-1.0 - lp, 0.0}};
    }
    const double w = 0.5 * std::sqrt(a - 1.0);
    return {{-0.5, w}, {-0.5, -w}};
}

namespace detail {

/// Both e^{-t/2} sinh(w t)/w style pieces: returns (G, G_t).
inline std::pair<double, double> green_pair(double mu, double xi, double t) {
    const double a = 4.0 * mu * xi * xi;
    if (t == 0.0) return {0.0, 1.0};
    if (a < 1.0) {
        const double w = 0.5 * std::sqrt(1.0 - a);
        const double lp = -0.5 * a / (1.0 + std::sqrt(1.0 - a));
        const double e = std::exp(lp * t);
        const double q = -std::expm1(-2.0 * w * t) / (2.0 * w);
        return {e * q, e * (lp * q + std::exp(-2.0 * w * t))};
    }
    const double e = std::exp(-0.5 * t);
    if (a == 1.0) return {t * e, e * (1.0 - 0.5 * t)};
    const double w = 0.5 * std::sqrt(a - 1.0);
    const double s = std::sin(w * t) / w;
    return {e * s, e * (std::cos(w * t) - 0.5 * s)};
}

}  // namespace detail

/// Fourier symbol of the damped-wave Green function, (e^{l+ t} - e^{l- t}) / (l+ - l-).
inline double symbol_G(double mu, double xi, double t) {
    if (!(t >= 0.0)) throw ParameterError("symbol_G: t must be nonnegative");
    return detail::green_pair(mu, xi, t).first;
}

/// Time derivative of symbol_G.
inline double symbol_G_t(double mu, double xi, double t) {
    if (!(t >= 0.0)) throw ParameterError("symbol_G_t: t must be nonnegative");
    return detail::green_pair(mu, xi, t).second;
}

/// Frozen coefficient mu with low-frequency cutoff radius eps.
struct GreenSymbol {
    double mu = 1.0;
    double eps = 0.2;

    GreenSymbol() = default;
    GreenSymbol(double mu_, double eps_) : mu(mu_), eps(eps_) { validate(); }

    /// Largest admissible cutoff radius for this mu.
    double eps0() const { return cutoff_limit(mu); }

    void validate() const {
        if (!(mu > 0.0)) throw ParameterError("GreenSymbol: mu must be positive");
        if (!(eps > 0.0) || !(eps < eps0()))
            throw ParameterError("GreenSymbol: eps must lie in (0, " + std::to_string(eps0()) + "), got " +
                                 std::to_string(eps));
    }

    double chi(double xi) const { return cutoff(xi, eps); }
    double G(double xi, double t) const { return symbol_G(mu, xi, t); }
    double G_t(double xi, double t) const { return symbol_G_t(mu, xi, t); }
    double low_G(double xi, double t) const { return chi(xi) * G(xi, t); }

    /// 1 / (l+ - l-), defined where the roots are real and distinct.
    double eta0(double xi) const {
        const double a = 4.0 * mu * xi * xi;
        if (!(a < 1.0)) throw DomainError("GreenSymbol::eta0: roots are not real and distinct at |xi| = " + std::to_string(xi));
        return 1.0 / std::sqrt(1.0 - a);
    }
};

}  // namespace bepw
