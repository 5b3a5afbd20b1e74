#pragma once

#include <cmath>
#include <string>

#include "bepw/error.hpp"

namespace bepw {

/// Barotropic gamma law P(rho) = kappa * rho^gamma.
struct PressureLaw {
    double kappa = 1.0;
    double gamma = 2.0;

    void validate() const {
        if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("pressure law: kappa must be positive");
        if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw ParameterError("pressure law: gamma must be >= 1");
    }

    double pressure(double rho) const {
        check(rho);
        return kappa * pw(rho, gamma);
    }

    /// P'(rho) = kappa gamma rho^(gamma-1); the squared sound speed.
    double derivative(double rho) const {
        check(rho);
        return kappa * gamma * pw(rho, gamma - 1.0);
    }

    double second_derivative(double rho) const {
        check(rho);
        return kappa * gamma * (gamma - 1.0) * pw(rho, gamma - 2.0);
    }

    double sound_speed(double rho) const { return std::sqrt(derivative(rho)); }

    /// Unchecked evaluations for inner loops whose caller has already verified rho > 0.
    double pressure_unchecked(double rho) const { return kappa * pw(rho, gamma); }
    double sound_speed_unchecked(double rho) const { return std::sqrt(kappa * gamma * pw(rho, gamma - 1.0)); }

    /// P(mid + delta/2) - P(mid - delta/2) without cancellation when |delta| << mid.
    /// The result is odd in delta and carries full relative precision however small delta is.
    double difference(double mid, double delta) const {
        const double half = 0.5 * delta;
        check(mid - std::abs(half));
        if (std::abs(delta) > 1e-3 * mid) return pressure(mid + half) - pressure(mid - half);
        // 2 * sum_{j odd} P^(j)(mid) half^j / j!, truncated after j = 5 (error ~ (delta/mid)^7)
        const double g = gamma;
        const double p1 = kappa * g * pw(mid, g - 1.0);
        const double inv2 = 1.0 / (mid * mid);
        const double p3 = p1 * (g - 1.0) * (g - 2.0) * inv2;
        const double p5 = p3 * (g - 3.0) * (g - 4.0) * inv2;
        const double h2 = half * half;
        return 2.0 * half * (p1 + h2 * (p3 / 6.0 + h2 * p5 / 120.0));
    }

private:
    static double pw(double x, double e) {
        if (e == 2.0) return x * x;
        if (e == 1.0) return x;
        if (e == 0.0) return 1.0;
        return std::pow(x, e);
    }

    static void check(double rho) {
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw DomainError("pressure law: density must be positive and finite, got " + std::to_string(rho));
    }
};

}  // namespace bepw

#include "bepw/core/field.hpp"

namespace bepw {

/// Pointwise P(rho); a non-positive density reports its node index.
inline ScalarField pressure(const PressureLaw& law, const ScalarField& rho) {
    ScalarField out(rho.grid());
    for (std::size_t n = 0; n < rho.size(); ++n) {
        if (!(rho[n] > 0.0)) throw DomainError("pressure: non-positive density at node " + std::to_string(n));
        out[n] = law.pressure(rho[n]);
    }
    return out;
}

inline double pressure(const PressureLaw& law, double rho) { return law.pressure(rho); }

}  // namespace bepw
