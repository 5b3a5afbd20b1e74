#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "bepw/core/fft.hpp"
#include "bepw/core/field.hpp"

namespace bepw {

/// Upper limit for the cutoff radius given the coefficient bound c1 >= sup mu.
inline double cutoff_limit(double c1) {
    if (!(c1 > 0.0)) throw ParameterError("cutoff_limit: c1 must be positive");
    return 0.5 * std::min(1.0, std::sqrt(1.0 / (4.0 * c1)));
}

/// Run-level coefficient bound: 1.1 times the largest P'(rho) encountered.
inline double coefficient_bound(double max_sound_speed_sq) { return 1.1 * max_sound_speed_sq; }

/// Radial cutoff: 1 for r <= eps, 0 for r >= 2 eps, quintic smoothstep between.
inline double cutoff(double r, double eps) {
    const double s = std::clamp((r - eps) / eps, 0.0, 1.0);
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

namespace detail {

inline ScalarField apply_cutoff(const ScalarField& f, double eps, double c1, bool low) {
    const double limit = cutoff_limit(c1);
    if (!(eps > 0.0) || !(eps < limit))
        throw ParameterError("frequency filter: eps must lie in (0, " + std::to_string(limit) + "), got " + std::to_string(eps));
    const Grid& g = f.grid();
    const fft::AxisMask mask = fft::all_axes(g);
    fft::Spectrum s = fft::forward(f, mask);
    fft::for_each_mode(g, mask, [&](std::size_t n, const std::array<double, 3>& xi) {
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        const double c = cutoff(r, eps);
        s[n] *= low ? c : 1.0 - c;
    });
    fft::backward(s, g, mask);
    auto out = fft::real_part(s, g);
    out.ensure_finite("frequency filter");
    return out;
}

}  // namespace detail

/// chi(D) f. The channel axis is transformed as if periodic over its extent.
inline ScalarField low_pass(const ScalarField& f, double eps, double c1) { return detail::apply_cutoff(f, eps, c1, true); }

/// (1 - chi(D)) f.
inline ScalarField high_pass(const ScalarField& f, double eps, double c1) { return detail::apply_cutoff(f, eps, c1, false); }

}  // namespace bepw
