#pragma once

#include <string>

#include "bepw/error.hpp"

namespace bepw {

namespace detail {

// g(u) = sigma - t/2 on the blend, u = s - (t/2 - 1) in [0, 1]:
// g = g' = g'' = g''' = 0 at u = 0, g = 0, g' = 1, g'' = g''' = 0 at u = 1.
inline double sigma_blend(double u) { return u * u * u * u * (-15.0 + u * (39.0 + u * (-34.0 + u * 10.0))); }
inline double sigma_blend_d(double u) { return u * u * u * (-60.0 + u * (195.0 + u * (-204.0 + u * 70.0))); }

inline void check_sigma_args(double t, double s) {
    if (!(t >= 2.0)) throw ParameterError("sigma: t must be >= 2, got " + std::to_string(t));
    if (!(s >= 0.0 && s <= t)) throw ParameterError("sigma: s must lie in [0, t], got " + std::to_string(s));
}

}  // namespace detail

/// Coefficient-freezing time: s for s > t/2, t/2 for s <= t/2 - 1, C^3 in between.
inline double sigma(double t, double s) {
    detail::check_sigma_args(t, s);
    if (s > 0.5 * t) return s;
    if (s <= 0.5 * t - 1.0) return 0.5 * t;
    return 0.5 * t + detail::sigma_blend(s - (0.5 * t - 1.0));
}

/// d sigma / ds.
inline double sigma_ds(double t, double s) {
    detail::check_sigma_args(t, s);
    if (s > 0.5 * t) return 1.0;
    if (s <= 0.5 * t - 1.0) return 0.0;
    return detail::sigma_blend_d(s - (0.5 * t - 1.0));
}

}  // namespace bepw
