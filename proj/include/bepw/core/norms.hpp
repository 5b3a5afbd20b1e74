#pragma once

#include <cmath>
#include <limits>

#include "bepw/core/field.hpp"
#include "bepw/error.hpp"

namespace bepw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Riemann-sum L^p norm with cell-volume weight; p = kInf gives max |f|.
inline double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw ParameterError("lp_norm: p must be >= 1 or infinity");
    if (std::isinf(p)) return f.max_abs();
    const double vol = f.grid().cell_volume();
    // Scale by the max to avoid under/overflow of |f|^p.
    const double m = f.max_abs();
    if (m == 0.0) return 0.0;
    long double s = 0.0L;
    for (double v : f.values()) s += std::pow(std::abs(v) / m, p);
    return m * std::pow(static_cast<double>(s) * vol, 1.0 / p);
}

/// Cell-volume weighted sum of the values.
inline double integral(const ScalarField& f) {
    long double s = 0.0L;
    for (double v : f.values()) s += v;
    return static_cast<double>(s) * f.grid().cell_volume();
}

}  // namespace bepw
