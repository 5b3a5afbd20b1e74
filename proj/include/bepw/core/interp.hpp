#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace bepw {

/// Cubic Hermite interpolation on a uniform table with value and slope samples.
/// Outside [x0, x0 + (n-1) h] the end values are returned (slope 0).
struct HermiteTable {
    double x0 = 0.0;
    double h = 1.0;
    std::span<const double> f;
    std::span<const double> df;

    double value(double x) const { return eval(x, false); }
    double slope(double x) const { return eval(x, true); }

private:
    double eval(double x, bool deriv) const {
        const std::size_t n = f.size();
        const double s = (x - x0) / h;
        if (s <= 0.0) return deriv ? 0.0 : f[0];
        if (s >= static_cast<double>(n - 1)) return deriv ? 0.0 : f[n - 1];
        auto i = static_cast<std::size_t>(s);
        if (i >= n - 1) i = n - 2;
        const double u = s - static_cast<double>(i);
        const double f0 = f[i], f1 = f[i + 1], m0 = df[i] * h, m1 = df[i + 1] * h;
        if (!deriv) {
            const double u2 = u * u, u3 = u2 * u;
            return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * m1;
        }
        const double u2 = u * u;
        return ((6 * u2 - 6 * u) * f0 + (3 * u2 - 4 * u + 1) * m0 + (-6 * u2 + 6 * u) * f1 + (3 * u2 - 2 * u) * m1) / h;
    }
};

/// Four-point Lagrange interpolation of uniformly spaced samples f_i at x0 + i h.
/// Returns `fallback` outside the sampled range.
inline double lagrange4(std::span<const double> f, double x0, double h, double x, double fallback) {
    const std::size_t n = f.size();
    const double s = (x - x0) / h;
    if (s < 0.0 || s > static_cast<double>(n - 1)) return fallback;
    auto i = static_cast<long long>(std::floor(s)) - 1;
    if (i < 0) i = 0;
    if (i > static_cast<long long>(n) - 4) i = static_cast<long long>(n) - 4;
    const double u = s - static_cast<double>(i);
    const double* p = f.data() + i;
    const double l0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
    const double l1 = u * (u - 2) * (u - 3) / 2.0;
    const double l2 = -u * (u - 1) * (u - 3) / 2.0;
    const double l3 = u * (u - 1) * (u - 2) / 6.0;
    return l0 * p[0] + l1 * p[1] + l2 * p[2] + l3 * p[3];
}

}  // namespace bepw
