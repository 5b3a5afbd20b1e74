#pragma once

#include <array>
#include <complex>

#include "bepw/core/fft.hpp"
#include "bepw/core/field.hpp"

namespace bepw {

namespace detail {

// 4th-order stencils: interior centred, two one-sided closure rows per end.
inline constexpr std::array<double, 5> kD1Interior{1.0, -8.0, 0.0, 8.0, -1.0};
inline constexpr std::array<std::array<double, 6>, 2> kD1Left{{{-25.0, 48.0, -36.0, 16.0, -3.0, 0.0},
                                                               {-3.0, -10.0, 18.0, -6.0, 1.0, 0.0}}};
inline constexpr std::array<double, 5> kD2Interior{-1.0, 16.0, -30.0, 16.0, -1.0};
inline constexpr std::array<std::array<double, 6>, 2> kD2Left{{{45.0, -154.0, 214.0, -156.0, 61.0, -10.0},
                                                               {10.0, -15.0, -4.0, 14.0, -6.0, 1.0}}};

inline void fd_line(const double* in, double* out, std::size_t n, std::size_t stride, double h, int order) {
    const auto& interior = order == 1 ? kD1Interior : kD2Interior;
    const auto& left = order == 1 ? kD1Left : kD2Left;
    const double scale = order == 1 ? 1.0 / (12.0 * h) : 1.0 / (12.0 * h * h);
    const double mirror = order == 1 ? -1.0 : 1.0;
    auto v = [&](std::size_t i) { return in[i * stride]; };
    for (std::size_t i = 2; i + 2 < n; ++i) {
        double s = 0.0;
        for (int q = 0; q < 5; ++q) s += interior[q] * v(i + q - 2);
        out[i * stride] = s * scale;
    }
    for (std::size_t r = 0; r < 2; ++r) {
        double sl = 0.0, sr = 0.0;
        for (std::size_t q = 0; q < 6; ++q) {
            sl += left[r][q] * v(q);
            sr += left[r][q] * v(n - 1 - q);
        }
        out[r * stride] = sl * scale;
        out[(n - 1 - r) * stride] = mirror * sr * scale;
    }
}

}  // namespace detail

/// d^order f / dx_axis^order: spectral on periodic axes, 4th-order finite differences with
/// one-sided closures on the channel axis.
inline ScalarField derivative(const ScalarField& f, int axis, int order) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dims) throw ParameterError("derivative: axis out of range");
    if (order != 1 && order != 2) throw ParameterError("derivative: order must be 1 or 2");
    if (g.points[axis] < 8) throw ParameterError("derivative: need at least 8 points on the axis");

    if (g.is_periodic(axis)) {
        const fft::AxisMask mask = 1u << axis;
        fft::Spectrum s = fft::forward(f, mask);
        const std::size_t stride = g.stride(axis), n = g.points[axis];
        for (std::size_t idx = 0; idx < s.size(); ++idx) {
            const std::size_t bin = (idx / stride) % n;
            const double xi = g.wavenumber(axis, bin);
            if (order == 1)
                s[idx] *= fft::is_nyquist(g, axis, bin) ? std::complex<double>(0.0) : std::complex<double>(0.0, xi);
            else
                s[idx] *= -xi * xi;
        }
        fft::backward(s, g, mask);
        auto out = fft::real_part(s, g);
        out.ensure_finite("derivative");
        return out;
    }

    ScalarField out(g);
    const std::size_t n = g.points[0];
    const double h = g.spacing(0);
    for (std::size_t line = 0; line < g.lines(); ++line)
        detail::fd_line(f.values().data() + line * n, out.values().data() + line * n, n, 1, h, order);
    out.ensure_finite("derivative");
    return out;
}

inline VectorField gradient(const ScalarField& f) {
    VectorField out;
    for (int a = 0; a < f.grid().dims; ++a) out.comp.push_back(derivative(f, a, 1));
    return out;
}

/// Applies d^alpha for a multi-index alpha (entries 0..2 per axis), chaining orders.
inline ScalarField derivative_multi(const ScalarField& f, std::array<int, 3> alpha) {
    ScalarField out = f;
    for (int a = 0; a < f.grid().dims; ++a) {
        int left = alpha[a];
        while (left > 0) {
            const int step = left >= 2 ? 2 : 1;
            out = derivative(out, a, step);
            left -= step;
        }
    }
    return out;
}

}  // namespace bepw
