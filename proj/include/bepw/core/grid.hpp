#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "bepw/error.hpp"

namespace bepw {

/// Tensor grid on a channel [x_min, x_max] x T^(dims-1).
///
/// Axis 0 (x1) is non-periodic with cell-centred nodes x_i = x_min + (i + 1/2) h unless
/// `periodic_x1` is set, in which case it is periodic like the transverse axes, whose
/// nodes are x_i = lo + i h. Values are stored with axis 0 fastest.
struct Grid {
    int dims = 1;
    std::array<std::size_t, 3> points{1, 1, 1};
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 0.0, 0.0};
    bool periodic_x1 = false;

    /// Channel grid: x1 in [x_min, x_max], transverse axes periodic of the given lengths,
    /// centred on zero.
    static Grid channel(std::array<std::size_t, 3> n, double x_min, double x_max, std::array<double, 2> lengths = {0, 0},
                        int dims = 0) {
        Grid g;
        g.dims = dims > 0 ? dims : (n[2] > 1 ? 3 : (n[1] > 1 ? 2 : 1));
        g.points = n;
        g.lo = {x_min, -0.5 * lengths[0], -0.5 * lengths[1]};
        g.hi = {x_max, 0.5 * lengths[0], 0.5 * lengths[1]};
        for (int a = g.dims; a < 3; ++a) {
            g.points[a] = 1;
            g.lo[a] = g.hi[a] = 0.0;
        }
        g.validate();
        return g;
    }

    static Grid line(std::size_t n, double x_min, double x_max) { return channel({n, 1, 1}, x_min, x_max, {0, 0}, 1); }

    /// Fully periodic box [-L/2, L/2)^dims.
    static Grid periodic(int dims, std::size_t n, double length) {
        std::array<std::size_t, 3> pts{1, 1, 1};
        std::array<double, 3> lengths{0, 0, 0};
        for (int a = 0; a < dims; ++a) {
            pts[a] = n;
            lengths[a] = length;
        }
        return periodic_box(dims, pts, lengths);
    }

    static Grid periodic_box(int dims, std::array<std::size_t, 3> n, std::array<double, 3> lengths) {
        Grid g;
        g.dims = dims;
        g.points = n;
        g.periodic_x1 = true;
        for (int a = 0; a < 3; ++a) {
            if (a < dims) {
                g.lo[a] = -0.5 * lengths[a];
                g.hi[a] = 0.5 * lengths[a];
            } else {
                g.points[a] = 1;
                g.lo[a] = g.hi[a] = 0.0;
            }
        }
        g.validate();
        return g;
    }

    void validate() const {
        if (dims < 1 || dims > 3) throw ParameterError("grid: dims must be 1, 2 or 3");
        for (int a = 0; a < dims; ++a) {
            if (points[a] == 0) throw ParameterError("grid: points must be positive on axis " + std::to_string(a));
            if (!(hi[a] > lo[a])) throw ParameterError("grid: empty extent on axis " + std::to_string(a));
            if (is_periodic(a) && !is_pow2(points[a]))
                throw ParameterError("grid: periodic axis " + std::to_string(a) + " needs a power-of-two point count, got " +
                                     std::to_string(points[a]));
        }
        for (int a = dims; a < 3; ++a)
            if (points[a] != 1) throw ParameterError("grid: unused axes must have one point");
    }

    bool is_periodic(int axis) const { return axis > 0 || periodic_x1; }
    bool fully_periodic() const { return periodic_x1; }

    double length(int axis) const { return hi[axis] - lo[axis]; }
    double spacing(int axis) const { return axis < dims ? length(axis) / static_cast<double>(points[axis]) : 1.0; }

    double coord(int axis, std::size_t i) const {
        const double h = spacing(axis);
        return is_periodic(axis) ? lo[axis] + static_cast<double>(i) * h : lo[axis] + (static_cast<double>(i) + 0.5) * h;
    }

    std::size_t size() const { return points[0] * points[1] * points[2]; }
    /// Number of x1-lines (product of transverse point counts).
    std::size_t lines() const { return points[1] * points[2]; }

    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dims; ++a) v *= spacing(a);
        return v;
    }

    double transverse_area() const {
        double v = 1.0;
        for (int a = 1; a < dims; ++a) v *= length(a);
        return v;
    }

    std::size_t index(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
        return i + points[0] * (j + points[1] * k);
    }

    std::size_t stride(int axis) const {
        return axis == 0 ? 1 : (axis == 1 ? points[0] : points[0] * points[1]);
    }

    /// Angular wavenumber 2 pi k / L of FFT bin `bin` on a periodic axis.
    double wavenumber(int axis, std::size_t bin) const {
        const auto n = static_cast<long long>(points[axis]);
        long long k = static_cast<long long>(bin);
        if (k > n / 2) k -= n;
        return 2.0 * M_PI * static_cast<double>(k) / length(axis);
    }

    static bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

    bool operator==(const Grid& o) const {
        return dims == o.dims && points == o.points && lo == o.lo && hi == o.hi && periodic_x1 == o.periodic_x1;
    }
};

}  // namespace bepw
