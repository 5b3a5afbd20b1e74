#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "bepw/core/field.hpp"
#include "bepw/error.hpp"

namespace bepw {

enum class BumpShape { none, gaussian, dipole };

inline BumpShape parse_shape(const std::string& s) {
    if (s == "none") return BumpShape::none;
    if (s == "gaussian") return BumpShape::gaussian;
    if (s == "dipole") return BumpShape::dipole;
    throw ConfigError("perturbation: unknown shape '" + s + "' (expected none, gaussian or dipole)");
}

inline std::string shape_name(BumpShape s) {
    switch (s) {
        case BumpShape::none: return "none";
        case BumpShape::gaussian: return "gaussian";
        case BumpShape::dipole: return "dipole";
    }
    return "?";
}

/// Density bump added to rho+; rho- receives species_sign times the same bump
/// (+1 identical, -1 opposite, 0 unperturbed).
struct PerturbationSpec {
    BumpShape shape = BumpShape::none;
    double amplitude = 0.0;
    double width = 1.0;
    std::array<double, 3> center{0, 0, 0};
    double species_sign = 1.0;

    void validate() const {
        if (!(width > 0.0)) throw ParameterError("perturbation: width must be positive");
        if (!(species_sign == 1.0 || species_sign == -1.0 || species_sign == 0.0))
            throw ParameterError("perturbation: species_sign must be -1, 0 or 1");
        if (!std::isfinite(amplitude)) throw ParameterError("perturbation: amplitude must be finite");
    }
};

/// Raw bump: Gaussian blob, or the x1-antisymmetric pair of Gaussians, times a transverse
/// Gaussian on multi-D grids.
inline ScalarField raw_bump(const PerturbationSpec& p, const Grid& g) {
    const double w = p.width, a = p.amplitude;
    return ScalarField::sample(g, [&](double x, double y, double z) {
        double r2 = 0.0;
        if (g.dims > 1) r2 += (y - p.center[1]) * (y - p.center[1]);
        if (g.dims > 2) r2 += (z - p.center[2]) * (z - p.center[2]);
        const double tr = std::exp(-r2 / (w * w));
        const double dx = x - p.center[0];
        switch (p.shape) {
            case BumpShape::none: return 0.0;
            case BumpShape::gaussian: return a * std::exp(-dx * dx / (w * w)) * tr;
            case BumpShape::dipole: {
                const double l = dx - w, r = dx + w;
                return a * (std::exp(-l * l / (w * w)) - std::exp(-r * r / (w * w))) * tr;
            }
        }
        return 0.0;
    });
}

/// Removes the x1 line integral of f on every line by subtracting a multiple of a wider
/// Gaussian; the discrete sums vanish to roundoff afterwards.
inline void remove_line_means(ScalarField& f, double width, double center) {
    const Grid& g = f.grid();
    const std::size_t n1 = g.points[0];
    std::vector<double> comp(n1);
    long double csum = 0.0L;
    const double w2 = 2.0 * width;
    for (std::size_t i = 0; i < n1; ++i) {
        const double dx = g.coord(0, i) - center;
        comp[i] = std::exp(-dx * dx / (w2 * w2));
        csum += comp[i];
    }
    for (std::size_t l = 0; l < g.lines(); ++l) {
        double* line = f.data().data() + l * n1;
        long double s = 0.0L;
        for (std::size_t i = 0; i < n1; ++i) s += line[i];
        const double c = static_cast<double>(s / csum);
        for (std::size_t i = 0; i < n1; ++i) line[i] -= c * comp[i];
    }
}

inline double max_line_integral(const ScalarField& f) {
    const Grid& g = f.grid();
    const std::size_t n1 = g.points[0];
    double worst = 0.0;
    for (std::size_t l = 0; l < g.lines(); ++l) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < n1; ++i) s += f[l * n1 + i];
        worst = std::max(worst, std::abs(static_cast<double>(s) * g.spacing(0)));
    }
    return worst;
}

/// Per-line mean-zero perturbation for rho+ (species_sign scales it for rho-).
inline ScalarField mean_zero_bump(const PerturbationSpec& p, const Grid& g) {
    p.validate();
    ScalarField b = raw_bump(p, g);
    if (p.shape != BumpShape::none) remove_line_means(b, p.width, p.center[0]);
    return b;
}

}  // namespace bepw
