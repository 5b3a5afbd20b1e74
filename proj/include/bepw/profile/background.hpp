#pragma once

#include "bepw/core/field.hpp"
#include "bepw/profile/profile.hpp"
#include "bepw/profile/shift.hpp"

namespace bepw {

struct Background {
    ScalarField rho;
    VectorField u;
};

/// Planar wave W((x1 + delta(x', t)) / sqrt(1 + t)) with Darcy velocity along x1.
inline Background sample_background(const DiffusionProfile& prof, const ShiftField& shift, const Grid& g, double t) {
    if (shift.lines() != g.lines()) throw ParameterError("sample_background: shift does not match grid lines");
    const auto delta = shift_at(shift, t);
    Background bg{ScalarField(g), VectorField(g)};
    const std::size_t n1 = g.points[0];
    const double scale = 1.0 / std::sqrt(1.0 + t);
    const auto tab = prof.table();
    for (std::size_t l = 0; l < g.lines(); ++l)
        for (std::size_t i = 0; i < n1; ++i) {
            const double z = (g.coord(0, i) + delta[l]) * scale;
            const double w = tab.value(z);
            bg.rho[l * n1 + i] = w;
            bg.u[0][l * n1 + i] = -prof.law.derivative(w) * prof.slope(z) * scale / w;
        }
    return bg;
}

}  // namespace bepw
