#pragma once

#include <cmath>
#include <string>

#include "bepw/core/interp.hpp"
#include "bepw/hydro/perturbation.hpp"
#include "bepw/hydro/state.hpp"
#include "bepw/profile/profile.hpp"
#include "bepw/profile/shift.hpp"

namespace bepw {

namespace detail {

inline FluidState planar_state(const DiffusionProfile& prof, const std::vector<double>& delta0, const ScalarField& bump,
                               double species_sign) {
    const Grid& g = bump.grid();
    const std::size_t n1 = g.points[0];
    ScalarField rp(g), rm(g);
    VectorField mp(g), mm(g);
    for (std::size_t l = 0; l < g.lines(); ++l)
        for (std::size_t i = 0; i < n1; ++i) {
            const std::size_t n = l * n1 + i;
            const double x = g.coord(0, i) + delta0[l];
            const double w = prof.value(x);
            rp[n] = w + bump[n];
            rm[n] = w + species_sign * bump[n];
            mp[0][n] = mm[0][n] = darcy_momentum_at(prof, x, 0.0);
            for (const auto* r : {&rp, &rm})
                if (!((*r)[n] > 0.0))
                    throw DomainError("init: perturbed density is non-positive at cell " + std::to_string(i) +
                                      " on line " + std::to_string(l) + " (x1 = " + std::to_string(g.coord(0, i)) + ")");
        }
    return FluidState::from_species(rp, rm, mp, mm, prof.law, 0.0);
}

}  // namespace detail

/// rho(x1, 0) = W(x1) + mean-zero bump, momentum from Darcy's law.
inline FluidState init_1d(const DiffusionProfile& prof, const PerturbationSpec& p, const Grid& g) {
    if (g.dims != 1) throw ParameterError("init_1d: expected a 1D grid");
    return detail::planar_state(prof, {0.0}, mean_zero_bump(p, g), p.species_sign);
}

/// rho(x, 0) = W(x1 + delta0(x')) + per-line mean-zero bump, Darcy momentum along x1.
inline FluidState init_md(const DiffusionProfile& prof, const ShiftField& shift, const PerturbationSpec& p,
                          const Grid& g) {
    if (shift.lines() != g.lines()) throw ParameterError("init_md: shift does not match grid lines");
    return detail::planar_state(prof, shift.delta0, mean_zero_bump(p, g), p.species_sign);
}

/// Initial data of the one-dimensional comparison problem for a multi-D run: the profile W
/// itself with Darcy momentum, so V(0) is exactly the imposed perturbation.
inline FluidState init_reference(const DiffusionProfile& prof, const Grid& line) {
    if (line.dims != 1) throw ParameterError("init_reference: expected a 1D grid");
    return init_1d(prof, PerturbationSpec{}, line);
}

}  // namespace bepw
