#pragma once

#include <string>

#include "bepw/core/field.hpp"
#include "bepw/core/norms.hpp"
#include "bepw/core/pressure.hpp"

namespace bepw {

/// Two-species state held in sum/difference form:
///   sigma = (rho+ + rho-)/2,  K = rho+ - rho-,  mbar = (m+ + m-)/2,  q = m+ - m-.
/// Keeping the differences as primary variables lets the charge separation decay far below
/// the roundoff level of the densities themselves.
struct FluidState {
    double t = 0.0;
    PressureLaw law;
    ScalarField sigma;
    ScalarField K;
    VectorField mbar;
    VectorField q;

    FluidState() = default;
    FluidState(const Grid& g, PressureLaw l) : law(l), sigma(g), K(g), mbar(g), q(g) {}

    const Grid& grid() const { return sigma.grid(); }
    int dims() const { return grid().dims; }

    static FluidState from_species(const ScalarField& rho_p, const ScalarField& rho_m, const VectorField& mom_p,
                                   const VectorField& mom_m, PressureLaw law, double t = 0.0) {
        const Grid& g = rho_p.grid();
        FluidState s(g, law);
        s.t = t;
        for (std::size_t n = 0; n < g.size(); ++n) {
            s.sigma[n] = 0.5 * (rho_p[n] + rho_m[n]);
            s.K[n] = rho_p[n] - rho_m[n];
        }
        for (int d = 0; d < g.dims; ++d)
            for (std::size_t n = 0; n < g.size(); ++n) {
                s.mbar[d][n] = 0.5 * (mom_p[d][n] + mom_m[d][n]);
                s.q[d][n] = mom_p[d][n] - mom_m[d][n];
            }
        return s;
    }

    ScalarField rho(int sign) const {
        ScalarField out(grid());
        const double h = sign > 0 ? 0.5 : -0.5;
        for (std::size_t n = 0; n < out.size(); ++n) out[n] = sigma[n] + h * K[n];
        return out;
    }
    ScalarField rho_p() const { return rho(+1); }
    ScalarField rho_m() const { return rho(-1); }

    VectorField mom(int sign) const {
        VectorField out(grid());
        const double h = sign > 0 ? 0.5 : -0.5;
        for (int d = 0; d < dims(); ++d)
            for (std::size_t n = 0; n < out[d].size(); ++n) out[d][n] = mbar[d][n] + h * q[d][n];
        return out;
    }
    VectorField mom_p() const { return mom(+1); }
    VectorField mom_m() const { return mom(-1); }

    double mass(int sign) const { return integral(rho(sign)); }

    /// Species exchange: (rho+, m+) <-> (rho-, m-).
    FluidState swapped() const {
        FluidState s(*this);
        s.K *= -1.0;
        for (int d = 0; d < dims(); ++d) s.q[d] *= -1.0;
        return s;
    }

    bool all_finite() const {
        bool ok = sigma.all_finite() && K.all_finite();
        for (int d = 0; d < dims(); ++d) ok = ok && mbar[d].all_finite() && q[d].all_finite();
        return ok;
    }
};

}  // namespace bepw
