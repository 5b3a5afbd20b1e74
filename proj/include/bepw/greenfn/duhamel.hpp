#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "bepw/core/fft.hpp"
#include "bepw/greenfn/symbol.hpp"

namespace bepw {

namespace detail {

/// Closed-form solution of v'' + v' + a v = f (f constant) from the characteristic roots.
inline std::complex<double> mode_ode_solution(double a, std::complex<double> v0, std::complex<double> v1,
                                              std::complex<double> f, double t) {
    if (a == 0.0) return v0 + (v1 - f) * (-std::expm1(-t)) + f * t;
    const std::complex<double> vp = f / a;
    const std::complex<double> w0 = v0 - vp, w1 = v1;
    const std::complex<double> root = std::sqrt(std::complex<double>(1.0 - 4.0 * a, 0.0));
    const std::complex<double> lp = 0.5 * (-1.0 + root), lm = 0.5 * (-1.0 - root);
    if (std::abs(root) < 1e-7) return vp + (w0 + (w1 + 0.5 * w0) * t) * std::exp(-0.5 * t);
    const std::complex<double> cp = (w1 - lm * w0) / root, cm = (lp * w0 - w1) / root;
    return vp + cp * std::exp(lp * t) + cm * std::exp(lm * t);
}

}  // namespace detail

/// Max over `samples` equally spaced times in (0, t_end] of the L2 gap between the
/// per-mode closed-form evolution of V_tt - mu Lap V + V_t = f (f independent of time)
/// and the Green representation G_t * V0 + G * (V0 + V1) + int_0^t G(t - s) * f ds.
inline double duhamel_residual(double mu, const ScalarField& V0, const ScalarField& V1, const ScalarField& forcing,
                               double t_end, int samples = 16) {
    const Grid& g = V0.grid();
    if (!(mu > 0.0)) throw ParameterError("duhamel_residual: mu must be positive");
    if (!g.fully_periodic()) throw DomainError("duhamel_residual: grid must be fully periodic");
    if (!(V1.grid() == g) || !(forcing.grid() == g)) throw ParameterError("duhamel_residual: grids differ");
    if (!(t_end > 0.0) || samples < 1) throw ParameterError("duhamel_residual: need t_end > 0 and samples >= 1");

    const fft::AxisMask mask = fft::all_axes(g);
    const fft::Spectrum s0 = fft::forward(V0, mask), s1 = fft::forward(V1, mask), sf = fft::forward(forcing, mask);
    std::vector<double> xi2(g.size());
    fft::for_each_mode(g, mask, [&](std::size_t n, const std::array<double, 3>& xi) {
        xi2[n] = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    });

    // int_0^t G(tau) dtau per distinct |xi|^2, accumulated panel by panel
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const double panel = 0.25;
    std::map<double, double> cum;
    for (double k2 : xi2) cum.emplace(k2, 0.0);

    const double dt = t_end / samples;
    const double norm_scale = g.cell_volume() / static_cast<double>(g.size());
    double worst = 0.0;
    for (int k = 1; k <= samples; ++k) {
        const double ta = (k - 1) * dt, tb = k * dt;
        const int np = std::max(1, static_cast<int>(std::ceil((tb - ta) / panel)));
        for (auto& [k2, acc] : cum) {
            const double xi = std::sqrt(k2);
            for (int p = 0; p < np; ++p) {
                const double a = ta + (tb - ta) * p / np, b = ta + (tb - ta) * (p + 1) / np;
                acc += Rule::integrate([&](double tau) { return symbol_G(mu, xi, tau); }, a, b);
            }
        }
        long double gap = 0.0L;
        for (std::size_t n = 0; n < g.size(); ++n) {
            const double xi = std::sqrt(xi2[n]);
            const auto [G, Gt] = detail::green_pair(mu, xi, tb);
            const std::complex<double> rep = Gt * s0[n] + G * (s0[n] + s1[n]) + cum[xi2[n]] * sf[n];
            const std::complex<double> ode = detail::mode_ode_solution(mu * xi2[n], s0[n], s1[n], sf[n], tb);
            gap += std::norm(rep - ode);
        }
        worst = std::max(worst, std::sqrt(static_cast<double>(gap) * norm_scale));
    }
    return worst;
}

}  // namespace bepw
