#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bepw/core/fft.hpp"
#include "bepw/core/field.hpp"
#include "bepw/core/norms.hpp"
#include "bepw/electro/tridiag.hpp"
#include "bepw/error.hpp"

namespace bepw {

struct ElectroSolution {
    VectorField grad_phi;
    double residual_norm = 0.0;       ///< max residual of the discrete Poisson system
    double solvability_defect = 0.0;  ///< zero-mode line integral of K
};

/// E_i = integral of K from the left end to x_i, 4th-order cumulative quadrature, E_0 = 0.
template <class T>
void cumulative_integral(const T* K, T* E, std::size_t n, std::size_t stride, double h) {
    auto k = [&](std::size_t i) { return K[i * stride]; };
    E[0] = T(0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        T seg;
        if (i == 0)
            seg = 9.0 * k(0) + 19.0 * k(1) - 5.0 * k(2) + k(3);
        else if (i + 2 == n)
            seg = 9.0 * k(n - 1) + 19.0 * k(n - 2) - 5.0 * k(n - 3) + k(n - 4);
        else
            seg = -k(i - 1) + 13.0 * k(i) + 13.0 * k(i + 1) - k(i + 2);
        E[(i + 1) * stride] = E[i * stride] + (h / 24.0) * seg;
    }
}

/// 1D field with dE/dx1 = K and E(x_min) = 0.
inline ScalarField solve_E_1d(const ScalarField& K) {
    const Grid& g = K.grid();
    if (g.dims != 1) throw ParameterError("solve_E_1d: expected a 1D grid");
    if (g.points[0] < 4) throw ParameterError("solve_E_1d: need at least 4 points");
    ScalarField E(g);
    cumulative_integral(K.values().data(), E.data().data(), g.points[0], 1, g.spacing(0));
    return E;
}

inline ScalarField solve_E_1d(const ScalarField& rho_p, const ScalarField& rho_m) { return solve_E_1d(rho_p - rho_m); }

namespace detail {

inline double zero_mode_integral(const ScalarField& K) {
    return integral(K) / K.grid().transverse_area();
}

inline std::string worst_line(const ScalarField& K) {
    const Grid& g = K.grid();
    const std::size_t n1 = g.points[0];
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t l = 0; l < g.lines(); ++l) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < n1; ++i) s += K[l * n1 + i];
        const double v = std::abs(static_cast<double>(s) * g.spacing(0));
        if (v > worst) {
            worst = v;
            at = l;
        }
    }
    return "worst line " + std::to_string(at) + " (j = " + std::to_string(at % g.points[1]) +
           ", k = " + std::to_string(at / g.points[1]) + ") with |integral K dx1| = " + std::to_string(worst);
}

inline ElectroSolution periodic_gradient(const ScalarField& K) {
    const Grid& g = K.grid();
    const auto mask = fft::all_axes(g);
    const auto Kh = fft::forward(K, mask);
    ElectroSolution sol{VectorField(g)};
    std::vector<fft::Spectrum> comp(static_cast<std::size_t>(g.dims), fft::Spectrum(g.size()));
    fft::Spectrum lap(g.size());
    std::array<std::size_t, 3> bin{};
    fft::for_each_mode(g, mask, [&](std::size_t n, const std::array<double, 3>& xi) {
        bin = {n % g.points[0], (n / g.points[0]) % g.points[1], n / (g.points[0] * g.points[1])};
        const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (k2 == 0.0) return;
        const auto phi = -Kh[n] / k2;
        lap[n] = -k2 * phi - Kh[n];
        for (int a = 0; a < g.dims; ++a)
            if (!fft::is_nyquist(g, a, bin[a])) comp[a][n] = std::complex<double>(0.0, xi[a]) * phi;
    });
    for (int a = 0; a < g.dims; ++a) {
        fft::backward(comp[a], g, mask);
        sol.grad_phi[a] = fft::real_part(comp[a], g);
    }
    fft::backward(lap, g, mask);
    double r = 0.0;
    for (const auto& c : lap) r = std::max(r, std::abs(c));
    sol.residual_norm = r;
    return sol;
}

}  // namespace detail

/// grad phi with Laplacian(phi) = K, phi decaying as |x1| -> infinity on a channel grid, or
/// mean-free on a fully periodic grid.
inline ElectroSolution riesz_gradient(const ScalarField& K, double solvability_tol = 1e-6) {
    const Grid& g = K.grid();
    K.ensure_finite("riesz_gradient");
    const double defect = detail::zero_mode_integral(K);
    if (std::abs(defect) > solvability_tol)
        throw SolvabilityError("riesz_gradient: zero transverse mode has line integral " + std::to_string(defect) +
                               " exceeding " + std::to_string(solvability_tol) + "; " + detail::worst_line(K));
    if (g.fully_periodic()) {
        auto sol = detail::periodic_gradient(K);
        sol.solvability_defect = defect;
        return sol;
    }

    const std::size_t n1 = g.points[0];
    if (n1 < 8) throw ParameterError("riesz_gradient: need at least 8 points along x1");
    const double h = g.spacing(0);
    const auto mask = fft::transverse_axes(g);
    fft::Spectrum Kh = fft::forward(K, mask);
    std::vector<fft::Spectrum> comp(static_cast<std::size_t>(g.dims), fft::Spectrum(g.size()));
    std::vector<std::complex<double>> phi(n1), dphi(n1);
    std::vector<double> work;
    const double transverse_count = static_cast<double>(g.lines());
    double residual = 0.0;

    for (std::size_t kk = 0; kk < g.points[2]; ++kk)
        for (std::size_t jj = 0; jj < g.points[1]; ++jj) {
            const std::size_t base = g.index(0, jj, kk);
            const double ky = g.dims > 1 ? g.wavenumber(1, jj) : 0.0;
            const double kz = g.dims > 2 ? g.wavenumber(2, kk) : 0.0;
            const double k = std::sqrt(ky * ky + kz * kz);
            const std::complex<double>* Kl = Kh.data() + base;

            if (k == 0.0) {
                cumulative_integral(Kl, comp[0].data() + base, n1, 1, h);
                continue;
            }

            // Numerov: a (phi_{i-1} + phi_{i+1}) - b phi_i = h^2/12 (K_{i-1} + 10 K_i + K_{i+1})
            const double s = h * h * k * k / 12.0;
            const double a = 1.0 - s, b = 2.0 + 10.0 * s;
            // decaying exterior root of a r^2 - b r + a = 0
            const double r = 2.0 * a / (b + std::sqrt(b * b - 4.0 * a * a));
            for (std::size_t i = 0; i < n1; ++i) {
                const auto km = i > 0 ? Kl[i - 1] : std::complex<double>(0.0);
                const auto kp = i + 1 < n1 ? Kl[i + 1] : std::complex<double>(0.0);
                phi[i] = -(h * h / 12.0) * (km + 10.0 * Kl[i] + kp);
            }
            const std::vector<std::complex<double>> rhs(phi);
            // rows scaled by -1: -a off-diagonal, b - a r at the ends
            solve_tridiag(-a, b, b - a * r, b - a * r, phi, work);
            for (std::size_t i = 0; i < n1; ++i) {
                const auto left = i > 0 ? phi[i - 1] : r * phi[0];
                const auto right = i + 1 < n1 ? phi[i + 1] : r * phi[n1 - 1];
                const auto res = -a * (left + right) + b * phi[i] - rhs[i];
                residual = std::max(residual, std::abs(res) / (h * h * transverse_count));
            }

            // compact derivative: d_{i-1} + 4 d_i + d_{i+1} = 3 (phi_{i+1} - phi_{i-1}) / h,
            // exterior ghosts phi = r phi_end with d = +-k phi
            for (std::size_t i = 0; i < n1; ++i) {
                const auto left = i > 0 ? phi[i - 1] : r * phi[0];
                const auto right = i + 1 < n1 ? phi[i + 1] : r * phi[n1 - 1];
                dphi[i] = 3.0 * (right - left) / h;
            }
            dphi[0] -= k * r * phi[0];
            dphi[n1 - 1] += k * r * phi[n1 - 1];
            solve_tridiag(1.0, 4.0, 4.0, 4.0, dphi, work);

            const bool nyq_y = g.dims > 1 && fft::is_nyquist(g, 1, jj);
            const bool nyq_z = g.dims > 2 && fft::is_nyquist(g, 2, kk);
            for (std::size_t i = 0; i < n1; ++i) {
                comp[0][base + i] = dphi[i];
                if (g.dims > 1 && !nyq_y) comp[1][base + i] = std::complex<double>(0.0, ky) * phi[i];
                if (g.dims > 2 && !nyq_z) comp[2][base + i] = std::complex<double>(0.0, kz) * phi[i];
            }
        }

    ElectroSolution sol{VectorField(g), residual, defect};
    for (int ax = 0; ax < g.dims; ++ax) {
        fft::backward(comp[ax], g, mask);
        sol.grad_phi[ax] = fft::real_part(comp[ax], g);
    }
    return sol;
}

/// || grad phi ||_{L^6} / || K ||_{L^2} in three dimensions.
inline double hls_ratio(const ScalarField& K) {
    if (K.grid().dims != 3) throw ParameterError("hls_ratio: requires a 3D grid");
    const double k2 = lp_norm(K, 2.0);
    if (!(k2 > 0.0)) throw ParameterError("hls_ratio: division by ||K||_2 = 0");
    const auto sol = riesz_gradient(K);
    return lp_norm(sol.grad_phi.magnitude(), 6.0) / k2;
}

}  // namespace bepw
