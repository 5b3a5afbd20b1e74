#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "bepw/electro/electro.hpp"
#include "bepw/hydro/state.hpp"
#include "bepw/profile/profile.hpp"
#include "bepw/profile/shift.hpp"

namespace bepw {

/// Far-field data for the x1 ghost cells: the shifted planar wave with Darcy momentum and no
/// charge separation.
struct FarField {
    DiffusionProfile profile;
    ShiftField shift;

    static FarField constant(const PressureLaw& law, double rho, const Grid& g) {
        return {solve_profile(law, rho, rho, 1.0, 9), zero_shift(g)};
    }

    void state(double x1, double delta, double t, double& sigma, double& m1) const {
        const double scale = 1.0 / std::sqrt(1.0 + t);
        const double z = (x1 + delta) * scale;
        sigma = profile.value(z);
        m1 = -profile.law.derivative(sigma) * profile.slope(z) * scale;
    }
};

namespace detail {

inline double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

// Flux along axis d of u = [sigma, K, mbar_0.., q_0..]. Returns false on a non-positive density.
// Every expression is even in (K, q) for the sum variables and odd for the differences, so
// species exchange maps the flux exactly.
template <int D>
inline bool physical_flux(const std::array<double, 2 + 2 * D>& u, int d, const PressureLaw& law,
                          std::array<double, 2 + 2 * D>& F, double& speed) {
    const double sigma = u[0], K = u[1];
    const double rp = sigma + 0.5 * K, rm = sigma - 0.5 * K;
    if (!(rp > 0.0) || !(rm > 0.0)) return false;
    const double* mb = u.data() + 2;
    const double* q = u.data() + 2 + D;
    const double inv = 1.0 / (rp * rm);
    F[0] = mb[d];
    F[1] = q[d];
    for (int e = 0; e < D; ++e) {
        const double A = mb[d] * mb[e] + 0.25 * q[d] * q[e];
        const double B = mb[d] * q[e] + q[d] * mb[e];
        F[2 + e] = (A * sigma - 0.25 * B * K) * inv;
        F[2 + D + e] = (B * sigma - A * K) * inv;
    }
    F[2 + d] += 0.5 * (law.pressure_unchecked(rp) + law.pressure_unchecked(rm));
    F[2 + D + d] += law.difference(sigma, K);
    const double up = (mb[d] + 0.5 * q[d]) * (rm * inv), um = (mb[d] - 0.5 * q[d]) * (rp * inv);
    speed = std::max(std::abs(up) + law.sound_speed_unchecked(rp), std::abs(um) + law.sound_speed_unchecked(rm));
    return true;
}

}  // namespace detail

/// Finite-volume solver: MUSCL-minmod reconstruction, local Lax-Friedrichs fluxes and SSP-RK2
/// for the transport part, Strang-split with the exact friction/field source.
class EulerPoisson {
public:
    EulerPoisson(const Grid& g, PressureLaw law, FarField far = {}, double cfl_max = 0.9)
        : grid_(g), law_(law), far_(std::move(far)), cfl_max_(cfl_max) {
        law_.validate();
        if (!g.fully_periodic()) {
            if (far_.profile.zeta.empty()) throw ParameterError("hydro: channel grid needs far-field data");
            if (far_.shift.lines() != g.lines()) throw ParameterError("hydro: far-field shift does not match grid lines");
        }
        if (!(cfl_max > 0.0 && cfl_max <= 0.9)) throw ParameterError("hydro: cfl must lie in (0, 0.9]");
        for (int d = 0; d < g.dims; ++d)
            if (g.points[d] < 4) throw ParameterError("hydro: need at least 4 cells per axis");
    }

    const Grid& grid() const { return grid_; }
    const FarField& far_field() const { return far_; }

    /// Largest dt with dt * sum_d max(|u_d| + c) / h_d <= cfl.
    double max_dt(const FluidState& s, double cfl) const {
        std::array<double, 3> smax{0, 0, 0};
        const int dims = grid_.dims;
        for (std::size_t n = 0; n < grid_.size(); ++n) {
            const double rp = s.sigma[n] + 0.5 * s.K[n], rm = s.sigma[n] - 0.5 * s.K[n];
            if (!(rp > 0.0) || !(rm > 0.0)) throw DomainError("hydro: non-positive density at " + where(n));
            const double cp = law_.sound_speed(rp), cm = law_.sound_speed(rm);
            for (int d = 0; d < dims; ++d) {
                const double up = (s.mbar[d][n] + 0.5 * s.q[d][n]) / rp, um = (s.mbar[d][n] - 0.5 * s.q[d][n]) / rm;
                smax[d] = std::max(smax[d], std::max(std::abs(up) + cp, std::abs(um) + cm));
            }
        }
        double rate = 0.0;
        for (int d = 0; d < dims; ++d) rate += smax[d] / grid_.spacing(d);
        return cfl / rate;
    }

    /// Field gradient grad(phi) with Laplacian(phi) = K (1D: E with E(x_min) = 0).
    VectorField field(const FluidState& s) const {
        if (grid_.dims == 1 && !grid_.fully_periodic()) {
            VectorField v(grid_);
            v[0] = solve_E_1d(s.K);
            return v;
        }
        return riesz_gradient(s.K).grad_phi;
    }

    /// One Strang step: half source, SSP-RK2 transport, half source.
    void step(FluidState& s, double dt) {
        if (!(dt > 0.0)) throw ParameterError("hydro: dt must be positive");
        const double admissible = max_dt(s, cfl_max_);
        if (dt > admissible * (1.0 + 1e-12))
            throw CflError("hydro: dt = " + std::to_string(dt) + " violates the CFL bound", admissible);

        source(s, 0.5 * dt);
        const double t0 = s.t;
        FluidState s1 = s;
        std::array<long double, 2> f0{}, f1{};
        transport_rhs(s, t0, rhs_, f0);
        axpy(s1, dt, rhs_);
        check_state(s1);
        transport_rhs(s1, t0 + dt, rhs_, f1);
        axpy(s1, dt, rhs_);
        auto v = vars(s), v1 = vars(s1);
        for (std::size_t k = 0; k < nv(); ++k)
            for (std::size_t n = 0; n < grid_.size(); ++n) v[k][n] = 0.5 * v[k][n] + 0.5 * v1[k][n];
        for (int c = 0; c < 2; ++c) outflow_[c] += 0.5L * static_cast<long double>(dt) * (f0[c] + f1[c]);
        s.t = t0 + dt;
        check_state(s);
        source(s, 0.5 * dt);
        ++steps_;
    }

    /// Mass of species `sign` that has left through the x1 boundaries so far.
    double outflow(int sign) const {
        return static_cast<double>(outflow_[0] + (sign > 0 ? 0.5L : -0.5L) * outflow_[1]);
    }
    std::size_t steps() const { return steps_; }

private:
    Grid grid_;
    PressureLaw law_;
    FarField far_;
    double cfl_max_;
    std::array<long double, 2> outflow_{};  // sigma and K through the x1 ends
    std::size_t steps_ = 0;
    std::vector<std::vector<double>> rhs_;
    std::vector<double> buf_, slope_, flux_;

    std::size_t nv() const { return 2 + 2 * static_cast<std::size_t>(grid_.dims); }

    static std::vector<double*> vars(FluidState& s) {
        std::vector<double*> v{s.sigma.data().data(), s.K.data().data()};
        for (int d = 0; d < s.dims(); ++d) v.push_back(s.mbar[d].data().data());
        for (int d = 0; d < s.dims(); ++d) v.push_back(s.q[d].data().data());
        return v;
    }
    static std::vector<const double*> vars(const FluidState& s) {
        std::vector<const double*> v{s.sigma.data().data(), s.K.data().data()};
        for (int d = 0; d < s.dims(); ++d) v.push_back(s.mbar[d].data().data());
        for (int d = 0; d < s.dims(); ++d) v.push_back(s.q[d].data().data());
        return v;
    }

    std::string where(std::size_t n) const {
        const std::size_t i = n % grid_.points[0], j = (n / grid_.points[0]) % grid_.points[1],
                          k = n / (grid_.points[0] * grid_.points[1]);
        return "cell (" + std::to_string(i) + ", " + std::to_string(j) + ", " + std::to_string(k) + ") x1 = " +
               std::to_string(grid_.coord(0, i));
    }

    void check_state(const FluidState& s) const {
        for (std::size_t n = 0; n < grid_.size(); ++n) {
            const double rp = s.sigma[n] + 0.5 * s.K[n], rm = s.sigma[n] - 0.5 * s.K[n];
            if (!(rp > 0.0) || !(rm > 0.0) || !std::isfinite(rp) || !std::isfinite(rm))
                throw DomainError("hydro: non-positive or non-finite density at " + where(n));
        }
        if (!s.all_finite()) throw DomainError("hydro: non-finite momentum");
    }

    void axpy(FluidState& s, double dt, const std::vector<std::vector<double>>& r) const {
        auto v = vars(s);
        for (std::size_t k = 0; k < nv(); ++k)
            for (std::size_t n = 0; n < grid_.size(); ++n) v[k][n] += dt * r[k][n];
    }

    // Exact integration of m' = -m +- rho grad(phi) over tau with frozen densities.
    void source(FluidState& s, double tau) const {
        const auto g = field(s);
        const double e = std::exp(-tau), w = 1.0 - e;
        for (int d = 0; d < grid_.dims; ++d)
            for (std::size_t n = 0; n < grid_.size(); ++n) {
                const double gd = g[d][n];
                s.mbar[d][n] = s.mbar[d][n] * e + 0.5 * s.K[n] * gd * w;
                s.q[d][n] = s.q[d][n] * e + 2.0 * s.sigma[n] * gd * w;
            }
    }

    void transport_rhs(const FluidState& s, double t, std::vector<std::vector<double>>& out,
                       std::array<long double, 2>& boundary) {
        out.resize(nv());
        for (auto& o : out) o.assign(grid_.size(), 0.0);
        boundary = {0.0L, 0.0L};
        std::vector<double> delta;
        if (!grid_.fully_periodic()) delta = shift_at(far_.shift, t);
        switch (grid_.dims) {
            case 1: transport<1>(s, t, delta, out, boundary); break;
            case 2: transport<2>(s, t, delta, out, boundary); break;
            default: transport<3>(s, t, delta, out, boundary); break;
        }
    }

    template <int D>
    void transport(const FluidState& s, double t, const std::vector<double>& delta,
                   std::vector<std::vector<double>>& out, std::array<long double, 2>& boundary) const {
        constexpr int M = 2 + 2 * D;
        using Cell = std::array<double, M>;
        const auto v = vars(s);
        std::array<double*, M> o{};
        for (int k = 0; k < M; ++k) o[k] = out[k].data();

        for (int d = 0; d < D; ++d) {
            const std::size_t n = grid_.points[d], stride = grid_.stride(d);
            const double inv_h = 1.0 / grid_.spacing(d);
            const bool periodic = grid_.is_periodic(d);
            // transverse sweeps gather blocks of adjacent x1 positions so strided loads share cache lines
            const std::size_t B = d == 0 ? 1 : std::min<std::size_t>(8, grid_.points[0]);
            std::vector<std::vector<Cell>> bufs(B, std::vector<Cell>(n + 4));
            std::vector<Cell> slope(n + 2), flux(n + 1);
            std::vector<std::array<double, 2>> bgc(n + 4), bgf(n + 1);
            std::vector<std::vector<double>> dU(B, std::vector<double>(n * M));
            const std::size_t n0 = grid_.points[0], n1 = grid_.points[1], n2 = grid_.points[2];
            std::size_t line = 0;
            for (std::size_t k3 = 0; k3 < (d == 2 ? 1 : n2); ++k3)
                for (std::size_t j = 0; j < (d == 1 ? 1 : n1); ++j)
                    for (std::size_t i0 = 0; i0 < (d == 0 ? 1 : n0); i0 += B) {
                        const std::size_t base = grid_.index(i0, j, k3);
                        const std::size_t nb = std::min(B, (d == 0 ? 1 : n0) - i0);
                        for (std::size_t i = 0; i < n; ++i)
                            for (int k = 0; k < M; ++k) {
                                const double* src = v[k] + base + i * stride;
                                for (std::size_t b = 0; b < nb; ++b) bufs[b][i + 2][k] = src[b];
                            }
                        for (std::size_t b = 0; b < nb; ++b, ++line) {
                            auto& buf = bufs[b];
                            for (int gi : {-2, -1, static_cast<int>(n), static_cast<int>(n) + 1}) {
                                Cell& dst = buf[static_cast<std::size_t>(gi + 2)];
                                if (periodic) {
                                    const auto src = static_cast<std::size_t>((gi + static_cast<int>(n)) % static_cast<int>(n));
                                    dst = buf[src + 2];
                                } else {
                                    const double x1 = grid_.lo[0] + (static_cast<double>(gi) + 0.5) * grid_.spacing(0);
                                    dst.fill(0.0);
                                    far_.state(x1, delta[line], t, dst[0], dst[2]);
                                }
                            }
                            // along a bounded x1 the limiter acts on the deviation from the planar
                            // wave, whose face values are added back exactly
                            const bool dev = d == 0 && !periodic;
                            if (dev) {
                                const double h = grid_.spacing(0);
                                for (std::size_t c = 0; c < n + 4; ++c) {
                                    const double x1 = grid_.lo[0] + (static_cast<double>(c) - 1.5) * h;
                                    far_.state(x1, delta[line], t, bgc[c][0], bgc[c][1]);
                                    buf[c][0] -= bgc[c][0];
                                    buf[c][2] -= bgc[c][1];
                                }
                                for (std::size_t f = 0; f <= n; ++f)
                                    far_.state(grid_.lo[0] + static_cast<double>(f) * h, delta[line], t, bgf[f][0], bgf[f][1]);
                            }
                            for (std::size_t c = 0; c < n + 2; ++c)
                                for (int k = 0; k < M; ++k)
                                    slope[c][k] = detail::minmod(buf[c + 1][k] - buf[c][k], buf[c + 2][k] - buf[c + 1][k]);
                            // face f sits between cells f-1 and f
                            for (std::size_t f = 0; f <= n; ++f) {
                                Cell uL, uR, FL, FR;
                                for (int k = 0; k < M; ++k) {
                                    uL[k] = buf[f + 1][k] + 0.5 * slope[f][k];
                                    uR[k] = buf[f + 2][k] - 0.5 * slope[f + 1][k];
                                }
                                if (dev) {
                                    uL[0] += bgf[f][0];
                                    uR[0] += bgf[f][0];
                                    uL[2] += bgf[f][1];
                                    uR[2] += bgf[f][1];
                                }
                                double sL = 0.0, sR = 0.0;
                                if (!detail::physical_flux<D>(uL, d, law_, FL, sL) ||
                                    !detail::physical_flux<D>(uR, d, law_, FR, sR))
                                    throw DomainError("hydro: non-positive reconstructed density next to " +
                                                      where(base + b + std::min(f, n - 1) * stride));
                                const double alpha = std::max(sL, sR);
                                for (int k = 0; k < M; ++k)
                                    flux[f][k] = 0.5 * (FL[k] + FR[k]) - 0.5 * alpha * (uR[k] - uL[k]);
                            }
                            for (std::size_t i = 0; i < n; ++i)
                                for (int k = 0; k < M; ++k) dU[b][i * M + k] = (flux[i + 1][k] - flux[i][k]) * inv_h;
                            if (d == 0 && !periodic) {
                                const double area = grid_.cell_volume() * inv_h;
                                for (int c = 0; c < 2; ++c)
                                    boundary[c] += static_cast<long double>((flux[n][c] - flux[0][c]) * area);
                            }
                        }
                        for (std::size_t i = 0; i < n; ++i)
                            for (int k = 0; k < M; ++k) {
                                double* dst = o[k] + base + i * stride;
                                for (std::size_t b = 0; b < nb; ++b) dst[b] -= dU[b][i * M + k];
                            }
                    }
        }
    }
};

}  // namespace bepw
