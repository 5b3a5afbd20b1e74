#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bepw/core/derivative.hpp"
#include "bepw/core/interp.hpp"
#include "bepw/core/pressure.hpp"
#include "bepw/error.hpp"

namespace bepw {

/// Self-similar profile W(zeta) of w_t = P(w)_{x1 x1}, sampled on [-L, L].
struct DiffusionProfile {
    PressureLaw law;
    double rho_minus = 1.0;
    double rho_plus = 1.0;
    double half_width = 20.0;
    std::vector<double> zeta;
    std::vector<double> W;
    std::vector<double> dW;
    double residual = 0.0;  ///< max-norm discrete ODE residual
    int newton_iterations = 0;

    double spacing() const { return zeta.size() > 1 ? zeta[1] - zeta[0] : 1.0; }
    HermiteTable table() const { return {zeta.front(), spacing(), W, dW}; }

    /// W(zeta); end states outside the sampled interval.
    double value(double z) const { return table().value(z); }
    /// W'(zeta), carrying the sign of rho_plus - rho_minus; zero outside the samples.
    double slope(double z) const {
        const double d = lagrange4(dW, zeta.front(), spacing(), z, 0.0);
        return rho_plus > rho_minus ? std::max(d, 0.0) : std::min(d, 0.0);
    }
    bool degenerate() const { return rho_minus == rho_plus; }
};

namespace detail {

// Rows of the 4th-order D1/D2 operators restricted to unknown rows 1..n-2: returns the
// first column index and the coefficient span for node row i.
struct StencilRow {
    std::size_t first;
    const double* coeff;
    std::size_t width;
    double sign;
    bool reversed;
};

inline StencilRow stencil_row(std::size_t i, std::size_t n, int order) {
    const auto& interior = order == 1 ? kD1Interior : kD2Interior;
    const auto& left = order == 1 ? kD1Left : kD2Left;
    if (i >= 2 && i + 2 < n) return {i - 2, interior.data(), 5, 1.0, false};
    if (i < 2) return {0, left[i].data(), 6, 1.0, false};
    const std::size_t r = n - 1 - i;
    return {n - 6, left[r].data(), 6, order == 1 ? -1.0 : 1.0, true};
}

inline double apply_row(const StencilRow& row, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t q = 0; q < row.width; ++q) {
        const std::size_t col = row.reversed ? row.first + row.width - 1 - q : row.first + q;
        s += row.coeff[q] * v[col];
    }
    return row.sign * s;
}

inline std::vector<double> profile_residual(const PressureLaw& law, const std::vector<double>& zeta,
                                            const std::vector<double>& W, double h) {
    const std::size_t n = W.size();
    std::vector<double> P(n);
    for (std::size_t i = 0; i < n; ++i) P[i] = law.pressure(W[i]);
    std::vector<double> r(n, 0.0);
    const double s1 = 1.0 / (12.0 * h), s2 = 1.0 / (12.0 * h * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        r[i] = s2 * apply_row(stencil_row(i, n, 2), P) + 0.5 * zeta[i] * s1 * apply_row(stencil_row(i, n, 1), W);
    return r;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// W' from the flux y = P'(W) W', which solves y' = -zeta y / (2 P'(W)). Anchored at the
// steepest node with the finite-difference slope, so the tails keep a definite sign instead of
// roundoff noise.
inline std::vector<double> flux_slope(const PressureLaw& law, const std::vector<double>& zeta,
                                      const std::vector<double>& W, double h) {
    const std::size_t n = W.size();
    std::vector<double> fd(n), g(n), p1(n);
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        fd[i] = apply_row(stencil_row(i, n, 1), W) / (12.0 * h);
        p1[i] = law.derivative(W[i]);
        g[i] = 0.5 * zeta[i] / p1[i];
        if (std::abs(fd[i]) > std::abs(fd[c])) c = i;
    }
    // integral of g over [zeta_i, zeta_{i+1}], 4th order
    auto segment = [&](std::size_t i) {
        if (i == 0) return h / 24.0 * (9 * g[0] + 19 * g[1] - 5 * g[2] + g[3]);
        if (i + 2 >= n) return h / 24.0 * (9 * g[n - 1] + 19 * g[n - 2] - 5 * g[n - 3] + g[n - 4]);
        return h / 24.0 * (-g[i - 1] + 13 * g[i] + 13 * g[i + 1] - g[i + 2]);
    };
    std::vector<double> I(n, 0.0);
    for (std::size_t i = c; i + 1 < n; ++i) I[i + 1] = I[i] + segment(i);
    for (std::size_t i = c; i > 0; --i) I[i - 1] = I[i] - segment(i - 1);
    const double yc = p1[c] * fd[c];
    std::vector<double> dW(n);
    for (std::size_t i = 0; i < n; ++i) dW[i] = yc * std::exp(-I[i]) / p1[i];
    return dW;
}

}  // namespace detail

/// Solves -zeta W'/2 = (P'(W) W')' on [-L, L] with W(-L) = rho_minus, W(L) = rho_plus by damped
/// Newton on a 4th-order finite-difference discretization with n_points nodes.
inline DiffusionProfile solve_profile(const PressureLaw& law, double rho_minus, double rho_plus, double L = 20.0,
                                      std::size_t n_points = 2001) {
    law.validate();
    if (!(rho_minus > 0.0) || !(rho_plus > 0.0)) throw DomainError("solve_profile: end states must be positive");
    if (!(L > 0.0)) throw ParameterError("solve_profile: L_zeta must be positive");
    if (n_points < 9) throw ParameterError("solve_profile: need at least 9 points");

    DiffusionProfile prof;
    prof.law = law;
    prof.rho_minus = rho_minus;
    prof.rho_plus = rho_plus;
    prof.half_width = L;
    const std::size_t n = n_points;
    const double h = 2.0 * L / static_cast<double>(n - 1);
    prof.zeta.resize(n);
    for (std::size_t i = 0; i < n; ++i) prof.zeta[i] = -L + static_cast<double>(i) * h;

    const double mid = 0.5 * (rho_minus + rho_plus), jump = rho_plus - rho_minus;
    prof.W.resize(n);
    for (std::size_t i = 0; i < n; ++i) prof.W[i] = mid + 0.5 * jump * std::tanh(0.5 * prof.zeta[i]);
    prof.W.front() = rho_minus;
    prof.W.back() = rho_plus;

    if (prof.degenerate()) {
        prof.W.assign(n, rho_plus);
        prof.dW.assign(n, 0.0);
        return prof;
    }

    const double s1 = 1.0 / (12.0 * h), s2 = 1.0 / (12.0 * h * h);
    std::vector<double> r = detail::profile_residual(law, prof.zeta, prof.W, h);
    std::vector<double> history{detail::max_abs(r)};
    const double tol = 1e-13 * std::max(1.0, std::abs(jump));
    const std::size_t m = n - 2;  // unknowns W_1..W_{n-2}
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

    int it = 0;
    for (; it < 50 && history.back() > tol; ++it) {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(m * 12);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            for (int order : {1, 2}) {
                const auto row = detail::stencil_row(i, n, order);
                for (std::size_t q = 0; q < row.width; ++q) {
                    const std::size_t col = row.reversed ? row.first + row.width - 1 - q : row.first + q;
                    if (col == 0 || col == n - 1) continue;
                    const double c = row.sign * row.coeff[q];
                    const double v = order == 2 ? s2 * c * law.derivative(prof.W[col]) : 0.5 * prof.zeta[i] * s1 * c;
                    trip.emplace_back(static_cast<int>(i - 1), static_cast<int>(col - 1), v);
                }
            }
        }
        Eigen::SparseMatrix<double> J(static_cast<int>(m), static_cast<int>(m));
        J.setFromTriplets(trip.begin(), trip.end());
        lu.compute(J);
        if (lu.info() != Eigen::Success) throw ConvergenceError("solve_profile: singular Newton Jacobian");
        Eigen::VectorXd rhs(static_cast<int>(m));
        for (std::size_t i = 0; i < m; ++i) rhs[static_cast<int>(i)] = -r[i + 1];
        const Eigen::VectorXd step = lu.solve(rhs);

        double lambda = 1.0;
        std::vector<double> trial(prof.W);
        double trial_norm = 0.0;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            for (std::size_t i = 0; i < m; ++i) {
                trial[i + 1] = prof.W[i + 1] + lambda * step[static_cast<int>(i)];
                if (!(trial[i + 1] > 0.0))
                    throw DomainError("solve_profile: density became non-positive at zeta = " +
                                      std::to_string(prof.zeta[i + 1]));
            }
            r = detail::profile_residual(law, prof.zeta, trial, h);
            trial_norm = detail::max_abs(r);
            if (trial_norm < history.back()) break;
        }
        prof.W = trial;
        history.push_back(trial_norm);
        if (history.size() > 3 && history.back() >= history[history.size() - 2] && history.back() < 1e2 * tol) break;
    }
    prof.newton_iterations = it;
    prof.residual = history.back();
    if (prof.residual > 1e-8) {
        std::string h_str;
        for (double v : history) h_str += " " + std::to_string(v);
        throw ConvergenceError("solve_profile: Newton did not converge; residual history:" + h_str);
    }

    prof.dW = detail::flux_slope(law, prof.zeta, prof.W, h);
    return prof;
}

/// W(x1 / sqrt(1 + t)) at each x1.
inline std::vector<double> eval_wave(const DiffusionProfile& prof, std::span<const double> x1, double t) {
    if (!(t >= 0.0)) throw ParameterError("eval_wave: t must be nonnegative");
    const double scale = 1.0 / std::sqrt(1.0 + t);
    const auto tab = prof.table();
    std::vector<double> out(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) out[i] = tab.value(x1[i] * scale);
    return out;
}

/// Darcy-law momentum -d/dx1 P(W(x1 / sqrt(1 + t))).
inline double darcy_momentum_at(const DiffusionProfile& prof, double x1, double t) {
    const double scale = 1.0 / std::sqrt(1.0 + t);
    const double z = x1 * scale;
    return -prof.law.derivative(prof.value(z)) * prof.slope(z) * scale;
}

inline std::vector<double> darcy_momentum(const DiffusionProfile& prof, std::span<const double> x1, double t) {
    if (!(t >= 0.0)) throw ParameterError("darcy_momentum: t must be nonnegative");
    std::vector<double> out(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) out[i] = darcy_momentum_at(prof, x1[i], t);
    return out;
}

/// Shortest round-trip decimal representation, independent of the C locale.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// CSV with header `zeta,W,dW`.
inline void write_profile_csv(std::ostream& os, const DiffusionProfile& prof) {
    os << "zeta,W,dW\n";
    for (std::size_t i = 0; i < prof.zeta.size(); ++i)
        os << format_double(prof.zeta[i]) << ',' << format_double(prof.W[i]) << ',' << format_double(prof.dW[i]) << '\n';
}

inline void write_profile_csv(const std::string& path, const DiffusionProfile& prof) {
    std::ofstream os(path);
    if (!os) throw IoError("profile: cannot open " + path);
    write_profile_csv(os, prof);
}

}  // namespace bepw
