#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bepw/core/field.hpp"
#include "bepw/profile/profile.hpp"

namespace bepw {

enum class ShiftReference {
    boundary_average,  ///< delta* = mean of delta0 over the transverse edge lines
    transverse_mean,   ///< delta* = mean of delta0 over all lines (what mass conservation selects on a torus)
};

/// delta0(x') on the transverse lines (index j + n2 * k) and its far-field value delta*.
struct ShiftField {
    std::vector<double> delta0;
    double delta_star = 0.0;

    std::size_t lines() const { return delta0.size(); }
};

inline double edge_average(const std::vector<double>& d0, const Grid& g) {
    if (g.dims == 1) return d0.at(0);
    const std::size_t n2 = g.points[1], n3 = g.dims == 3 ? g.points[2] : 1;
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t k = 0; k < n3; ++k)
        for (std::size_t j = 0; j < n2; ++j) {
            const bool edge = j == 0 || j + 1 == n2 || (g.dims == 3 && (k == 0 || k + 1 == n3));
            if (!edge) continue;
            s += d0[j + n2 * k];
            ++c;
        }
    return s / static_cast<double>(c);
}

inline double mean_of(const std::vector<double>& v) {
    long double s = 0.0L;
    for (double x : v) s += x;
    return static_cast<double>(s / static_cast<long double>(v.size()));
}

/// delta0(x') = (rho_+ - rho_-)^{-1} * integral over x1 of (rho_init - W(x1)).
inline ShiftField compute_delta0(const ScalarField& rho_init, const DiffusionProfile& prof,
                                 ShiftReference ref = ShiftReference::boundary_average,
                                 double decay_tol = 1e-8) {
    if (prof.degenerate())
        throw ParameterError("compute_delta0: the shift is only determined when rho_minus != rho_plus");
    const Grid& g = rho_init.grid();
    const std::size_t n1 = g.points[0];
    const double h = g.spacing(0);
    std::vector<double> w(n1);
    for (std::size_t i = 0; i < n1; ++i) w[i] = prof.value(g.coord(0, i));

    ShiftField s;
    s.delta0.resize(g.lines());
    const double jump = prof.rho_plus - prof.rho_minus;
    for (std::size_t l = 0; l < g.lines(); ++l) {
        const double* line = rho_init.data().data() + l * n1;
        const double a = std::abs(line[0] - w[0]), b = std::abs(line[n1 - 1] - w[n1 - 1]);
        if (std::max(a, b) > decay_tol)
            throw DomainError("compute_delta0: perturbation does not decay at the x1 boundary on line " +
                              std::to_string(l) + " (|rho - W| = " + std::to_string(std::max(a, b)) + ")");
        long double acc = 0.0L;
        for (std::size_t i = 0; i < n1; ++i) acc += static_cast<long double>(line[i]) - w[i];
        s.delta0[l] = static_cast<double>(acc) * h / jump;
    }
    s.delta_star = ref == ShiftReference::boundary_average ? edge_average(s.delta0, g) : mean_of(s.delta0);
    return s;
}

/// delta(x', t) = delta* + e^{-t} (delta0 - delta*).
inline std::vector<double> shift_at(const ShiftField& s, double t) {
    if (!(t >= 0.0)) throw ParameterError("shift_at: t must be nonnegative");
    const double e = std::exp(-t);
    std::vector<double> out(s.delta0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = e * s.delta0[i] + (1.0 - e) * s.delta_star;
    return out;
}

inline ShiftField zero_shift(const Grid& g) { return {std::vector<double>(g.lines(), 0.0), 0.0}; }

}  // namespace bepw
