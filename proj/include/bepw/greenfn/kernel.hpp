#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "bepw/core/fft.hpp"
#include "bepw/core/lsq.hpp"
#include "bepw/core/norms.hpp"
#include "bepw/greenfn/sigma.hpp"
#include "bepw/greenfn/symbol.hpp"
#include "bepw/profile/profile.hpp"

namespace bepw {

/// Spatial multi-index and number of time derivatives applied to the kernel.
struct KernelDerivative {
    std::array<int, 3> alpha{0, 0, 0};
    int tderiv = 0;

    int order() const { return alpha[0] + alpha[1] + alpha[2]; }
};

struct KernelField {
    ScalarField field;
    double max_imag = 0.0;
    double alias_mass = 0.0;
};

/// erfc estimate of the Gaussian bulk mass lying outside the periodic box.
inline double kernel_alias_mass(double mu, const Grid& g, double t) {
    if (t <= 0.0) return 0.0;
    const double spread = std::sqrt(4.0 * mu * t);
    double m = 0.0;
    for (int a = 0; a < g.dims; ++a) m += std::erfc(0.5 * g.length(a) / spread);
    return m;
}

/// Smallest box length per axis keeping the alias mass below tol.
inline double kernel_extent(double mu, int dims, double t, double tol = 1e-8) {
    double lo = 0.0, hi = 40.0;
    const double target = tol / dims;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::erfc(mid) > target ? lo : hi) = mid;
    }
    return 2.0 * hi * std::sqrt(4.0 * mu * t);
}

/// chi(D) applied to G# (or a derivative of it) at time t, centred at y.
inline KernelField kernel_GL_full(const GreenSymbol& sym, const Grid& g, double t, KernelDerivative der = {},
                                  std::array<double, 3> y = {0, 0, 0}, double alias_tol = 1e-8) {
    sym.validate();
    if (!g.fully_periodic()) throw DomainError("kernel_GL: grid must be fully periodic");
    if (!(t >= 0.0)) throw ParameterError("kernel_GL: t must be nonnegative");
    if (der.tderiv < 0 || der.tderiv > 1) throw ParameterError("kernel_GL: at most one time derivative");
    const double alias = kernel_alias_mass(sym.mu, g, t);
    if (alias > alias_tol)
        throw DomainError("kernel_GL: periodic box too small at t = " + std::to_string(t) + " (alias mass " +
                          std::to_string(alias) + "); use extent >= " +
                          std::to_string(kernel_extent(sym.mu, g.dims, t, alias_tol)));

    const fft::AxisMask mask = fft::all_axes(g);
    fft::Spectrum s(g.size());
    const std::complex<double> I(0.0, 1.0);
    fft::for_each_mode(g, mask, [&](std::size_t n, const std::array<double, 3>& xi) {
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        const double c = sym.chi(r);
        if (c == 0.0) return;
        const auto [G, Gt] = detail::green_pair(sym.mu, r, t);
        std::complex<double> v = c * (der.tderiv ? Gt : G);
        for (int a = 0; a < g.dims; ++a)
            for (int k = 0; k < der.alpha[a]; ++k) v *= I * xi[a];
        // node i sits at lo + i h, so shift the origin to x = y
        double phase = 0.0;
        for (int a = 0; a < g.dims; ++a) phase += xi[a] * (g.lo[a] - y[a]);
        s[n] = v * std::polar(1.0, phase);
    });
    fft::backward(s, g, mask);
    const double scale = 1.0 / g.cell_volume();
    KernelField out{fft::real_part(s, g), fft::max_imag(s) * scale, alias};
    out.field *= scale;
    return out;
}

/// Low-frequency kernel G_L(x, t) = chi(D) G#(mu; x, t) on a periodic grid centred at 0.
inline ScalarField kernel_GL(double mu, double eps, const Grid& g, double t) {
    return kernel_GL_full(GreenSymbol(mu, eps), g, t).field;
}

/// Frozen coefficient a(y, sigma(t, s)).
inline double frozen_coefficient(const std::function<double(const std::array<double, 3>&, double)>& a,
                                 const std::array<double, 3>& y, double t, double s) {
    return a(y, sigma(t, s));
}

/// x -> G_L(a(y, sigma(t, s)); x - y, t - s).
inline ScalarField frozen_kernel(const std::function<double(const std::array<double, 3>&, double)>& a,
                                 const std::array<double, 3>& y, double t, double s, double eps, const Grid& g) {
    const GreenSymbol sym(frozen_coefficient(a, y, t, s), eps);
    return kernel_GL_full(sym, g, t - s, {}, y).field;
}

/// Standard periodic grid for kernel norm tables.
inline Grid kernel_grid(int dims) {
    if (dims == 1) return Grid::periodic(1, 2048, 2048.0);
    if (dims == 2) return Grid::periodic(2, 512, 1024.0);
    throw ParameterError("kernel_grid: dims must be 1 or 2");
}

inline double kernel_theory_slope(int dims, double q, const KernelDerivative& d) {
    const double lq = std::isinf(q) ? 1.0 : 1.0 - 1.0 / q;
    return -0.5 * dims * lq - (2.0 * std::min(d.tderiv, 1) + d.order()) / 2.0;
}

struct KernelNormRow {
    int n = 1;
    double q = 2.0;
    int alpha = 0;
    int tderiv = 0;
    double t = 0.0;
    double norm = 0.0;
    double fitted_slope = 0.0;
    double theory_slope = 0.0;
};

/// Default derivative cases: the kernel, one x1 derivative, one time derivative.
inline std::vector<KernelDerivative> default_kernel_cases() {
    return {KernelDerivative{{0, 0, 0}, 0}, KernelDerivative{{1, 0, 0}, 0}, KernelDerivative{{0, 0, 0}, 1}};
}

inline std::vector<double> default_kernel_times() {
    std::vector<double> ts(34);
    for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = 10.0 + 990.0 * static_cast<double>(i) / 33.0;
    return ts;
}

/// L^q norms of differentiated kernels over t with the log(1+t) slope fitted over
/// the whole sampled span.
inline std::vector<KernelNormRow> kernel_norm_table(double mu, double eps, int dims, const std::vector<double>& qs,
                                                    const std::vector<KernelDerivative>& cases,
                                                    const std::vector<double>& ts, const Grid* grid = nullptr) {
    if (ts.size() < 2) throw ParameterError("kernel_norm_table: need at least two times");
    double tmin = ts.front(), tmax = ts.front();
    for (double t : ts) {
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (!(tmin > 0.0) || tmax < 10.0 * tmin * (1.0 - 1e-12))
        throw ParameterError("kernel_norm_table: times must be positive and span a decade");
    const Grid g = grid ? *grid : kernel_grid(dims);
    if (g.dims != dims) throw ParameterError("kernel_norm_table: grid dimension mismatch");
    const GreenSymbol sym(mu, eps);

    std::vector<KernelNormRow> rows;
    for (const auto& c : cases) {
        std::vector<std::vector<double>> norms(qs.size());
        for (double t : ts) {
            const auto k = kernel_GL_full(sym, g, t, c);
            for (std::size_t iq = 0; iq < qs.size(); ++iq) norms[iq].push_back(lp_norm(k.field, qs[iq]));
        }
        for (std::size_t iq = 0; iq < qs.size(); ++iq) {
            std::vector<double> lx, ly;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                lx.push_back(std::log1p(ts[i]));
                ly.push_back(std::log(norms[iq][i]));
            }
            const double slope = linear_fit(lx, ly).slope;
            for (std::size_t i = 0; i < ts.size(); ++i)
                rows.push_back({dims, qs[iq], c.order(), c.tderiv, ts[i], norms[iq][i], slope,
                                kernel_theory_slope(dims, qs[iq], c)});
        }
    }
    return rows;
}

inline void write_kernel_norm_csv(const std::string& path, const std::vector<KernelNormRow>& rows) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << "n,q,alpha,tderiv,t,norm,fitted_slope,theory_slope\n";
    for (const auto& r : rows)
        os << r.n << ',' << (std::isinf(r.q) ? std::string("inf") : format_double(r.q)) << ',' << r.alpha << ','
           << r.tderiv << ',' << format_double(r.t) << ',' << format_double(r.norm) << ','
           << format_double(r.fitted_slope) << ',' << format_double(r.theory_slope) << '\n';
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace bepw
