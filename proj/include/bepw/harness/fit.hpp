#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bepw/core/lsq.hpp"
#include "bepw/error.hpp"

namespace bepw {

struct DecayFit {
    std::vector<double> times;
    std::vector<double> norms;
    std::array<double, 2> window{0.0, 0.0};
    double fitted_exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double stderr_exponent = 0.0;
    std::size_t samples = 0;
    std::optional<double> theory_exponent;
};

/// Least-squares slope of log(norm) against log(1 + t) on the closed window.
inline DecayFit fit_exponent(std::span<const double> times, std::span<const double> norms, std::array<double, 2> window) {
    if (times.size() != norms.size()) throw ParameterError("fit_exponent: times and norms differ in length");
    if (!(window[0] < window[1])) throw ParameterError("fit_exponent: window must satisfy lo < hi");
    DecayFit f;
    f.times.assign(times.begin(), times.end());
    f.norms.assign(norms.begin(), norms.end());
    f.window = window;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window[0] || times[i] > window[1]) continue;
        if (!(norms[i] > 0.0) || !std::isfinite(norms[i]))
            throw ParameterError("fit_exponent: non-positive norm " + std::to_string(norms[i]) + " at t = " +
                                 std::to_string(times[i]));
        lx.push_back(std::log1p(times[i]));
        ly.push_back(std::log(norms[i]));
    }
    if (lx.size() < 8)
        throw ParameterError("fit_exponent: insufficient samples in window [" + std::to_string(window[0]) + ", " +
                             std::to_string(window[1]) + "]: " + std::to_string(lx.size()) + " < 8");
    const auto lf = linear_fit(lx, ly);
    f.fitted_exponent = lf.slope;
    f.intercept = lf.intercept;
    f.r_squared = lf.r_squared;
    f.stderr_exponent = lf.slope_stderr;
    f.samples = lx.size();
    return f;
}

inline DecayFit fit_exponent(const std::vector<std::pair<double, double>>& series, std::array<double, 2> window) {
    std::vector<double> t, v;
    for (const auto& [a, b] : series) {
        t.push_back(a);
        v.push_back(b);
    }
    return fit_exponent(t, v, window);
}

/// Default fit window [t_end / 8, t_end].
inline std::array<double, 2> default_window(double t_end) { return {t_end / 8.0, t_end}; }

/// Exponential-versus-algebraic test: the log-log slope keeps steepening for e^{-beta t}.
struct WindowGrowth {
    double early_slope = 0.0;
    double late_slope = 0.0;
    bool exponential = false;  ///< |late| > factor |early|
};

inline WindowGrowth window_growth(const std::vector<std::pair<double, double>>& series, std::array<double, 2> early,
                                  std::array<double, 2> late, double factor = 2.0) {
    WindowGrowth w;
    w.early_slope = fit_exponent(series, early).fitted_exponent;
    w.late_slope = fit_exponent(series, late).fitted_exponent;
    w.exponential = std::abs(w.late_slope) > factor * std::abs(w.early_slope);
    return w;
}

}  // namespace bepw
