#pragma once

#include <cmath>
#include <string>

#include "bepw/error.hpp"

namespace bepw {

enum class Quantity { V, U, K, V1d, U1d };

inline Quantity parse_quantity(const std::string& s) {
    if (s == "V") return Quantity::V;
    if (s == "U") return Quantity::U;
    if (s == "K") return Quantity::K;
    if (s == "V1d") return Quantity::V1d;
    if (s == "U1d") return Quantity::U1d;
    throw ParameterError("unknown quantity '" + s + "' (expected V, U, K, V1d or U1d)");
}

inline std::string quantity_name(Quantity q) {
    switch (q) {
        case Quantity::V: return "V";
        case Quantity::U: return "U";
        case Quantity::K: return "K";
        case Quantity::V1d: return "V1d";
        case Quantity::U1d: return "U1d";
    }
    return "?";
}

/// Predicted decay exponent of ||d^alpha q||_{L^p} in dimension n for regularity index k.
/// V, U, K follow the multi-D theorem (|alpha| <= k - 2, and |alpha| = k - 1 for K);
/// V1d, U1d the one-dimensional one (alpha <= k + 1 for p = 2, <= k for p = inf, with m = k).
inline double theory_exponent(Quantity q, int n, double p, int alpha, int k = 4) {
    if (n < 1 || n > 3) throw ParameterError("theory_exponent: n must be 1, 2 or 3");
    if (!(p >= 2.0)) throw ParameterError("theory_exponent: p must lie in [2, inf]");
    if (alpha < 0) throw ParameterError("theory_exponent: alpha_order must be nonnegative");
    const double lp = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
    const auto range = [&](int hi) {
        if (alpha > hi)
            throw ParameterError("theory_exponent: alpha_order " + std::to_string(alpha) + " exceeds " +
                                 std::to_string(hi) + " for " + quantity_name(q));
    };
    switch (q) {
        case Quantity::V: range(k - 2); return -0.5 * n * lp - (alpha + 1) / 2.0;
        case Quantity::U: range(k - 2); return -0.5 * n * lp - (alpha + 2) / 2.0;
        case Quantity::K:
            if (p != 2.0) throw ParameterError("theory_exponent: K rates are stated for p = 2 only");
            range(k - 1);
            return alpha == k - 1 ? -1.25 * n - 1.0 - k / 2.0 : -1.25 * n - 2.0 - alpha / 2.0;
        case Quantity::V1d:
        case Quantity::U1d:
            if (n != 1) throw ParameterError("theory_exponent: V1d/U1d need n = 1");
            range(std::isinf(p) ? k : k + 1);
            return -0.5 * lp - (alpha + (q == Quantity::V1d ? 1 : 2)) / 2.0;
    }
    throw ParameterError("theory_exponent: unsupported quantity");
}

}  // namespace bepw
