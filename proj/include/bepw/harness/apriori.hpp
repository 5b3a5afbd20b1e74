#pragma once

#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "bepw/error.hpp"
#include "bepw/hydro/run.hpp"

namespace bepw {

struct AprioriDiagnostic {
    double t = 0.0;
    double M_value = 0.0;
    std::string dominant;  ///< term attaining the supremum, e.g. "Vp p=2 a=0"
};

/// Running supremum over s <= t and over the V/U norm series present (p in {2, inf},
/// |alpha| <= 2) of (1+s)^{n/2(1-1/p)+(|alpha|+1)/2} ||d^alpha V|| and the U analogue with +2.
inline std::vector<AprioriDiagnostic> apriori_functional(const std::vector<SeriesRow>& rows, int n) {
    if (n < 1 || n > 3) throw ParameterError("apriori_functional: n must be 1, 2 or 3");
    using Key = std::tuple<std::string, double, int>;
    std::map<double, std::map<Key, double>> by_time;
    for (const auto& r : rows) {
        const bool v = r.quantity == "Vp" || r.quantity == "Vm";
        const bool u = r.quantity == "Up" || r.quantity == "Um";
        if (!(v || u) || !(r.p == 2.0 || std::isinf(r.p)) || r.alpha > 2) continue;
        by_time[r.t][{r.quantity, r.p, r.alpha}] = r.value;
    }
    for (const char* need : {"Vp", "Vm", "Up", "Um"}) {
        bool found = false;
        for (const auto& [t, m] : by_time) found = found || m.count({need, 2.0, 0});
        if (!found) throw ParameterError(std::string("apriori_functional: missing series ") + need + " (p = 2, alpha = 0)");
    }
    std::vector<AprioriDiagnostic> out;
    double sup = 0.0;
    std::string dom;
    for (const auto& [t, m] : by_time) {
        for (const auto& [key, value] : m) {
            const auto& [q, p, a] = key;
            const double lp = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
            const double shift = q[0] == 'V' ? 1.0 : 2.0;
            const double w = std::pow(1.0 + t, 0.5 * n * lp + (a + shift) / 2.0) * value;
            if (w > sup) {
                sup = w;
                dom = q + " p=" + format_p(p) + " a=" + std::to_string(a);
            }
        }
        out.push_back({t, sup, dom});
    }
    return out;
}

}  // namespace bepw
