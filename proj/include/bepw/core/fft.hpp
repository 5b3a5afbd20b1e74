#pragma once

#include <fftw3.h>

#include <array>
#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "bepw/core/field.hpp"
#include "bepw/core/grid.hpp"

namespace bepw::fft {

using Spectrum = std::vector<std::complex<double>>;

/// Bit set of grid axes (bit a = axis a).
using AxisMask = unsigned;

inline AxisMask periodic_axes(const Grid& g) {
    AxisMask m = 0;
    for (int a = 0; a < g.dims; ++a)
        if (g.is_periodic(a)) m |= 1u << a;
    return m;
}

inline AxisMask transverse_axes(const Grid& g) {
    AxisMask m = 0;
    for (int a = 1; a < g.dims; ++a) m |= 1u << a;
    return m;
}

inline AxisMask all_axes(const Grid& g) { return (1u << g.dims) - 1u; }

namespace detail {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const Grid& g, AxisMask mask, int sign) {
        const Key key{g.points, mask, sign};
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::vector<fftw_iodim64> dims, howmany;
        // FFTW wants the slowest axis first.
        for (int a = 2; a >= 0; --a) {
            if (g.points[a] <= 1) continue;
            fftw_iodim64 d{static_cast<ptrdiff_t>(g.points[a]), static_cast<ptrdiff_t>(g.stride(a)),
                           static_cast<ptrdiff_t>(g.stride(a))};
            ((mask >> a) & 1u ? dims : howmany).push_back(d);
        }
        std::vector<std::complex<double>> scratch(g.size());
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_guru64_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(howmany.size()),
                                              howmany.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw Error("fft: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

private:
    using Key = std::tuple<std::array<std::size_t, 3>, AxisMask, int>;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

}  // namespace detail

/// In-place unnormalised transform over the axes in `mask`; sign -1 forward, +1 backward.
inline void transform(Spectrum& data, const Grid& g, AxisMask mask, int sign) {
    if (data.size() != g.size()) throw ParameterError("fft: buffer size does not match grid");
    bool any = false;
    for (int a = 0; a < g.dims; ++a) any |= ((mask >> a) & 1u) && g.points[a] > 1;
    if (!any) return;
    fftw_plan plan = detail::PlanCache::instance().get(g, mask, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

inline Spectrum forward(const ScalarField& f, AxisMask mask) {
    Spectrum s(f.values().begin(), f.values().end());
    transform(s, f.grid(), mask, FFTW_FORWARD);
    return s;
}

/// Backward transform normalised by the transformed point count.
inline void backward(Spectrum& s, const Grid& g, AxisMask mask) {
    transform(s, g, mask, FFTW_BACKWARD);
    double count = 1.0;
    for (int a = 0; a < g.dims; ++a)
        if ((mask >> a) & 1u) count *= static_cast<double>(g.points[a]);
    const double inv = 1.0 / count;
    for (auto& c : s) c *= inv;
}

inline ScalarField real_part(const Spectrum& s, const Grid& g) {
    ScalarField out(g);
    for (std::size_t n = 0; n < s.size(); ++n) out[n] = s[n].real();
    return out;
}

inline double max_imag(const Spectrum& s) {
    double m = 0.0;
    for (const auto& c : s) m = std::max(m, std::abs(c.imag()));
    return m;
}

/// Calls f(n, xi) for every node with xi[a] the angular wavenumber of its bin on each
/// axis in `mask` (0 on other axes).
template <class F>
void for_each_mode(const Grid& g, AxisMask mask, F&& f) {
    std::array<double, 3> xi{0, 0, 0};
    for (std::size_t k = 0; k < g.points[2]; ++k) {
        xi[2] = (mask >> 2) & 1u ? g.wavenumber(2, k) : 0.0;
        for (std::size_t j = 0; j < g.points[1]; ++j) {
            xi[1] = (mask >> 1) & 1u ? g.wavenumber(1, j) : 0.0;
            for (std::size_t i = 0; i < g.points[0]; ++i) {
                xi[0] = mask & 1u ? g.wavenumber(0, i) : 0.0;
                f(g.index(i, j, k), xi);
            }
        }
    }
}

/// True if bin `b` is the Nyquist bin of axis `a`.
inline bool is_nyquist(const Grid& g, int a, std::size_t b) { return g.points[a] % 2 == 0 && b == g.points[a] / 2; }

}  // namespace bepw::fft
