#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace bepw {

/// Thomas algorithm for a constant-coefficient tridiagonal system with optional modified
/// corner diagonals: sub/super `off`, diagonal `diag` except `first`/`last` on the end rows.
/// Solves in place; `work` is scratch of the same length.
template <class T>
void solve_tridiag(double off, double diag, double first, double last, std::vector<T>& rhs, std::vector<double>& work) {
    const std::size_t n = rhs.size();
    work.resize(n);
    work[0] = off / first;
    rhs[0] /= first;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = (i + 1 == n ? last : diag) - off * work[i - 1];
        work[i] = off / d;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / d;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= work[i] * rhs[i + 1];
}

}  // namespace bepw
