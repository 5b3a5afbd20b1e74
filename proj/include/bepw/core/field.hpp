#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bepw/core/grid.hpp"
#include "bepw/error.hpp"

namespace bepw {

/// Real values on every node of a grid.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(Grid grid, double fill = 0.0) : grid_(std::move(grid)), values_(grid_.size(), fill) {}
    ScalarField(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size()) throw ParameterError("field: value count does not match grid size");
    }

    /// Samples f(x1, x2, x3) at every node.
    template <class F>
    static ScalarField sample(const Grid& g, F&& f) {
        ScalarField out(g);
        for (std::size_t k = 0; k < g.points[2]; ++k)
            for (std::size_t j = 0; j < g.points[1]; ++j)
                for (std::size_t i = 0; i < g.points[0]; ++i)
                    out.values_[g.index(i, j, k)] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
        return out;
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double>& data() noexcept { return values_; }
    const std::vector<double>& data() const noexcept { return values_; }

    double& operator[](std::size_t n) { return values_[n]; }
    double operator[](std::size_t n) const { return values_[n]; }
    double& at(std::size_t i, std::size_t j = 0, std::size_t k = 0) { return values_[grid_.index(i, j, k)]; }
    double at(std::size_t i, std::size_t j = 0, std::size_t k = 0) const { return values_[grid_.index(i, j, k)]; }

    ScalarField& operator+=(const ScalarField& o) {
        same_grid(o);
        for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        same_grid(o);
        for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
        return *this;
    }
    ScalarField& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }
    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

    /// Throws DomainError naming `op` and the first non-finite node.
    void ensure_finite(const char* op) const {
        for (std::size_t n = 0; n < values_.size(); ++n)
            if (!std::isfinite(values_[n]))
                throw DomainError(std::string(op) + ": non-finite value at node " + std::to_string(n));
    }

private:
    void same_grid(const ScalarField& o) const {
        if (!(grid_ == o.grid_)) throw ParameterError("field: grids differ");
    }

    Grid grid_;
    std::vector<double> values_;
};

/// One ScalarField per grid axis.
struct VectorField {
    std::vector<ScalarField> comp;

    VectorField() = default;
    explicit VectorField(const Grid& g) : comp(static_cast<std::size_t>(g.dims), ScalarField(g)) {}

    const Grid& grid() const { return comp.at(0).grid(); }
    int dims() const { return static_cast<int>(comp.size()); }
    ScalarField& operator[](int a) { return comp[static_cast<std::size_t>(a)]; }
    const ScalarField& operator[](int a) const { return comp[static_cast<std::size_t>(a)]; }

    /// Pointwise Euclidean magnitude.
    ScalarField magnitude() const {
        ScalarField out(grid());
        for (std::size_t n = 0; n < out.size(); ++n) {
            double s = 0.0;
            for (const auto& c : comp) s += c[n] * c[n];
            out[n] = std::sqrt(s);
        }
        return out;
    }
};

}  // namespace bepw
