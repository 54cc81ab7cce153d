#pragma once

#include <cmath>
#include <cstdint>

#include "latsym/matrix.hpp"

namespace latsym {

/// Centered sampling grid on the cube [-extent/2, extent/2)^d with n points
/// per axis: t_j = -extent/2 + j * (extent/n). Values attached to the grid
/// are read as the periodic trigonometric interpolant through the samples.
struct Grid {
    int d = 1;
    int n = 0;
    double extent = 0.0;

    double h() const { return extent / n; }
    std::int64_t size() const {
        std::int64_t s = 1;
        for (int i = 0; i < d; ++i) s *= n;
        return s;
    }
    double coord(int j) const { return -0.5 * extent + j * h(); }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline Grid make_grid(int d, int n, double extent) {
    if (d < 1 || d > 2) throw DimensionMismatch("grids support d = 1 or 2");
    if (n < 2 || n % 2 != 0) throw GridMismatch("points per axis must be even and at least 2");
    if (!(extent > 0.0)) throw GridMismatch("extent must be positive");
    return Grid{d, n, extent};
}

inline Grid default_grid(int d) {
    return d == 1 ? make_grid(1, 512, 16.0) : make_grid(2, 48, 12.0);
}

inline bool same_grid(const Grid& a, const Grid& b) {
    return a.d == b.d && a.n == b.n && a.extent == b.extent;
}

/// Samples of a function on a grid, flattened with the first axis slowest
/// (index = j0 * n + j1 for d = 2).
struct SampledFunction {
    Grid grid;
    CVec values;
};

inline SampledFunction make_sampled(const Grid& grid) {
    return SampledFunction{grid, CVec::Zero(grid.size())};
}

inline void check_same_grid(const SampledFunction& f, const SampledFunction& g) {
    if (!same_grid(f.grid, g.grid)) throw GridMismatch("sampled functions live on different grids");
}

/// Grid point with flat index idx.
inline Vec grid_point(const Grid& g, std::int64_t idx) {
    Vec t(g.d);
    if (g.d == 1) {
        t(0) = g.coord(static_cast<int>(idx));
    } else {
        t(0) = g.coord(static_cast<int>(idx / g.n));
        t(1) = g.coord(static_cast<int>(idx % g.n));
    }
    return t;
}

/// Cell-weighted inner product, linear in the first argument and conjugate
/// linear in the second.
inline cdouble inner(const SampledFunction& f, const SampledFunction& g) {
    check_same_grid(f, g);
    const double w = std::pow(f.grid.h(), f.grid.d);
    return w * g.values.dot(f.values);
}

inline double norm(const SampledFunction& f) {
    const double w = std::pow(f.grid.h(), f.grid.d);
    return std::sqrt(w) * f.values.norm();
}

}  // namespace latsym
