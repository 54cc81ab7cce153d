#pragma once

#include <cstring>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "latsym/factorization.hpp"
#include "latsym/fft.hpp"
#include "latsym/grid.hpp"

namespace latsym {

/// A point z = (x, omega) in phase space, acting on samples as modulation
/// after translation. With symmetrized set, the extra phase e^(-pi i x.omega)
/// is included.
struct TFShift {
    Vec x;
    Vec omega;
    bool symmetrized = false;
};

inline TFShift tf_shift(const Vec& z, bool symmetrized = false) {
    if (z.size() % 2 != 0) throw DimensionMismatch("phase-space point must have even size");
    const int d = static_cast<int>(z.size() / 2);
    return TFShift{z.head(d), z.tail(d), symmetrized};
}

namespace detail {

inline void modulate_inplace(SampledFunction& f, const Vec& omega) {
    const Grid& g = f.grid;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (g.d == 1) {
        for (int j = 0; j < g.n; ++j)
            f.values(j) *= std::polar(1.0, two_pi * g.coord(j) * omega(0));
    } else {
        std::vector<cdouble> e0(g.n), e1(g.n);
        for (int j = 0; j < g.n; ++j) {
            e0[j] = std::polar(1.0, two_pi * g.coord(j) * omega(0));
            e1[j] = std::polar(1.0, two_pi * g.coord(j) * omega(1));
        }
        for (int j0 = 0; j0 < g.n; ++j0)
            for (int j1 = 0; j1 < g.n; ++j1)
                f.values(static_cast<std::int64_t>(j0) * g.n + j1) *= e0[j0] * e1[j1];
    }
}

/// Periodic translation through the interpolant: phase ramp on FFT modes.
inline void translate_inplace(SampledFunction& f, const Vec& x) {
    const Grid& g = f.grid;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int ax = 0; ax < g.d; ++ax) {
        if (x(ax) == 0.0) continue;
        fft_axis(f.values, g, ax, false);
        std::vector<cdouble> ramp(g.n);
        for (int m = 0; m < g.n; ++m)
            ramp[m] = std::polar(1.0, -two_pi * centered_mode(m, g.n) * x(ax) / g.extent);
        if (g.d == 1) {
            for (int m = 0; m < g.n; ++m) f.values(m) *= ramp[m];
        } else if (ax == 1) {
            for (int j0 = 0; j0 < g.n; ++j0)
                for (int m = 0; m < g.n; ++m)
                    f.values(static_cast<std::int64_t>(j0) * g.n + m) *= ramp[m];
        } else {
            for (int m = 0; m < g.n; ++m)
                for (int j1 = 0; j1 < g.n; ++j1)
                    f.values(static_cast<std::int64_t>(m) * g.n + j1) *= ramp[m];
        }
        fft_axis(f.values, g, ax, true);
    }
}

}  // namespace detail

inline SampledFunction apply_tf_shift(const SampledFunction& f, const TFShift& z) {
    if (z.x.size() != f.grid.d) throw DimensionMismatch("shift dimension does not match grid");
    SampledFunction out = f;
    detail::translate_inplace(out, z.x);
    detail::modulate_inplace(out, z.omega);
    if (z.symmetrized)
        out.values *= std::polar(1.0, -std::numbers::pi * z.x.dot(z.omega));
    return out;
}

inline SampledFunction conj_samples(const SampledFunction& f) {
    return SampledFunction{f.grid, f.values.conjugate()};
}

using RowMat = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense centered quadrature matrix for the Fourier generator:
/// K(k, j) = h * e^(-2 pi i x_j t_k) over one axis of the grid. On inputs
/// with Gaussian decay inside the window this reproduces the continuum
/// transform to near machine precision, which a unitary index-space DFT
/// does not (the grid is not self-dual). Alias images sit at multiples of
/// the sampling rate n/extent, so full-window accuracy needs n >= extent^2
/// per axis; coarser grids are only accurate on the central band.
inline const RowMat& fourier_quadrature(int n, double extent) {
    static std::map<std::pair<int, double>, RowMat> cache;
    const auto key = std::make_pair(n, extent);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    RowMat k(n, n);
    const double h = extent / n;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int r = 0; r < n; ++r) {
        const double t = -0.5 * extent + r * h;
        for (int c = 0; c < n; ++c) {
            const double x = -0.5 * extent + c * h;
            k(r, c) = h * std::polar(1.0, -two_pi * x * t);
        }
    }
    return cache.emplace(key, std::move(k)).first->second;
}

namespace detail {

inline SampledFunction apply_fourier(const SampledFunction& f) {
    const Grid& g = f.grid;
    const RowMat& k = fourier_quadrature(g.n, g.extent);
    SampledFunction out = make_sampled(g);
    if (g.d == 1) {
        out.values = k * f.values;
    } else {
        Eigen::Map<const RowMat> src(f.values.data(), g.n, g.n);
        Eigen::Map<RowMat> dst(out.values.data(), g.n, g.n);
        dst = k * src * k.transpose();
    }
    return out;
}

inline SampledFunction apply_chirp(const SampledFunction& f, const Mat& p) {
    const Grid& g = f.grid;
    SampledFunction out = f;
    if (g.d == 1) {
        const double c = p(0, 0);
        for (int j = 0; j < g.n; ++j) {
            const double t = g.coord(j);
            out.values(j) *= std::polar(1.0, -std::numbers::pi * c * t * t);
        }
    } else {
        for (std::int64_t idx = 0; idx < g.size(); ++idx) {
            const Vec t = grid_point(g, idx);
            out.values(idx) *= std::polar(1.0, -std::numbers::pi * t.dot(p * t));
        }
    }
    return out;
}

inline SampledFunction apply_dilation(const SampledFunction& f, const Mat& l) {
    const Grid& g = f.grid;
    Eigen::JacobiSVD<Mat> svd(l);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e6)
        throw IllConditioned("dilation parameter condition number exceeds 1e6");
    const double scale = std::sqrt(std::abs(l.determinant()));
    const std::int64_t size = g.size();
    const double h = g.h();

    // Evaluation points L t leaving the window read as zero: the samples
    // stand for a function concentrated well inside the window, and the
    // periodic wrap would instead pull in a spurious copy of the center.
    // Exact path first: L maps the grid into itself, gather samples.
    std::vector<std::int64_t> gather(size);
    bool exact = true;
    for (std::int64_t idx = 0; idx < size && exact; ++idx) {
        const Vec y = l * grid_point(g, idx);
        std::int64_t flat = 0;
        for (int ax = 0; ax < g.d; ++ax) {
            const double pos = (y(ax) + 0.5 * g.extent) / h;
            const double r = std::round(pos);
            if (std::abs(pos - r) > 1e-9) {
                exact = false;
                break;
            }
            const std::int64_t jr = static_cast<std::int64_t>(r);
            if (jr < 0 || jr >= g.n) {
                flat = -1;
                break;
            }
            if (flat >= 0) flat = flat * g.n + jr;
        }
        gather[idx] = flat;
    }
    SampledFunction out = make_sampled(g);
    if (exact) {
        for (std::int64_t idx = 0; idx < size; ++idx)
            if (gather[idx] >= 0) out.values(idx) = scale * f.values(gather[idx]);
        return out;
    }

    // General path: evaluate the trigonometric interpolant at L t. The
    // centered-coordinate mode coefficients carry a (-1)^mode twist
    // relative to raw FFT bins because the window starts at -extent/2.
    CVec modes = f.values;
    for (int ax = 0; ax < g.d; ++ax) fft_axis(modes, g, ax, false);
    modes /= static_cast<double>(size);
    if (g.d == 1) {
        for (int m = 1; m < g.n; m += 2) modes(m) = -modes(m);
    } else {
        for (int m0 = 0; m0 < g.n; ++m0)
            for (int m1 = 0; m1 < g.n; ++m1)
                if ((m0 + m1) % 2 == 1)
                    modes(static_cast<std::int64_t>(m0) * g.n + m1) =
                        -modes(static_cast<std::int64_t>(m0) * g.n + m1);
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double lo = -0.5 * g.extent, hi = 0.5 * g.extent;
    if (g.d == 1) {
        for (int k = 0; k < g.n; ++k) {
            const double y = l(0, 0) * g.coord(k);
            if (y < lo || y >= hi) continue;
            cdouble acc = 0.0;
            for (int m = 0; m < g.n; ++m) {
                const int mm = centered_mode(m, g.n);
                acc += modes(m) * std::polar(1.0, two_pi * mm * y / g.extent);
            }
            out.values(k) = scale * acc;
        }
    } else {
        const int n = g.n;
        std::vector<cdouble> w0(n), w1(n);
        for (std::int64_t idx = 0; idx < size; ++idx) {
            const Vec y = l * grid_point(g, idx);
            if (y(0) < lo || y(0) >= hi || y(1) < lo || y(1) >= hi) continue;
            for (int m = 0; m < n; ++m) {
                const int mm = centered_mode(m, n);
                w0[m] = std::polar(1.0, two_pi * mm * y(0) / g.extent);
                w1[m] = std::polar(1.0, two_pi * mm * y(1) / g.extent);
            }
            cdouble acc = 0.0;
            for (int m0 = 0; m0 < n; ++m0) {
                cdouble row = 0.0;
                const std::int64_t base = static_cast<std::int64_t>(m0) * n;
                for (int m1 = 0; m1 < n; ++m1) row += modes(base + m1) * w1[m1];
                acc += row * w0[m0];
            }
            out.values(idx) = scale * acc;
        }
    }
    return out;
}

}  // namespace detail

/// Unitary attached to one generator: V(P) multiplies by the chirp
/// e^(-pi i t.Pt), J is the Fourier quadrature, M(L) maps f to
/// sqrt|det L| f(L t) through the interpolant (exact index gather when L
/// maps the grid to itself).
inline SampledFunction apply_generator(const SampledFunction& f, const Generator& gen) {
    const int d = f.grid.d;
    switch (gen.kind) {
        case Generator::Kind::J:
            return detail::apply_fourier(f);
        case Generator::Kind::V:
            if (gen.param.rows() != d) throw GridMismatch("shear dimension does not match grid");
            return detail::apply_chirp(f, gen.param);
        case Generator::Kind::M:
            if (gen.param.rows() != d) throw GridMismatch("dilation dimension does not match grid");
            return detail::apply_dilation(f, gen.param);
    }
    throw Error("unreachable generator kind");
}

/// Applies the unitary of a word: the word lists matrix factors left to
/// right, so operators act right to left on the samples.
inline SampledFunction apply_word(const SampledFunction& f, const Word& word) {
    SampledFunction out = f;
    for (auto it = word.rbegin(); it != word.rend(); ++it) out = apply_generator(out, *it);
    return out;
}

/// Dense quadrature application of the integral operator attached to a free
/// matrix: out(t) = norm * h^d * sum_x f(x) e^(2 pi i W(t, x)).
inline SampledFunction apply_quadratic_fourier(const SampledFunction& f,
                                               const QuadraticFourier& qf) {
    const Grid& g = f.grid;
    if ((g.d == 1 && g.n > 2048) || (g.d == 2 && g.n > 64))
        throw TooLarge("dense quadrature grid exceeds the supported size");
    if (qf.b_inv.rows() != g.d) throw GridMismatch("kernel dimension does not match grid");
    const std::int64_t size = g.size();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    CVec fx(size);
    for (std::int64_t j = 0; j < size; ++j) {
        const Vec x = grid_point(g, j);
        fx(j) = f.values(j) * std::polar(1.0, std::numbers::pi * x.dot(qf.b_inv_a * x));
    }
    const double weight = qf.norm * std::pow(g.h(), g.d);
    SampledFunction out = make_sampled(g);
    if (g.d == 1) {
        for (int k = 0; k < g.n; ++k) {
            const double t = g.coord(k);
            const double ct = 0.5 * qf.db_inv(0, 0) * t * t;
            const double u = qf.b_inv(0, 0) * t;
            cdouble acc = 0.0;
            for (int j = 0; j < g.n; ++j)
                acc += fx(j) * std::polar(1.0, -two_pi * g.coord(j) * u);
            out.values(k) = weight * std::polar(1.0, two_pi * ct) * acc;
        }
    } else {
        const int n = g.n;
        std::vector<cdouble> a0(n), a1(n);
        for (std::int64_t k = 0; k < size; ++k) {
            const Vec t = grid_point(g, k);
            const double ct = 0.5 * t.dot(qf.db_inv * t);
            const Vec u = qf.b_inv * t;
            for (int j = 0; j < n; ++j) {
                const double x = g.coord(j);
                a0[j] = std::polar(1.0, -two_pi * x * u(0));
                a1[j] = std::polar(1.0, -two_pi * x * u(1));
            }
            cdouble acc = 0.0;
            for (int j0 = 0; j0 < n; ++j0) {
                cdouble row = 0.0;
                const std::int64_t base = static_cast<std::int64_t>(j0) * n;
                for (int j1 = 0; j1 < n; ++j1) row += fx(base + j1) * a1[j1];
                acc += row * a0[j0];
            }
            out.values(k) = weight * std::polar(1.0, two_pi * ct) * acc;
        }
    }
    return out;
}

/// Max over the probe points z of |U rho(z) f - rho(Sz) U f| / |f|, with U
/// realized through the generator word of S.
inline double rho_relatedness_residual(const Mat& s, const SampledFunction& f,
                                       const std::vector<Vec>& zs) {
    const Word word = full_factorization(s);
    const SampledFunction uf = apply_word(f, word);
    const double nf = norm(f);
    if (nf == 0.0) throw ZeroEntry("residual is undefined for the zero function");
    double worst = 0.0;
    for (const Vec& z : zs) {
        const SampledFunction lhs = apply_word(apply_tf_shift(f, tf_shift(z, true)), word);
        const SampledFunction rhs = apply_tf_shift(uf, tf_shift(Vec(s * z), true));
        worst = std::max(worst, norm(SampledFunction{f.grid, lhs.values - rhs.values}) / nf);
    }
    return worst;
}

/// |pi(Rz) conj(f) - conj(pi(z) f)| / |f| with R = diag(I, -I).
inline double conjugation_symmetry_residual(const SampledFunction& f, const Vec& z) {
    const int d = f.grid.d;
    if (z.size() != 2 * d) throw DimensionMismatch("phase-space point size mismatch");
    Vec rz = z;
    rz.tail(d) = -z.tail(d);
    const SampledFunction lhs = apply_tf_shift(conj_samples(f), tf_shift(rz));
    const SampledFunction rhs = conj_samples(apply_tf_shift(f, tf_shift(z)));
    const double nf = norm(f);
    if (nf == 0.0) throw ZeroEntry("residual is undefined for the zero function");
    return norm(SampledFunction{f.grid, lhs.values - rhs.values}) / nf;
}

}  // namespace latsym
