#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "latsym/grid.hpp"

namespace latsym {

namespace detail {

/// O(n^2) DFT fallback for lengths without a radix-2 split; grid sizes off
/// the power-of-two ladder stay small (n <= 64), so a cached kernel matvec
/// is cheap.
inline void dft_naive(CVec& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    static std::map<std::pair<int, bool>, CMat> kernels;
    const auto key = std::make_pair(n, inverse);
    auto it = kernels.find(key);
    if (it == kernels.end()) {
        const double base = inverse ? 2.0 * std::numbers::pi / n : -2.0 * std::numbers::pi / n;
        CMat k(n, n);
        for (int r = 0; r < n; ++r)
            for (int j = 0; j < n; ++j)
                k(r, j) = cdouble(std::cos(base * j * r), std::sin(base * j * r));
        it = kernels.emplace(key, std::move(k)).first;
    }
    a = it->second * a;
    if (inverse) a /= static_cast<double>(n);
}

}  // namespace detail

/// In-place discrete Fourier transform. Forward uses the kernel
/// e^(-2 pi i jk/n); inverse conjugates and divides by n. Power-of-two
/// lengths take the radix-2 path, others a direct DFT.
inline void fft_inplace(CVec& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    if (!is_power_of_two(n)) {
        detail::dft_naive(a, inverse);
        return;
    }
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a(i), a(j));
    }
    const double base = inverse ? 2.0 * std::numbers::pi : -2.0 * std::numbers::pi;
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = base / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                const cdouble w(std::cos(ang * k), std::sin(ang * k));
                const cdouble u = a(i + k);
                const cdouble v = a(i + k + len / 2) * w;
                a(i + k) = u + v;
                a(i + k + len / 2) = u - v;
            }
        }
    }
    if (inverse) a /= static_cast<double>(n);
}

/// Centered mode number for FFT bin m of an n-point transform.
inline int centered_mode(int m, int n) { return m < n / 2 ? m : m - n; }

/// Applies fft_inplace along one axis of a flattened d-dimensional array
/// (first axis slowest).
inline void fft_axis(CVec& values, const Grid& g, int axis, bool inverse) {
    if (g.d == 1) {
        fft_inplace(values, inverse);
        return;
    }
    const int n = g.n;
    CVec line(n);
    if (axis == 1) {
        for (int j0 = 0; j0 < n; ++j0) {
            line = values.segment(static_cast<std::int64_t>(j0) * n, n);
            fft_inplace(line, inverse);
            values.segment(static_cast<std::int64_t>(j0) * n, n) = line;
        }
    } else {
        for (int j1 = 0; j1 < n; ++j1) {
            for (int j0 = 0; j0 < n; ++j0) line(j0) = values(static_cast<std::int64_t>(j0) * n + j1);
            fft_inplace(line, inverse);
            for (int j0 = 0; j0 < n; ++j0) values(static_cast<std::int64_t>(j0) * n + j1) = line(j0);
        }
    }
}

}  // namespace latsym
