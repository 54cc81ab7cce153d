#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "latsym/symplectic.hpp"

namespace latsym {

/// One generator in a symplectic word: the standard J, a shear V(P), or a
/// dilation M(L).
struct Generator {
    enum class Kind { J, V, M };
    Kind kind = Kind::J;
    Mat param;  // P for V, L for M, unused for J

    static Generator j() { return Generator{Kind::J, Mat()}; }
    static Generator v(const Mat& p) { return Generator{Kind::V, p}; }
    static Generator m(const Mat& l) { return Generator{Kind::M, l}; }
};

using Word = std::vector<Generator>;

inline Mat generator_matrix(const Generator& g, int d) {
    switch (g.kind) {
        case Generator::Kind::J:
            return standard_j_matrix(d);
        case Generator::Kind::V:
            return v_p_matrix(g.param);
        case Generator::Kind::M:
            return m_l_matrix(g.param);
    }
    throw Error("unreachable generator kind");
}

/// Product of the word's factors in the listed order (leftmost first).
inline Mat word_matrix(const Word& word, int d) {
    Mat s = Mat::Identity(2 * d, 2 * d);
    for (const Generator& g : word) s = s * generator_matrix(g, d);
    return s;
}

/// A symplectic matrix is free when its upper-right block is invertible.
inline bool is_free(const Mat& s, double tol = kTolDet) {
    if (!is_symplectic(s))
        throw NotSymplectic("freeness is defined for symplectic matrices");
    const BlockSplit blk = block_split(s);
    return std::abs(blk.b.determinant()) > tol;
}

namespace detail {

inline Mat symmetrized(const Mat& m, double tol, const char* what) {
    if (max_abs(Mat(m - m.transpose())) > tol * std::max(1.0, max_abs(m)))
        throw NotSymplectic(std::string(what) + " is not symmetric within tolerance");
    return 0.5 * (m + Mat(m.transpose()));
}

}  // namespace detail

/// Four-generator word V(-DB^(-1)) M(B^(-1)) J V(-B^(-1)A) for a free S
/// with blocks ((A, B), (C, D)).
inline Word free_factorization(const Mat& s, double tol = kTolDet) {
    if (!is_free(s, tol))
        throw NotFree("matrix has a singular upper-right block");
    const BlockSplit blk = block_split(s);
    const Mat b_inv = checked_inverse(blk.b, tol);
    const Mat p_left = detail::symmetrized(Mat(blk.d * b_inv), 1e-9, "D B^(-1)");
    const Mat p_right = detail::symmetrized(Mat(b_inv * blk.a), 1e-9, "B^(-1) A");
    return Word{Generator::v(Mat(-p_left)), Generator::m(b_inv), Generator::j(),
                Generator::v(Mat(-p_right))};
}

/// Splits any symplectic S into two free factors S = S1 S2 with
/// S1 = S V(tI) J and S2 = (V(tI) J)^(-1), scanning a fixed t grid and
/// accepting the first t that keeps the new upper-right block well away
/// from singular.
inline std::pair<Mat, Mat> two_free_factorization(const Mat& s) {
    if (!is_symplectic(s))
        throw NotSymplectic("two-free splitting is defined for symplectic matrices");
    const int d = static_cast<int>(s.rows() / 2);
    const BlockSplit blk = block_split(s);
    const double thr = 1e-6 * std::max(1.0, max_abs(s));
    const std::array<double, 9> grid{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0};
    for (const double t : grid) {
        const Mat b1 = blk.a - t * blk.b;
        if (std::abs(b1.determinant()) > thr) {
            const Mat vp = v_p_matrix(Mat(t * Mat::Identity(d, d)));
            const Mat j = standard_j_matrix(d);
            const Mat s1 = s * vp * j;
            const Mat s2 = checked_inverse(Mat(vp * j));
            return {s1, s2};
        }
    }
    throw SearchFailed("no shear in the scan grid makes the matrix free");
}

/// Generator word for an arbitrary symplectic S: the direct four-generator
/// word when S is free, otherwise the two-free split factored piecewise
/// (at most eight generators).
inline Word full_factorization(const Mat& s) {
    if (!is_symplectic(s))
        throw NotSymplectic("factorization is defined for symplectic matrices");
    const double thr = 1e-6 * std::max(1.0, max_abs(s));
    const BlockSplit blk = block_split(s);
    Word word;
    if (std::abs(blk.b.determinant()) > thr) {
        word = free_factorization(s, thr);
    } else {
        const auto [s1, s2] = two_free_factorization(s);
        word = free_factorization(s1, 1e-6 * std::max(1.0, max_abs(s1)));
        const Word tail = free_factorization(s2, 1e-6 * std::max(1.0, max_abs(s2)));
        word.insert(word.end(), tail.begin(), tail.end());
    }
    const int d = static_cast<int>(s.rows() / 2);
    const double res = max_abs(Mat(word_matrix(word, d) - s));
    if (res > 1e-8 * std::max(1.0, max_abs(s)))
        throw IllConditioned("factorization residual exceeds tolerance");
    return word;
}

/// Kernel data of the integral operator attached to a free S: the quadratic
/// phase is W(t, x) = (1/2) t^T db_inv t - x^T b_inv t + (1/2) x^T b_inv_a x
/// and the prefactor is norm = sqrt(|det B^(-1)|).
struct QuadraticFourier {
    Mat db_inv;
    Mat b_inv;
    Mat b_inv_a;
    double norm = 0.0;
};

inline QuadraticFourier quadratic_fourier(const Mat& s, double tol = kTolDet) {
    if (!is_free(s, tol))
        throw NotFree("quadratic Fourier kernel needs a free matrix");
    const BlockSplit blk = block_split(s);
    const Mat b_inv = checked_inverse(blk.b, tol);
    QuadraticFourier qf;
    qf.db_inv = detail::symmetrized(Mat(blk.d * b_inv), 1e-9, "D B^(-1)");
    qf.b_inv = b_inv;
    qf.b_inv_a = detail::symmetrized(Mat(b_inv * blk.a), 1e-9, "B^(-1) A");
    qf.norm = std::sqrt(std::abs(b_inv.determinant()));
    return qf;
}

}  // namespace latsym
