#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "latsym/matrix.hpp"
#include "latsym/rng.hpp"

namespace latsym {

/// The standard form J = ((0, I), (-I, 0)) on R^(2d).
inline Mat standard_j_matrix(int d) {
    if (d < 1) throw DimensionMismatch("dimension must be positive");
    Mat j = Mat::Zero(2 * d, 2 * d);
    j.block(0, d, d, d) = Mat::Identity(d, d);
    j.block(d, 0, d, d) = -Mat::Identity(d, d);
    return j;
}

inline SymplecticForm standard_j(int d) {
    return SymplecticForm{d, standard_j_matrix(d)};
}

/// Symplectic form induced by a lattice matrix: theta = A^T J A.
/// Entry (i, j) is the symplectic pairing of columns i and j of A.
inline SymplecticForm symplectic_form_of(const LatticeMatrix& a) {
    Mat theta = a.m.transpose() * standard_j_matrix(a.d) * a.m;
    theta = 0.5 * (theta - Mat(theta.transpose()));
    return SymplecticForm{a.d, theta};
}

/// Max-norm of S^T J S - J; zero exactly when S is symplectic.
inline double symplectic_residual(const Mat& s) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0)
        throw DimensionMismatch("symplectic candidate must be square of even size");
    const int d = static_cast<int>(s.rows() / 2);
    const Mat j = standard_j_matrix(d);
    return max_abs(Mat(s.transpose() * j * s - j));
}

inline bool is_symplectic(const Mat& s, double tol = kTolSym) {
    return symplectic_residual(s) <= tol * std::max(1.0, max_abs(s));
}

namespace detail {

inline double pfaffian_expand(const Mat& theta, std::vector<int>& idx) {
    const std::size_t n = idx.size();
    if (n == 0) return 1.0;
    const int first = idx[0];
    double acc = 0.0;
    double sign = 1.0;
    for (std::size_t p = 1; p < n; ++p) {
        const int other = idx[p];
        const double entry = theta(first, other);
        if (entry != 0.0) {
            std::vector<int> rest;
            rest.reserve(n - 2);
            for (std::size_t q = 1; q < n; ++q)
                if (q != p) rest.push_back(idx[q]);
            acc += sign * entry * pfaffian_expand(theta, rest);
        }
        sign = -sign;
    }
    return acc;
}

}  // namespace detail

/// Pfaffian by recursive expansion into perfect matchings along the first
/// remaining row. Supported up to 8 x 8 (d <= 4).
inline double pfaffian(const SymplecticForm& form) {
    if (form.d > 4)
        throw TooLarge("pfaffian expansion supported only for d <= 4");
    std::vector<int> idx(2 * form.d);
    for (int i = 0; i < 2 * form.d; ++i) idx[i] = i;
    return detail::pfaffian_expand(form.theta, idx);
}

/// Covolume |det A| of the lattice A Z^(2d).
inline double covolume(const LatticeMatrix& a) {
    return std::abs(a.m.determinant());
}

/// Adjoint lattice matrix -J A^(-T).
inline LatticeMatrix adjoint_matrix(const LatticeMatrix& a) {
    const Mat inv_t = checked_inverse(a.m).transpose();
    return LatticeMatrix{a.d, Mat(-standard_j_matrix(a.d) * inv_t)};
}

/// The induced involution on forms, theta -> -theta^(-1).
inline SymplecticForm adjoint_form_involution(const SymplecticForm& form) {
    Mat inv = checked_inverse(form.theta);
    inv = -inv;
    inv = 0.5 * (inv - Mat(inv.transpose()));
    return SymplecticForm{form.d, inv};
}

/// True when A and B generate the same lattice: A^(-1) B is integral with
/// |det| = 1 within tol.
inline bool same_lattice(const LatticeMatrix& a, const LatticeMatrix& b,
                         double tol = kTolDet) {
    if (a.d != b.d) throw DimensionMismatch("lattice dimensions differ");
    const Mat m = checked_inverse(a.m) * b.m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::round(m(i, j))) > tol) return false;
    return std::abs(std::abs(m.determinant()) - 1.0) <= tol;
}

/// If A and B induce the same form, returns the symplectic S = B A^(-1)
/// (so S maps A onto B); otherwise nullopt.
inline std::optional<Mat> symplectically_related(const LatticeMatrix& a,
                                                 const LatticeMatrix& b,
                                                 double tol = kTolSym) {
    if (a.d != b.d) throw DimensionMismatch("lattice dimensions differ");
    const Mat ta = symplectic_form_of(a).theta;
    const Mat tb = symplectic_form_of(b).theta;
    const double scale = std::max({1.0, max_abs(ta), max_abs(tb)});
    if (max_abs(Mat(ta - tb)) > tol * scale) return std::nullopt;
    return Mat(b.m * checked_inverse(a.m));
}

/// Shear generator V_P = ((I, 0), (-P, I)) for symmetric P.
inline Mat v_p_matrix(const Mat& p, double tol = kTolSym) {
    if (p.rows() != p.cols())
        throw DimensionMismatch("shear parameter must be square");
    if (max_abs(Mat(p - p.transpose())) > tol * std::max(1.0, max_abs(p)))
        throw NotSymplectic("shear parameter must be symmetric");
    const int d = static_cast<int>(p.rows());
    Mat v = Mat::Identity(2 * d, 2 * d);
    v.block(d, 0, d, d) = -p;
    return v;
}

/// Dilation generator M_L = ((L^(-1), 0), (0, L^T)) for invertible L.
inline Mat m_l_matrix(const Mat& l, double tol = kTolDet) {
    if (l.rows() != l.cols())
        throw DimensionMismatch("dilation parameter must be square");
    const int d = static_cast<int>(l.rows());
    Mat m = Mat::Zero(2 * d, 2 * d);
    m.block(0, 0, d, d) = checked_inverse(l, tol);
    m.block(d, d, d, d) = l.transpose();
    return m;
}

/// Seeded random product of word_length generators (J, shears, dilations).
/// Shear and dilation entries are uniform in [-2, 2]; dilation determinants
/// are kept in [0.2, 5] by rejection. word_length = 0 gives the identity.
inline Mat random_symplectic(int d, std::uint64_t seed, int word_length) {
    if (d < 1) throw DimensionMismatch("dimension must be positive");
    if (word_length < 0) throw DimensionMismatch("word length must be >= 0");
    Rng rng(seed);
    Mat s = Mat::Identity(2 * d, 2 * d);
    for (int w = 0; w < word_length; ++w) {
        const int kind = rng.uniform_int(3);
        if (kind == 0) {
            s = s * standard_j_matrix(d);
        } else if (kind == 1) {
            Mat p(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) p(i, j) = p(j, i) = rng.uniform(-2.0, 2.0);
            s = s * v_p_matrix(p);
        } else {
            Mat l(d, d);
            while (true) {
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) l(i, j) = rng.uniform(-2.0, 2.0);
                const double det = std::abs(l.determinant());
                if (det >= 0.2 && det <= 5.0) break;
            }
            s = s * m_l_matrix(l);
        }
    }
    return s;
}

/// Quadrant blocks of an even-sized square matrix, S = ((a, b), (c, d)).
struct BlockSplit {
    Mat a, b, c, d;
};

inline BlockSplit block_split(const Mat& s) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0)
        throw DimensionMismatch("block split needs a square matrix of even size");
    const int d = static_cast<int>(s.rows() / 2);
    return BlockSplit{s.block(0, 0, d, d), s.block(0, d, d, d),
                      s.block(d, 0, d, d), s.block(d, d, d, d)};
}

inline Mat block_assemble(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    const int n = static_cast<int>(a.rows());
    Mat s(2 * n, 2 * n);
    s.block(0, 0, n, n) = a;
    s.block(0, n, n, n) = b;
    s.block(n, 0, n, n) = c;
    s.block(n, n, n, n) = d;
    return s;
}

inline Mat block_assemble(const BlockSplit& parts) {
    return block_assemble(parts.a, parts.b, parts.c, parts.d);
}

}  // namespace latsym
