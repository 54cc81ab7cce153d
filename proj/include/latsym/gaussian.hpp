#pragma once

#include <cmath>

#include "latsym/grid.hpp"
#include "latsym/symplectic.hpp"

namespace latsym {

/// Unit-norm standard Gaussian 2^(d/4) e^(-pi |t|^2) sampled on the grid.
inline SampledFunction standard_gaussian(const Grid& g) {
    SampledFunction f = make_sampled(g);
    const double amp = std::pow(2.0, 0.25 * g.d);
    for (std::int64_t idx = 0; idx < g.size(); ++idx) {
        const Vec t = grid_point(g, idx);
        f.values(idx) = amp * std::exp(-std::numbers::pi * t.squaredNorm());
    }
    return f;
}

/// Square root of a symmetric positive definite matrix through its
/// eigendecomposition. Eigenvalues at or below the floor reject the input.
inline Mat spd_sqrt(const Mat& m, double floor = 1e-12) {
    if (m.rows() != m.cols()) throw DimensionMismatch("square matrix required");
    if (max_abs(Mat(m - m.transpose())) > 1e-9 * std::max(1.0, max_abs(m)))
        throw NotPositiveDefinite("matrix is not symmetric within tolerance");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + Mat(m.transpose())));
    if (es.info() != Eigen::Success)
        throw NotPositiveDefinite("eigendecomposition failed");
    const Vec ev = es.eigenvalues();
    if (ev.minCoeff() <= floor)
        throw NotPositiveDefinite("matrix has an eigenvalue at or below the floor");
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

/// Chirped Gaussian parameters: the atom is
/// 2^(d/4) (det X)^(1/4) e^(-pi t.(X + iY)t) with X SPD and Y symmetric.
struct GaussianAtom {
    Mat x;
    Mat y;
};

inline GaussianAtom make_gaussian_atom(const Mat& x, const Mat& y) {
    spd_sqrt(x);  // validates symmetry and positivity
    if (y.rows() != x.rows() || y.cols() != x.cols())
        throw DimensionMismatch("atom parameter sizes differ");
    if (max_abs(Mat(y - y.transpose())) > 1e-9 * std::max(1.0, max_abs(y)))
        throw NotPositiveDefinite("imaginary part must be symmetric");
    return GaussianAtom{x, y};
}

/// Direct evaluation of the chirped Gaussian on the grid.
inline SampledFunction gaussian_atom_samples(const GaussianAtom& atom, const Grid& g) {
    if (atom.x.rows() != g.d) throw GridMismatch("atom dimension does not match grid");
    SampledFunction f = make_sampled(g);
    const double amp = std::pow(2.0, 0.25 * g.d) *
                       std::pow(atom.x.determinant(), 0.25);
    for (std::int64_t idx = 0; idx < g.size(); ++idx) {
        const Vec t = grid_point(g, idx);
        const double re = t.dot(atom.x * t);
        const double im = t.dot(atom.y * t);
        f.values(idx) = amp * std::exp(-std::numbers::pi * re) *
                        std::polar(1.0, -std::numbers::pi * im);
    }
    return f;
}

/// The symplectic matrix V(Y) M(X^(1/2)) whose metaplectic action carries
/// the standard Gaussian onto the atom with parameters (X, Y).
inline Mat frame_set_transform(const GaussianAtom& atom) {
    const int d = static_cast<int>(atom.x.rows());
    const Mat sqrt_x = spd_sqrt(atom.x);
    const Mat inv_sqrt_x = checked_inverse(sqrt_x);
    Mat s = Mat::Zero(2 * d, 2 * d);
    s.block(0, 0, d, d) = inv_sqrt_x;
    s.block(d, 0, d, d) = -atom.y * inv_sqrt_x;
    s.block(d, d, d, d) = sqrt_x;
    return s;
}

/// Shear-dilation-rotation splitting S = V(Y) M(X^(1/2)) O with O both
/// symplectic and orthogonal.
struct PreIwasawa {
    Mat x;
    Mat y;
    Mat p;
    Mat q;
    Mat o;
};

inline PreIwasawa pre_iwasawa(const Mat& s) {
    if (!is_symplectic(s))
        throw NotSymplectic("pre-Iwasawa splitting needs a symplectic matrix");
    const BlockSplit blk = block_split(s);
    const int d = static_cast<int>(blk.a.rows());
    Mat m = blk.a * blk.a.transpose() + blk.b * blk.b.transpose();
    m = 0.5 * (m + Mat(m.transpose()));
    const Mat x = checked_inverse(m);
    Mat y = -(blk.c * blk.a.transpose() + blk.d * blk.b.transpose()) * x;
    y = 0.5 * (y + Mat(y.transpose()));
    const Mat sqrt_x = spd_sqrt(Mat(0.5 * (x + Mat(x.transpose()))));
    const Mat p = sqrt_x * blk.a;
    const Mat q = sqrt_x * blk.b;
    Mat o(2 * d, 2 * d);
    o.block(0, 0, d, d) = p;
    o.block(0, d, d, d) = q;
    o.block(d, 0, d, d) = -q;
    o.block(d, d, d, d) = p;
    return PreIwasawa{0.5 * (x + Mat(x.transpose())), y, p, q, o};
}

/// Frame-set data for a lattice whose form is ((0, K), (-K, 0)) with K
/// diagonal, under the diagonal window parameter D.
struct GaussianFrameParams {
    Mat x;
    Mat y;
    Vec k;
    bool is_frame = false;
};

/// Strict product criterion: every |k_j| must be below one.
inline bool lsw_criterion(const Vec& k) {
    for (int i = 0; i < k.size(); ++i)
        if (k(i) == 0.0) throw ZeroEntry("criterion is undefined for a zero entry");
    return (k.cwiseAbs().array() < 1.0).all();
}

inline GaussianFrameParams gaussian_frame_params(const LatticeMatrix& a,
                                                 const Vec& d_diag,
                                                 double tol = kTolSym) {
    const int d = a.d;
    if (d_diag.size() != d) throw DimensionMismatch("window parameter size mismatch");
    const Mat theta = symplectic_form_of(a).theta;
    const double scale = std::max(1.0, max_abs(theta));
    const Mat k_block = theta.block(0, d, d, d);
    Mat offdiag = theta;
    offdiag.block(0, d, d, d).setZero();
    offdiag.block(d, 0, d, d).setZero();
    if (max_abs(offdiag) > tol * scale)
        throw NotDiagonalK("form does not have vanishing diagonal blocks");
    Mat k_off = k_block;
    k_off.diagonal().setZero();
    if (max_abs(k_off) > tol * scale)
        throw NotDiagonalK("form block K is not diagonal within tolerance");
    Vec k = k_block.diagonal();
    for (int i = 0; i < d; ++i) {
        if (d_diag(i) == 0.0) throw ZeroEntry("window parameter has a zero entry");
        if (k(i) == 0.0) throw ZeroEntry("form block K has a zero diagonal entry");
    }

    const Mat a11 = a.m.block(0, 0, d, d);
    const Mat a12 = a.m.block(0, d, d, d);
    const Mat a21 = a.m.block(d, 0, d, d);
    const Mat a22 = a.m.block(d, d, d, d);
    const Vec d2 = d_diag.cwiseProduct(d_diag);
    const Vec dk_inv2 = d_diag.cwiseProduct(k).cwiseInverse().cwiseAbs2();
    Mat m = a11 * d2.asDiagonal() * a11.transpose() +
            a12 * dk_inv2.asDiagonal() * a12.transpose();
    m = 0.5 * (m + Mat(m.transpose()));
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0 ||
        es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() > 1e12)
        throw IllConditioned("window normal matrix is numerically singular");
    const Mat x = checked_inverse(m);
    Mat y = -(a21 * d2.asDiagonal() * a11.transpose() +
              a22 * dk_inv2.asDiagonal() * a12.transpose()) *
            x;
    GaussianFrameParams out;
    out.x = 0.5 * (x + Mat(x.transpose()));
    out.y = y;
    out.k = k;
    out.is_frame = lsw_criterion(k);
    return out;
}

}  // namespace latsym
