#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "latsym/errors.hpp"

namespace latsym {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cdouble = std::complex<double>;

inline constexpr double kTolSym = 1e-9;
inline constexpr double kTolDet = 1e-9;

inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const CMat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Inverse with an explicit singularity check (relative pivot threshold).
inline Mat checked_inverse(const Mat& m, double tol = kTolDet) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("inverse of a non-square matrix");
    Eigen::FullPivLU<Mat> lu(m);
    lu.setThreshold(tol);
    if (!lu.isInvertible())
        throw NonInvertible("matrix is singular within tolerance");
    return lu.inverse();
}

/// A lattice generating matrix: invertible, size 2d x 2d.
struct LatticeMatrix {
    int d = 0;
    Mat m;
};

inline LatticeMatrix make_lattice_matrix(int d, const Mat& m, double tol = kTolDet) {
    if (d < 1) throw DimensionMismatch("dimension must be positive");
    if (m.rows() != 2 * d || m.cols() != 2 * d)
        throw DimensionMismatch("lattice matrix must be 2d x 2d");
    Eigen::FullPivLU<Mat> lu(m);
    lu.setThreshold(tol);
    if (!lu.isInvertible())
        throw NonInvertible("lattice matrix is singular within tolerance");
    return LatticeMatrix{d, m};
}

inline LatticeMatrix make_lattice_matrix(const Mat& m, double tol = kTolDet) {
    if (m.rows() % 2 != 0)
        throw DimensionMismatch("lattice matrix must have even size");
    return make_lattice_matrix(static_cast<int>(m.rows() / 2), m, tol);
}

/// An antisymmetric invertible 2d x 2d form.
struct SymplecticForm {
    int d = 0;
    Mat theta;
};

inline SymplecticForm make_symplectic_form(const Mat& theta, double tol = kTolSym) {
    if (theta.rows() != theta.cols() || theta.rows() % 2 != 0)
        throw DimensionMismatch("form must be square of even size");
    const double scale = std::max(1.0, max_abs(theta));
    if (max_abs(Mat(theta + theta.transpose())) > tol * scale)
        throw NotAntisymmetric("form is not antisymmetric within tolerance");
    Eigen::FullPivLU<Mat> lu(theta);
    lu.setThreshold(tol);
    if (!lu.isInvertible())
        throw NonInvertible("form is degenerate within tolerance");
    return SymplecticForm{static_cast<int>(theta.rows() / 2), theta};
}

}  // namespace latsym
