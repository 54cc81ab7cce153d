#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "latsym/gaussian.hpp"
#include "latsym/symplectic.hpp"

namespace latsym {

/// If both diagonal d x d blocks of the form vanish within tol, returns the
/// upper-right block K (invertible whenever the form is); otherwise nullopt.
inline std::optional<Mat> separable_form_check(const SymplecticForm& form,
                                               double tol = kTolSym) {
    const int d = form.d;
    const double scale = std::max(1.0, max_abs(form.theta));
    if (max_abs(Mat(form.theta.block(0, 0, d, d))) > tol * scale) return std::nullopt;
    if (max_abs(Mat(form.theta.block(d, d, d, d))) > tol * scale) return std::nullopt;
    return Mat(form.theta.block(0, d, d, d));
}

/// Splitting A = S B of a separable-form lattice, with B = ((I, 0), (0, K))
/// and S symplectic.
struct SeparableReduction {
    Mat k;
    Mat b;
    Mat s;
};

inline SeparableReduction separable_reduction(const LatticeMatrix& a,
                                              double tol = kTolSym) {
    const auto k = separable_form_check(symplectic_form_of(a), tol);
    if (!k) throw NotSeparable("form does not have vanishing diagonal blocks");
    const int d = a.d;
    Mat b = Mat::Identity(2 * d, 2 * d);
    b.block(d, d, d, d) = *k;
    const Mat k_inv = checked_inverse(*k);
    Mat s(2 * d, 2 * d);
    s.block(0, 0, d, d) = a.m.block(0, 0, d, d);
    s.block(0, d, d, d) = a.m.block(0, d, d, d) * k_inv;
    s.block(d, 0, d, d) = a.m.block(d, 0, d, d);
    s.block(d, d, d, d) = a.m.block(d, d, d, d) * k_inv;
    return SeparableReduction{*k, b, s};
}

/// Column indices (0-based) of a partition into two null d-subsets.
struct LagrangianSplit {
    std::vector<int> left;
    std::vector<int> right;
};

/// First partition, in lexicographic subset order, of the lattice matrix
/// columns into two d-sets on which the induced form vanishes. Any d columns
/// of an invertible matrix are independent, so nullity is the only
/// condition. Supported up to d = 4.
inline std::optional<LagrangianSplit> lagrangian_split(const LatticeMatrix& a,
                                                       double tol = kTolSym) {
    if (a.d > 4) throw TooLarge("partition search supported only for d <= 4");
    const Mat theta = symplectic_form_of(a).theta;
    const double scale = std::max(1.0, max_abs(theta));
    const int n = 2 * a.d;
    const int d = a.d;
    std::vector<int> pick(d);
    for (int i = 0; i < d; ++i) pick[i] = i;
    auto is_null = [&](const std::vector<int>& set) {
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t j = i + 1; j < set.size(); ++j)
                if (std::abs(theta(set[i], set[j])) > tol * scale) return false;
        return true;
    };
    while (true) {
        std::vector<int> rest;
        rest.reserve(d);
        for (int i = 0, p = 0; i < n; ++i) {
            if (p < d && pick[p] == i)
                ++p;
            else
                rest.push_back(i);
        }
        if (is_null(pick) && is_null(rest)) return LagrangianSplit{pick, rest};
        int i = d - 1;
        while (i >= 0 && pick[i] == n - d + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
    return std::nullopt;
}

/// Summary of the form-level classification of one lattice.
struct ClassificationReport {
    Mat theta;
    std::optional<double> pfaffian_value;
    double covolume_value = 0.0;
    bool density_ok = false;
    std::optional<Mat> separable_k;
    bool k_diagonal = false;
    std::optional<bool> gaussian_frame_verdict;
    std::optional<LagrangianSplit> split;
};

inline ClassificationReport classify(const LatticeMatrix& a, double tol = kTolSym) {
    ClassificationReport rep;
    const SymplecticForm form = symplectic_form_of(a);
    rep.theta = form.theta;
    if (a.d <= 4) rep.pfaffian_value = pfaffian(form);
    rep.covolume_value = covolume(a);
    rep.density_ok = rep.covolume_value <= 1.0 + 1e-12;
    rep.separable_k = separable_form_check(form, tol);
    if (rep.separable_k) {
        Mat off = *rep.separable_k;
        off.diagonal().setZero();
        rep.k_diagonal = max_abs(off) <= 1e-9 * std::max(1.0, max_abs(*rep.separable_k));
        if (rep.k_diagonal)
            rep.gaussian_frame_verdict = lsw_criterion(rep.separable_k->diagonal());
    }
    if (a.d <= 4) rep.split = lagrangian_split(a, tol);
    return rep;
}

/// Searches for an integral M with entries in [-radius, radius] and
/// |det M| = 1 such that AM and B induce the same form. Columns are chosen
/// depth-first in a small-entries-first order, pruning on the partial form
/// constraints; same-lattice pairs short-circuit to the exact witness
/// A^(-1) B.
inline std::optional<Mat> bounded_orbit_search(const LatticeMatrix& a,
                                               const LatticeMatrix& b,
                                               int radius = 2,
                                               double tol = kTolSym) {
    if (a.d != b.d) throw DimensionMismatch("lattice dimensions differ");
    if (radius < 1 || radius > 2) throw TooLarge("radius must be 1 or 2");
    if (a.d > 2) throw TooLarge("orbit search supported only for d <= 2");
    const int n = 2 * a.d;
    const Mat theta = symplectic_form_of(a).theta;
    const Mat target = symplectic_form_of(b).theta;
    const double scale = std::max({1.0, max_abs(theta), max_abs(target)});

    {
        const Mat m = checked_inverse(a.m) * b.m;
        bool integral = true;
        for (int i = 0; i < n && integral; ++i)
            for (int j = 0; j < n && integral; ++j)
                if (std::abs(m(i, j) - std::round(m(i, j))) > tol ||
                    std::abs(m(i, j)) > radius + 0.5)
                    integral = false;
        if (integral) {
            const Mat rounded = m.array().round().matrix();
            if (std::abs(std::abs(rounded.determinant()) - 1.0) < 0.5)
                return rounded;
        }
    }

    std::vector<Vec> candidates;
    {
        const int span = 2 * radius + 1;
        std::int64_t total = 1;
        for (int i = 0; i < n; ++i) total *= span;
        candidates.reserve(total);
        for (std::int64_t code = 0; code < total; ++code) {
            Vec c(n);
            std::int64_t rem = code;
            bool zero = true;
            for (int i = 0; i < n; ++i) {
                const int e = static_cast<int>(rem % span) - radius;
                rem /= span;
                c(i) = e;
                if (e != 0) zero = false;
            }
            if (!zero) candidates.push_back(c);
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Vec& u, const Vec& v) {
                             const double nu = u.cwiseAbs().sum();
                             const double nv = v.cwiseAbs().sum();
                             if (nu != nv) return nu < nv;
                             for (int i = 0; i < u.size(); ++i) {
                                 const double ku = 2.0 * std::abs(u(i)) + (u(i) < 0 ? 1.0 : 0.0);
                                 const double kv = 2.0 * std::abs(v(i)) + (v(i) < 0 ? 1.0 : 0.0);
                                 if (ku != kv) return ku < kv;
                             }
                             return false;
                         });
    }

    std::vector<Vec> cols(n);
    std::vector<Vec> theta_cols(n);
    Mat m(n, n);
    auto dfs = [&](auto&& self, int depth) -> bool {
        if (depth == n) {
            return std::abs(std::abs(m.determinant()) - 1.0) <= tol;
        }
        for (const Vec& c : candidates) {
            bool ok = true;
            const Vec tc = theta * c;
            for (int i = 0; i < depth && ok; ++i)
                if (std::abs(cols[i].dot(tc) - target(i, depth)) > tol * scale) ok = false;
            if (!ok) continue;
            cols[depth] = c;
            theta_cols[depth] = tc;
            m.col(depth) = c;
            if (self(self, depth + 1)) return true;
        }
        return false;
    };
    if (dfs(dfs, 0)) return m;
    return std::nullopt;
}

}  // namespace latsym
