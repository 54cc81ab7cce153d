#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "latsym/latsym.hpp"

using namespace latsym;

namespace {

Mat worked_lattice_a() {
    const double pi = M_PI;
    Mat m(4, 4);
    m << 1.0, pi * pi, pi / 3.0, pi,
         pi * pi, 1.0, pi, pi / 2.0,
         0.0, pi, 1.0 / 3.0, 1.0,
         pi, 0.0, 1.0, 0.5;
    return m;
}

Mat frame_example_b() {
    Mat m(4, 4);
    m << 3.0, 0.0, 0.5, 0.0,
         0.0, 1.0, 0.0, 1.0,
         14.0, 1.0, 2.5, 1.0,
         3.0, 14.0 / 3.0, 0.5, 5.0;
    return m;
}

Mat rational_lattice_c() {
    Mat m(4, 4);
    m << -14.0 / 3.0, -4.0 / 21.0, 1.0 / 25.0, 2.0 / 5.0,
         16.0 / 3.0, 1.0 / 21.0, -2.0 / 25.0, 1.0 / 5.0,
         -14.0 / 3.0, -11.0 / 24.0, 1.0 / 100.0, 19.0 / 40.0,
         91.0 / 12.0, -1.0 / 6.0, -13.0 / 200.0, 7.0 / 20.0;
    return m;
}

Mat irrational_lattice_d() {
    const double pi = M_PI;
    const double rt2 = std::sqrt(2.0);
    Mat m(4, 4);
    m << 2.0 * pi, -17.0 / 9.0, -2.0 / 65.0, 3.0 * rt2 / 13.0,
         pi / 3.0, -2.0, 3.0 / 65.0, 2.0 * rt2 / 13.0,
         63.0 * pi / 8.0, -47.0 / 12.0, -57.0 / 520.0, 33.0 / (26.0 * rt2),
         -11.0 * pi / 4.0, -37.0 / 8.0, 3.0 / 20.0, 3.0 / (4.0 * rt2);
    return m;
}

}  // namespace

TEST_CASE("separable form detection on the worked 2-d lattice") {
    const LatticeMatrix a = make_lattice_matrix(worked_lattice_a());
    const SymplecticForm form = symplectic_form_of(a);
    const auto k = separable_form_check(form);
    REQUIRE(k.has_value());
    Mat expected(2, 2);
    expected << 1.0 / 3.0, 1.0, 1.0, 0.5;
    REQUIRE(max_abs(Mat(*k - expected)) < 1e-12);
}

TEST_CASE("separable reduction reproduces the lattice through S") {
    const LatticeMatrix a = make_lattice_matrix(worked_lattice_a());
    const SeparableReduction red = separable_reduction(a);
    Mat expected_k(2, 2);
    expected_k << 1.0 / 3.0, 1.0, 1.0, 0.5;
    REQUIRE(max_abs(Mat(red.k - expected_k)) < 1e-12);
    REQUIRE(is_symplectic(red.s, 1e-10));
    REQUIRE(max_abs(Mat(red.s * red.b - a.m)) < 1e-10);
    const SymplecticForm fb = symplectic_form_of(make_lattice_matrix(red.b));
    REQUIRE(max_abs(Mat(fb.theta - symplectic_form_of(a).theta)) < 1e-12);
}

TEST_CASE("separable reduction rejects a rotated 1-d lattice pairing") {
    Mat m(4, 4);
    m << 1, 0, 0, 0,
         0, 1, 0, 0,
         0.5, 0, 1, 0,
         0, 0, 0, 1;
    // theta gains a nonzero upper-left block entry, so no product reduction.
    Mat twist(4, 4);
    twist << 1, 0, 0, 0,
             0.3, 1, 0.2, 0,
             0, 0, 1, 0,
             0, 0.4, 0, 1;
    const LatticeMatrix a = make_lattice_matrix(Mat(m * twist));
    const SymplecticForm form = symplectic_form_of(a);
    if (!separable_form_check(form))
        REQUIRE_THROWS_AS(separable_reduction(a), NotSeparable);
}

TEST_CASE("frame example lattice classifies as a diagonal product") {
    const LatticeMatrix b = make_lattice_matrix(frame_example_b());
    const ClassificationReport rep = classify(b);

    REQUIRE(rep.pfaffian_value.has_value());
    REQUIRE(*rep.pfaffian_value == Catch::Approx(-1.0 / 6.0).margin(1e-12));
    REQUIRE(rep.covolume_value == Catch::Approx(1.0 / 6.0).margin(1e-12));
    REQUIRE(rep.density_ok);

    REQUIRE(rep.separable_k.has_value());
    Mat expected_k(2, 2);
    expected_k << 0.5, 0.0, 0.0, 1.0 / 3.0;
    REQUIRE(max_abs(Mat(*rep.separable_k - expected_k)) < 1e-12);
    REQUIRE(rep.k_diagonal);
    REQUIRE(rep.gaussian_frame_verdict.has_value());
    REQUIRE(*rep.gaussian_frame_verdict);
}

TEST_CASE("rational and irrational worked lattices both give Gaussian frames") {
    const LatticeMatrix c = make_lattice_matrix(rational_lattice_c());
    const ClassificationReport rc = classify(c);
    REQUIRE(rc.separable_k.has_value());
    Mat kc(2, 2);
    kc << 2.0 / 5.0, 0.0, 0.0, 1.0 / 7.0;
    REQUIRE(max_abs(Mat(*rc.separable_k - kc)) < 1e-12);
    REQUIRE(rc.k_diagonal);
    REQUIRE(rc.gaussian_frame_verdict.has_value());
    REQUIRE(*rc.gaussian_frame_verdict);

    const LatticeMatrix d = make_lattice_matrix(irrational_lattice_d());
    const ClassificationReport rd = classify(d);
    REQUIRE(rd.separable_k.has_value());
    Mat kd(2, 2);
    kd << M_PI / 5.0, 0.0, 0.0, -std::sqrt(2.0) / 3.0;
    REQUIRE(max_abs(Mat(*rd.separable_k - kd)) < 1e-12);
    REQUIRE(rd.k_diagonal);
    REQUIRE(rd.gaussian_frame_verdict.has_value());
    REQUIRE(*rd.gaussian_frame_verdict);
}

TEST_CASE("density flag reflects the covolume") {
    Mat dense(2, 2), sparse(2, 2);
    dense << 1.0, 0.0, 0.0, 0.5;
    sparse << 1.0, 0.0, 0.0, 1.25;
    REQUIRE(classify(make_lattice_matrix(dense)).density_ok);
    REQUIRE_FALSE(classify(make_lattice_matrix(sparse)).density_ok);
}

TEST_CASE("lagrangian split of the standard form") {
    const LatticeMatrix a =
        make_lattice_matrix(Mat(Mat::Identity(4, 4)));
    const auto split = lagrangian_split(a);
    REQUIRE(split.has_value());
    REQUIRE(split->left.size() == 2);
    REQUIRE(split->right.size() == 2);
    // Columns 0,1 span the position axes, columns 2,3 the frequency axes;
    // each half is isotropic for the induced form.
    const SymplecticForm form = symplectic_form_of(a);
    for (const int i : split->left)
        for (const int j : split->left) REQUIRE(std::abs(form.theta(i, j)) < 1e-12);
}

TEST_CASE("lagrangian split absent for a generic dense form") {
    Mat m(4, 4);
    m << 1.0, 0.2, 0.3, 0.4,
         0.0, 1.0, 0.5, 0.6,
         0.0, 0.0, 1.0, 0.7,
         0.1, 0.0, 0.0, 1.0;
    const LatticeMatrix a = make_lattice_matrix(m);
    const SymplecticForm form = symplectic_form_of(a);
    const auto split = lagrangian_split(a);
    if (split) {
        for (const int i : split->left)
            for (const int j : split->left)
                REQUIRE(std::abs(form.theta(i, j)) < 1e-9);
    }
}

TEST_CASE("bounded orbit search finds planted unimodular relations") {
    Rng rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_int(2));
        Mat m(2 * d, 2 * d);
        for (int i = 0; i < 2 * d; ++i)
            for (int j = 0; j < 2 * d; ++j) m(i, j) = rng.uniform(-2.0, 2.0);
        if (std::abs(m.determinant()) < 0.05) continue;
        const LatticeMatrix a = make_lattice_matrix(d, m);

        Mat u = Mat::Identity(2 * d, 2 * d);
        u(0, 2 * d - 1) = 1.0;
        if (d == 2) u(1, 2) = -1.0;
        const LatticeMatrix b = make_lattice_matrix(d, Mat(m * u));

        const auto found = bounded_orbit_search(a, b, 2);
        REQUIRE(found.has_value());
        REQUIRE(max_abs(Mat(a.m * *found - b.m)) < 1e-8);
        REQUIRE(std::abs(std::abs(found->determinant()) - 1.0) < 1e-8);
    }
}

TEST_CASE("bounded orbit search rejects lattices with different forms") {
    Mat a(2, 2), b(2, 2);
    a << 1.0, 0.0, 0.0, 0.5;
    b << 1.0, 0.0, 0.0, 0.6;
    const auto found =
        bounded_orbit_search(make_lattice_matrix(a), make_lattice_matrix(b), 2);
    REQUIRE_FALSE(found.has_value());
}
