#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "latsym/latsym.hpp"

using namespace latsym;

namespace {

Mat frame_example_b() {
    Mat m(4, 4);
    m << 3.0, 0.0, 0.5, 0.0,
         0.0, 1.0, 0.0, 1.0,
         14.0, 1.0, 2.5, 1.0,
         3.0, 14.0 / 3.0, 0.5, 5.0;
    return m;
}

// Closed forms for the frame example at window parameter D = diag(a, b):
// X = diag(a^2/(9a^4+1), b^2/(b^4+9)),
// Y = -[[(42a^4+5)/(9a^4+1), 1], [1, (14b^4+135)/(3(b^4+9))]].
Mat expected_x(double a, double b) {
    Mat x = Mat::Zero(2, 2);
    x(0, 0) = a * a / (9.0 * std::pow(a, 4) + 1.0);
    x(1, 1) = b * b / (std::pow(b, 4) + 9.0);
    return x;
}

Mat expected_y(double a, double b) {
    Mat y(2, 2);
    const double a4 = std::pow(a, 4), b4 = std::pow(b, 4);
    y << (42.0 * a4 + 5.0) / (9.0 * a4 + 1.0), 1.0,
         1.0, (14.0 * b4 + 135.0) / (3.0 * (b4 + 9.0));
    return -y;
}

Mat random_separable_lattice(int d, Rng& rng, Vec& k_out) {
    Vec k(d);
    for (int i = 0; i < d; ++i) {
        double v = 0.0;
        while (std::abs(v) < 0.05) v = rng.uniform(-1.5, 1.5);
        k(i) = v;
    }
    k_out = k;
    Mat b = Mat::Identity(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) b(d + i, d + i) = k(i);
    const Mat s = random_symplectic(d, rng.next_u64() | 1, 3);
    return s * b;
}

}  // namespace

TEST_CASE("standard window samples match the closed form") {
    const Grid grid = default_grid(1);
    const SampledFunction g = standard_gaussian(grid);
    for (int j = 0; j < grid.n; j += 17) {
        const double t = grid.coord(j);
        REQUIRE(std::abs(g.values(j) -
                         std::pow(2.0, 0.25) * std::exp(-M_PI * t * t)) < 1e-15);
    }
}

TEST_CASE("spd square root squares back and rejects indefinite input") {
    Mat m(2, 2);
    m << 2.0, 0.5, 0.5, 1.0;
    const Mat r = spd_sqrt(m);
    REQUIRE(max_abs(Mat(r * r - m)) < 1e-12);
    REQUIRE(max_abs(Mat(r - r.transpose())) < 1e-12);

    Mat bad(2, 2);
    bad << 1.0, 0.0, 0.0, -1.0;
    REQUIRE_THROWS_AS(spd_sqrt(bad), NotPositiveDefinite);
}

TEST_CASE("frame example: closed-form X and Y at two window parameters") {
    const LatticeMatrix b = make_lattice_matrix(frame_example_b());
    const double params[2][2] = {{1.0, 1.0}, {2.0, 0.5}};
    for (const auto& p : params) {
        Vec dvec(2);
        dvec << p[0], p[1];
        const GaussianFrameParams gp = gaussian_frame_params(b, dvec);
        REQUIRE(max_abs(Mat(gp.x - expected_x(p[0], p[1]))) < 1e-12);
        REQUIRE(max_abs(Mat(gp.y - expected_y(p[0], p[1]))) < 1e-12);
        REQUIRE(gp.is_frame);
        Vec expected_k(2);
        expected_k << 0.5, 1.0 / 3.0;
        REQUIRE((gp.k - expected_k).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Spot values at (1,1): X = diag(1/10, 1/10), Y11 = -47/10, Y22 = -149/30.
    Vec ones(2);
    ones << 1.0, 1.0;
    const GaussianFrameParams gp = gaussian_frame_params(b, ones);
    REQUIRE(gp.x(0, 0) == Catch::Approx(0.1).margin(1e-14));
    REQUIRE(gp.y(0, 0) == Catch::Approx(-4.7).margin(1e-13));
    REQUIRE(gp.y(1, 1) == Catch::Approx(-149.0 / 30.0).margin(1e-13));
    REQUIRE(gp.y(0, 1) == Catch::Approx(-1.0).margin(1e-13));
}

TEST_CASE("frame parameter computation rejects non-diagonal couplings") {
    const double pi = M_PI;
    Mat m(4, 4);
    m << 1.0, pi * pi, pi / 3.0, pi,
         pi * pi, 1.0, pi, pi / 2.0,
         0.0, pi, 1.0 / 3.0, 1.0,
         pi, 0.0, 1.0, 0.5;
    const LatticeMatrix a = make_lattice_matrix(m);
    Vec ones(2);
    ones << 1.0, 1.0;
    REQUIRE_THROWS_AS(gaussian_frame_params(a, ones), NotDiagonalK);
}

TEST_CASE("strict unit-interval criterion on the coupling entries") {
    Vec k(2);
    k << 0.999, -0.5;
    REQUIRE(lsw_criterion(k));
    k << 1.0, 0.5;
    REQUIRE_FALSE(lsw_criterion(k));
    k << 0.3, 1.0001;
    REQUIRE_FALSE(lsw_criterion(k));
    k << 0.0, 0.5;
    REQUIRE_THROWS_AS(lsw_criterion(k), ZeroEntry);
}

TEST_CASE("pre-iwasawa splitting reconstructs random symplectic matrices") {
    for (int d = 1; d <= 2; ++d) {
        for (std::uint64_t seed = 500; seed < 520; ++seed) {
            const Mat s = random_symplectic(d, seed, 4);
            const PreIwasawa pi = pre_iwasawa(s);
            const Mat o = pi.o;
            REQUIRE(max_abs(Mat(o * o.transpose() - Mat::Identity(2 * d, 2 * d))) <
                    1e-9);
            REQUIRE(is_symplectic(o, 1e-9));
            const Mat recon = v_p_matrix(pi.y) * m_l_matrix(spd_sqrt(pi.x)) * o;
            REQUIRE(max_abs(Mat(recon - s)) < 1e-9 * std::max(1.0, max_abs(s)));
        }
    }
}

TEST_CASE("pre-iwasawa of the orthogonal block matrix is trivial") {
    const Mat j = standard_j_matrix(2);
    const PreIwasawa pi = pre_iwasawa(j);
    REQUIRE(max_abs(Mat(pi.x - Mat::Identity(2, 2))) < 1e-12);
    REQUIRE(max_abs(pi.y) < 1e-12);
    REQUIRE(max_abs(Mat(pi.o - j)) < 1e-12);
}

TEST_CASE("frame parameters agree with the pre-iwasawa of the pipeline matrix") {
    Rng rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_int(2));
        Vec k(d);
        const Mat a_mat = random_separable_lattice(d, rng, k);
        const LatticeMatrix a = make_lattice_matrix(d, a_mat);
        Vec dvec(d);
        for (int i = 0; i < d; ++i) dvec(i) = rng.uniform(0.5, 2.0);

        const GaussianFrameParams gp = gaussian_frame_params(a, dvec);

        Mat b = Mat::Identity(2 * d, 2 * d);
        for (int i = 0; i < d; ++i) b(d + i, d + i) = k(i);
        const Mat ml = m_l_matrix(Mat(dvec.cwiseInverse().asDiagonal()));
        const Mat pipeline = a_mat * b.inverse() * ml;
        REQUIRE(is_symplectic(pipeline, 1e-8));

        const PreIwasawa pi = pre_iwasawa(pipeline);
        REQUIRE(max_abs(Mat(pi.x - gp.x)) < 1e-9 * std::max(1.0, max_abs(gp.x)));
        REQUIRE(max_abs(Mat(pi.y - gp.y)) < 1e-9 * std::max(1.0, max_abs(gp.y)));
    }
}

TEST_CASE("atom samples equal the generator word applied to the window") {
    const Grid grid = default_grid(1);
    const SampledFunction g0 = standard_gaussian(grid);
    Mat x(1, 1), y(1, 1);
    x << 0.1;
    y << -4.7;
    const GaussianAtom atom = make_gaussian_atom(x, y);
    const SampledFunction direct = gaussian_atom_samples(atom, grid);
    const SampledFunction via_word =
        apply_word(g0, Word{Generator::v(y), Generator::m(spd_sqrt(x))});
    REQUIRE((direct.values - via_word.values).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE(norm(direct) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("atom samples in 2-d match the word on the coarse desk grid") {
    const Grid grid = default_grid(2);
    const SampledFunction g0 = standard_gaussian(grid);
    const LatticeMatrix b = make_lattice_matrix(frame_example_b());
    Vec ones(2);
    ones << 1.0, 1.0;
    const GaussianFrameParams gp = gaussian_frame_params(b, ones);
    const GaussianAtom atom = make_gaussian_atom(gp.x, gp.y);
    const SampledFunction direct = gaussian_atom_samples(atom, grid);
    const SampledFunction via_word =
        apply_word(g0, Word{Generator::v(gp.y), Generator::m(spd_sqrt(gp.x))});
    REQUIRE((direct.values - via_word.values).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("frame-set transform reproduces the atom parameters") {
    Mat x(2, 2), y(2, 2);
    x << 0.3, 0.05, 0.05, 0.2;
    y << -1.0, 0.4, 0.4, 2.0;
    const GaussianAtom atom = make_gaussian_atom(x, y);
    const Mat s = frame_set_transform(atom);
    REQUIRE(is_symplectic(s, 1e-10));
    const PreIwasawa pi = pre_iwasawa(s);
    REQUIRE(max_abs(Mat(pi.x - x)) < 1e-10);
    REQUIRE(max_abs(Mat(pi.y - y)) < 1e-10);
}

TEST_CASE("atom constructor validates its inputs") {
    Mat bad_x(2, 2), y(2, 2);
    bad_x << 1.0, 0.0, 0.0, -0.5;
    y.setZero();
    REQUIRE_THROWS_AS(make_gaussian_atom(bad_x, y), NotPositiveDefinite);
    Mat x(2, 2), bad_y(2, 2);
    x << 1.0, 0.0, 0.0, 1.0;
    bad_y << 0.0, 1.0, -1.0, 0.0;
    REQUIRE_THROWS_AS(make_gaussian_atom(x, bad_y), Error);
}
