#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "latsym/latsym.hpp"

using namespace latsym;

namespace {

Mat worked_relating_s() {
    const double pi = M_PI;
    Mat m(4, 4);
    m << 1.0, pi * pi, pi, 0.0,
         pi * pi, 1.0, 0.0, pi,
         0.0, pi, 1.0, 0.0,
         pi, 0.0, 0.0, 1.0;
    return m;
}

}  // namespace

TEST_CASE("generator matrices multiply back to the stored word") {
    Mat p(1, 1);
    p << 0.75;
    Mat l(1, 1);
    l << 2.0;
    const Word word = {Generator::v(p), Generator::j(), Generator::m(l)};
    const Mat m = word_matrix(word, 1);
    const Mat expected = v_p_matrix(p) * standard_j_matrix(1) * m_l_matrix(l);
    REQUIRE(max_abs(Mat(m - expected)) == 0.0);
}

TEST_CASE("worked relating matrix is free with known factor parameters") {
    const Mat s = worked_relating_s();
    REQUIRE(is_free(s));

    const Word word = free_factorization(s);
    REQUIRE(word.size() == 4);
    REQUIRE(word[0].kind == Generator::Kind::V);
    REQUIRE(word[1].kind == Generator::Kind::M);
    REQUIRE(word[2].kind == Generator::Kind::J);
    REQUIRE(word[3].kind == Generator::Kind::V);

    const double pi = M_PI;
    const Mat eye = Mat::Identity(2, 2);
    REQUIRE(max_abs(Mat(word[0].param + eye / pi)) < 1e-12);
    REQUIRE(max_abs(Mat(word[1].param - eye / pi)) < 1e-12);
    Mat a_block(2, 2);
    a_block << 1.0, pi * pi, pi * pi, 1.0;
    REQUIRE(max_abs(Mat(word[3].param + a_block / pi)) < 1e-12);

    REQUIRE(max_abs(Mat(word_matrix(word, 2) - s)) < 1e-10);
}

TEST_CASE("worked relating matrix: quadratic transform coefficients") {
    const Mat s = worked_relating_s();
    const QuadraticFourier qf = quadratic_fourier(s);
    const double pi = M_PI;
    const Mat eye = Mat::Identity(2, 2);
    Mat a_block(2, 2);
    a_block << 1.0, pi * pi, pi * pi, 1.0;
    REQUIRE(max_abs(Mat(qf.db_inv - eye / pi)) < 1e-12);
    REQUIRE(max_abs(Mat(qf.b_inv - eye / pi)) < 1e-12);
    REQUIRE(max_abs(Mat(qf.b_inv_a - a_block / pi)) < 1e-12);
    REQUIRE(qf.norm == Catch::Approx(1.0 / pi).margin(1e-14));
}

TEST_CASE("freeness test rejects non-symplectic input") {
    Mat m = Mat::Identity(2, 2) * 2.0;
    REQUIRE_THROWS_AS(is_free(m), NotSymplectic);
}

TEST_CASE("matrices with singular upper-right block are not free") {
    REQUIRE_FALSE(is_free(Mat(Mat::Identity(4, 4))));
    Mat p(2, 2);
    p << 1.0, 0.25, 0.25, -1.0;
    REQUIRE_FALSE(is_free(v_p_matrix(p)));
    REQUIRE(is_free(standard_j_matrix(2)));
}

TEST_CASE("two-factor splitting covers non-free matrices") {
    Mat p(2, 2);
    p << 1.0, 0.25, 0.25, -1.0;
    const Mat cases[] = {Mat(Mat::Identity(4, 4)), v_p_matrix(p),
                         Mat(m_l_matrix(Mat(2.0 * Mat::Identity(2, 2))))};
    for (const Mat& s : cases) {
        const auto [s1, s2] = two_free_factorization(s);
        REQUIRE(is_free(s1, 1e-9));
        REQUIRE(is_free(s2, 1e-9));
        REQUIRE(max_abs(Mat(s1 * s2 - s)) < 1e-10);
    }
}

TEST_CASE("full factorization reconstructs random symplectic matrices") {
    for (int d = 1; d <= 2; ++d) {
        for (std::uint64_t seed = 100; seed < 140; ++seed) {
            const Mat s = random_symplectic(d, seed, 5);
            const Word word = full_factorization(s);
            REQUIRE(word.size() <= 8);
            const double scale = std::max(1.0, max_abs(s));
            REQUIRE(max_abs(Mat(word_matrix(word, d) - s)) < 1e-8 * scale);
        }
    }
}

TEST_CASE("full factorization of the identity and the standard rotation") {
    for (int d = 1; d <= 2; ++d) {
        const Mat eye = Mat::Identity(2 * d, 2 * d);
        const Word wi = full_factorization(eye);
        REQUIRE(max_abs(Mat(word_matrix(wi, d) - eye)) < 1e-12);
        const Mat j = standard_j_matrix(d);
        const Word wj = full_factorization(j);
        REQUIRE(max_abs(Mat(word_matrix(wj, d) - j)) < 1e-12);
    }
}

TEST_CASE("quadratic transform rejects non-free matrices") {
    REQUIRE_THROWS_AS(quadratic_fourier(Mat(Mat::Identity(2, 2))), NotFree);
}
