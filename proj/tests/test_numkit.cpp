#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resolvex/numkit.hpp"
#include "resolvex/rng.hpp"

using namespace resolvex;

namespace {

ComplexMatrix random_matrix(SequentialRng& rng, std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m.at(r, c) = Complex{rng.gaussian(), rng.gaussian()};
    return m;
}

ComplexMatrix random_unitary(SequentialRng& rng, std::size_t n) {
    // Gram-Schmidt on a random Gaussian matrix
    ComplexMatrix g = random_matrix(rng, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            Complex proj{0, 0};
            for (std::size_t r = 0; r < n; ++r) proj += std::conj(g.at(r, p)) * g.at(r, c);
            for (std::size_t r = 0; r < n; ++r) g.at(r, c) -= proj * g.at(r, p);
        }
        double nn = 0.0;
        for (std::size_t r = 0; r < n; ++r) nn += std::norm(g.at(r, c));
        nn = std::sqrt(nn);
        for (std::size_t r = 0; r < n; ++r) g.at(r, c) /= nn;
    }
    return g;
}

} // namespace

TEST_CASE("solve: identity, diagonal, permutation") {
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    const ComplexVector b1(std::vector<Complex>{{1, 0}, {0, 1}});
    const ComplexVector x1 = solve(eye, b1);
    CHECK(std::abs(x1[0] - Complex{1, 0}) < 1e-14);
    CHECK(std::abs(x1[1] - Complex{0, 1}) < 1e-14);

    const ComplexMatrix d = ComplexMatrix::diagonal({{2, 0}, {4, 0}});
    const ComplexVector x2 = solve(d, ComplexVector(std::vector<Complex>{{2, 0}, {4, 0}}));
    CHECK(std::abs(x2[0] - Complex{1, 0}) < 1e-14);
    CHECK(std::abs(x2[1] - Complex{1, 0}) < 1e-14);

    ComplexMatrix p(2);
    p.at(0, 1) = 1.0;
    p.at(1, 0) = 1.0;
    const ComplexVector b3(std::vector<Complex>{{3, 0}, {7, 0}});
    const ComplexVector x3 = solve(p, b3);
    CHECK(std::abs(x3[0] - Complex{7, 0}) < 1e-14);
    CHECK(std::abs(x3[1] - Complex{3, 0}) < 1e-14);
    // verify by multiplying back
    const ComplexVector r = p * x3 - b3;
    CHECK(r.norm() < 1e-14);
}

TEST_CASE("solve: singular matrix rejected") {
    ComplexMatrix s(2);
    s.at(0, 0) = 1.0;
    s.at(0, 1) = 2.0;
    s.at(1, 0) = 0.5;
    s.at(1, 1) = 1.0;
    CHECK_THROWS_AS(solve(s, ComplexVector(std::vector<Complex>{{1, 0}, {1, 0}})), SingularMatrix);
}

TEST_CASE("spectral_norm: frozen cases") {
    CHECK(spectral_norm(ComplexMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-10));

    ComplexMatrix shift(2);
    shift.at(0, 1) = 1.0;
    CHECK(spectral_norm(shift) == doctest::Approx(1.0).epsilon(1e-10));

    ComplexMatrix c(2);
    c.at(0, 0) = 1.0;
    c.at(0, 1) = 1.0 / std::sqrt(2.0);
    c.at(1, 1) = 1.0 / std::sqrt(2.0);
    // eigenvalues of C^H C are 1 +- 1/sqrt(2)
    CHECK(spectral_norm(c) == doctest::Approx(std::sqrt(1.0 + 1.0 / std::sqrt(2.0))).epsilon(1e-8));
    CHECK(spectral_norm(c) == doctest::Approx(1.30656).epsilon(1e-5));
}

TEST_CASE("row_col_norm_bound: frozen cases") {
    ComplexMatrix shift(2);
    shift.at(0, 1) = 1.0;
    CHECK(row_col_norm_bound(shift) == doctest::Approx(1.0));

    ComplexMatrix ones(2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t k = 0; k < 2; ++k) ones.at(r, k) = 1.0;
    CHECK(row_col_norm_bound(ones) == doctest::Approx(2.0));

    ComplexMatrix jlike(2);
    jlike.at(0, 0) = 1.0;
    jlike.at(0, 1) = 1.0;
    jlike.at(1, 1) = 1.0;
    CHECK(row_col_norm_bound(jlike) == doctest::Approx(2.0));
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(spectral_norm(jlike) == doctest::Approx(golden).epsilon(1e-8));
    CHECK(row_col_norm_bound(jlike) >= spectral_norm(jlike));
}

TEST_CASE("svd_extremes: frozen cases") {
    const auto id = svd_extremes(ComplexMatrix::identity(2));
    CHECK(id.sigma_max == doctest::Approx(1.0));
    CHECK(id.sigma_min_nonzero == doctest::Approx(1.0));

    const double s2 = 1.0 / std::sqrt(2.0);
    std::vector<ComplexVector> cols{ComplexVector(std::vector<Complex>{{1, 0}, {0, 0}}),
                                    ComplexVector(std::vector<Complex>{{s2, 0}, {s2, 0}})};
    const auto e = svd_extremes(cols);
    CHECK(e.sigma_max == doctest::Approx(1.30656).epsilon(1e-5));
    CHECK(e.sigma_min_nonzero == doctest::Approx(0.54120).epsilon(1e-4));
    CHECK(e.kappa() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-6));

    std::vector<ComplexVector> rank1{ComplexVector(std::vector<Complex>{{3, 0}, {0, 0}})};
    const auto r1 = svd_extremes(rank1);
    CHECK(r1.sigma_max == doctest::Approx(3.0));
    CHECK(r1.sigma_min_nonzero == doctest::Approx(3.0));

    ComplexMatrix zero(2);
    CHECK_THROWS_AS(svd_extremes(zero), ZeroMatrix);
}

TEST_CASE("property: spectral norm below row/col bound, 200 random matrices") {
    SequentialRng rng(11);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.integer(16);
        const ComplexMatrix m = random_matrix(rng, n);
        CHECK(spectral_norm(m) <= row_col_norm_bound(m) * (1.0 + 1e-12));
    }
}

TEST_CASE("property: solve round trip within 1e-8 for cond <= 1e6") {
    SequentialRng rng(12);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng.integer(12);
        const ComplexMatrix m = random_matrix(rng, n);
        const auto ex = svd_extremes(m);
        if (ex.kappa() > 1e6) continue;
        ComplexVector b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = Complex{rng.gaussian(), rng.gaussian()};
        const ComplexVector x = solve(m, b);
        CHECK((m * x - b).norm() <= 1e-8 * b.norm() * ex.kappa());
    }
}

TEST_CASE("property: spectral norm invariant under unitaries") {
    SequentialRng rng(13);
    for (int t = 0; t < 25; ++t) {
        const std::size_t n = 2 + rng.integer(8);
        const ComplexMatrix m = random_matrix(rng, n);
        const ComplexMatrix u = random_unitary(rng, n);
        const double base = spectral_norm(m);
        CHECK(spectral_norm(u * m) == doctest::Approx(base).epsilon(1e-8));
        CHECK(spectral_norm(m * u) == doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("spectral norm agrees with power iteration") {
    SequentialRng rng(14);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 2 + rng.integer(6);
        const ComplexMatrix m = random_matrix(rng, n);
        CHECK(spectral_norm(m) == doctest::Approx(oracles::power_iteration_norm(m)).epsilon(1e-6));
    }
}

TEST_CASE("expm: diagonal and nilpotent cases") {
    const ComplexMatrix d = ComplexMatrix::diagonal({{0.5, 0}, {-1.0, 0}});
    const ComplexMatrix e = expm(d);
    CHECK(std::abs(e.at(0, 0) - Complex{std::exp(0.5), 0}) < 1e-12);
    CHECK(std::abs(e.at(1, 1) - Complex{std::exp(-1.0), 0}) < 1e-12);

    ComplexMatrix n(2);  // exp([[0,0],[1,0]]) = I + N
    n.at(1, 0) = 1.0;
    const ComplexMatrix en = expm(n);
    CHECK(std::abs(en.at(0, 0) - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(en.at(1, 0) - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(en.at(0, 1)) < 1e-12);
}

TEST_CASE("finite-entry invariants enforced") {
    CHECK_THROWS_AS(ComplexMatrix(1, {Complex{std::nan(""), 0.0}}), BadSpec);
    CHECK_THROWS_AS(ComplexMatrix(2, {Complex{1, 0}}), BadSpec);
}
