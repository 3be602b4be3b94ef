#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resolvex/kreiss.hpp"
#include "resolvex/matgen.hpp"
#include "resolvex/rng.hpp"

using namespace resolvex;

namespace {

ComplexMatrix jordan_block(Complex lambda, int d) {
    ComplexMatrix j(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        j.at(k, k) = lambda;
        if (k > 0) j.at(k, k - 1) = 1.0;
    }
    return j;
}

} // namespace

TEST_CASE("kreiss_circle: normal matrix peaks at delta/dist") {
    const ComplexMatrix c = ComplexMatrix::diagonal({{1, 0}, {-1, 0}});
    const KreissEstimate est = kreiss_circle(c, 0.1);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(est.sampled_value <= est.value * (1.0 + 1e-12));
}

TEST_CASE("kreiss_circle: nilpotent block matches the analytic-resolvent SVD") {
    const ComplexMatrix j = jordan_block(Complex{0, 0}, 2);
    const KreissEstimate est = kreiss_circle(j, 0.5);
    // oracle: the analytic resolvent [[1/z, 0], [1/z^2, 1/z]] has constant norm
    // on |z| = 1.5; its largest singular value gives K = (1+sqrt(10))/9
    const double oracle_norm =
        spectral_norm(oracles::analytic_block_resolvent(Complex{0, 0}, 2, Complex{1.5, 0}));
    const double oracle = 0.5 * oracle_norm;
    CHECK(oracle == doctest::Approx((1.0 + std::sqrt(10.0)) / 9.0).epsilon(1e-12));
    CHECK(est.value == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(est.value == doctest::Approx(0.46248).epsilon(3e-4));
}

TEST_CASE("kreiss_circle: scalar zero") {
    const ComplexMatrix z = ComplexMatrix::diagonal({{0, 0}});
    const KreissEstimate est = kreiss_circle(z, 1.0);
    CHECK(est.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("kreiss_line: Hermitian spectra give exactly 1") {
    const ComplexMatrix a = ComplexMatrix::diagonal({{0.3, 0}, {-0.4, 0}});
    const KreissEstimate est = kreiss_line(a.scaled(Complex{0, -1}), 0.05);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("kreiss_line: scalar zero") {
    const ComplexMatrix z = ComplexMatrix::diagonal({{0, 0}});
    const KreissEstimate est = kreiss_line(z, 1.0, 4.0);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kreiss_line: nilpotent block against the analytic-resolvent SVD") {
    // contour Re z = delta reaches within delta of the defective eigenvalue 0,
    // so the peak is the analytic resolvent norm at z = delta
    const ComplexMatrix c = jordan_block(Complex{0, 0}, 2).scaled(Complex{0, -1});
    const KreissEstimate est = kreiss_line(c, 0.5);
    const double oracle =
        0.5 * spectral_norm(oracles::analytic_block_resolvent(Complex{0, 0}, 2, Complex{0.5, 0}));
    CHECK(oracle == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(est.value == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("jordan_kreiss_bound: frozen values") {
    CHECK(jordan_kreiss_bound(1.0, 1, 0.3) == doctest::Approx(1.0));
    CHECK(jordan_kreiss_bound(1.0, 2, 0.5) == doctest::Approx(3.0));
    CHECK(jordan_kreiss_bound(5.0, 3, 0.1) == doctest::Approx(555.0));
}

TEST_CASE("resolvent_norm_bound: frozen values") {
    CHECK(resolvent_norm_bound(1.0, 1, 0.5) == doctest::Approx(2.0));
    CHECK(resolvent_norm_bound(1.0, 2, 0.5) == doctest::Approx(6.0));
    // d = 1 collapses to 1/dist
    for (double dist : {0.1, 0.37, 0.9})
        CHECK(resolvent_norm_bound(1.0, 1, dist) == doctest::Approx(1.0 / dist));
}

TEST_CASE("dense resolvent norm matches the analytic Jordan resolvent at T = I") {
    SequentialRng rng(41);
    for (int t = 0; t < 40; ++t) {
        const Complex lambda{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        const int d = 1 + static_cast<int>(rng.integer(4));
        const Complex z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (std::abs(z - lambda) < 0.05) continue;
        const ComplexMatrix j = jordan_block(lambda, d);
        const double dense = resolvent_norm(j, z);
        const double analytic = spectral_norm(oracles::analytic_block_resolvent(lambda, d, z));
        CHECK(dense == doctest::Approx(analytic).epsilon(1e-8));
    }
}

TEST_CASE("property: sampled K below the Jordan bound; nested grids monotone") {
    SequentialRng rng(42);
    for (int t = 0; t < 30; ++t) {
        JordanSpec spec;
        spec.seed = rng.integer(1u << 20);
        spec.transform_cond = 1.0 + rng.uniform() * 20.0;
        const int nb = 1 + static_cast<int>(rng.integer(3));
        for (int b = 0; b < nb; ++b) {
            const double mag = rng.uniform() < 0.5 ? 1.0 : rng.uniform(0.3, 0.9);
            spec.blocks.push_back({std::polar(mag, rng.uniform(0.0, 6.28)),
                                   1 + static_cast<int>(rng.integer(2))});
        }
        const GeneratedMatrix gm = generate(spec);
        const double delta = 0.1;
        const KreissEstimate est = kreiss_circle(gm.A, delta, 2048);
        const double bound = jordan_kreiss_bound(gm.kappa_bar_witness, gm.max_block_dim(), delta);
        CHECK(est.value <= bound * (1.0 + 1e-6));
    }
    // nested sampled sups are monotone nondecreasing
    const ComplexMatrix c = ComplexMatrix::diagonal({{1, 0}, {0, 1}, {-0.5, 0.3}});
    double prev = 0.0;
    for (long samples : {1024L, 2048L, 4096L}) {
        const KreissEstimate est = kreiss_circle(c, 0.07, samples);
        CHECK(est.sampled_value >= prev * (1.0 - 1e-12));
        prev = est.sampled_value;
    }
}

TEST_CASE("contour hitting the spectrum is detected") {
    const ComplexMatrix c = ComplexMatrix::diagonal({{1.1, 0}});
    CHECK_THROWS_AS(kreiss_circle(c, 0.1, 64), ContourHitsSpectrum);
}

TEST_CASE("transient growth probe: stable normal vs transient non-normal") {
    const ComplexMatrix stable = ComplexMatrix::diagonal({{-0.2, 0}, {-0.5, 0}});
    const double probe = transient_growth_probe(stable, 10.0, 32);
    CHECK(probe == doctest::Approx(1.0).epsilon(1e-9));
    // K_delta below the probe for a stable normal matrix
    const KreissEstimate est = kreiss_line(stable, 0.05);
    CHECK(est.value <= probe * (1.0 + 1e-6));

    ComplexMatrix bump(2);  // strong sub-diagonal coupling drives transient growth
    bump.at(0, 0) = Complex{-0.1, 0};
    bump.at(1, 1) = Complex{-0.1, 0};
    bump.at(1, 0) = Complex{3.0, 0};
    CHECK(transient_growth_probe(bump, 20.0, 64) > 1.5);
}
