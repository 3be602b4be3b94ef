#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resolvex/curves.hpp"
#include "resolvex/rng.hpp"

using namespace resolvex;

namespace {
constexpr double pi = oracles::pi;
}

TEST_CASE("discretize: fourth roots of unity at delta 0") {
    const DiscretizedCurve d = discretize(Curve::unit_circle(), 2, 0.0);
    REQUIRE(d.n() == 4);
    CHECK(std::abs(d.z(0) - Complex{1, 0}) < 1e-15);
    CHECK(std::abs(d.z(1) - Complex{0, 1}) < 1e-15);
    CHECK(std::abs(d.z(2) - Complex{-1, 0}) < 1e-15);
    CHECK(std::abs(d.z(3) - Complex{0, -1}) < 1e-15);
}

TEST_CASE("discretize: scaled two-point circle") {
    const DiscretizedCurve d = discretize(Curve::unit_circle(), 1, 0.5);
    CHECK(std::abs(d.z(0) - Complex{1.5, 0}) < 1e-15);
    CHECK(std::abs(d.z(1) - Complex{-1.5, 0}) < 1e-15);
}

TEST_CASE("discretize: shifted segment") {
    const DiscretizedCurve d = discretize(Curve::real_segment(1.0), 2, 0.1);
    CHECK(std::abs(d.z(0) - Complex{-1.0, 0.1}) < 1e-15);
    CHECK(std::abs(d.z(1) - Complex{-0.5, 0.1}) < 1e-15);
    CHECK(std::abs(d.z(2) - Complex{0.0, 0.1}) < 1e-15);
    CHECK(std::abs(d.z(3) - Complex{0.5, 0.1}) < 1e-15);
}

TEST_CASE("discretize: points stay on the shifted curve") {
    const DiscretizedCurve c = discretize(Curve::unit_circle(), 10, 0.07);
    for (std::uint64_t j = 0; j < c.n(); j += 17)
        CHECK(std::abs(std::abs(c.z(j)) - 1.07) < 1e-12);
    const DiscretizedCurve s = discretize(Curve::real_segment(2.0), 10, 0.003);
    for (std::uint64_t j = 0; j < s.n(); j += 17) CHECK(s.z(j).imag() == doctest::Approx(0.003));
}

TEST_CASE("custom curve without shift rule cannot be discretized") {
    const Curve c = Curve::custom("bare", [](double t) { return Complex{t, 0.0}; }, false);
    CHECK_THROWS_AS(discretize(c, 3, 0.1), UnsupportedCurve);
}

TEST_CASE("riemann_sum: inclusive endpoint convention") {
    auto one = [](double) { return Complex{1.0, 0.0}; };
    CHECK(riemann_sum(one, 3, 0.0, 1.0).real() == doctest::Approx(9.0 / 8.0));

    auto ident = [](double t) { return Complex{t, 0.0}; };
    CHECK(riemann_sum(ident, 2, 0.0, 1.0).real() == doctest::Approx(0.625));
    CHECK(riemann_sum(ident, 2, 0.3, 0.6).real() == doctest::Approx(0.125));

    // empty index range
    CHECK(std::abs(riemann_sum(ident, 2, 0.51, 0.74)) == doctest::Approx(0.0));
}

TEST_CASE("periodic_sum runs j = 0..N-1") {
    auto one = [](double) { return Complex{1.0, 0.0}; };
    CHECK(periodic_sum(one, 3).real() == doctest::Approx(1.0));
}

TEST_CASE("riemann_error_bound: frozen values") {
    CHECK(riemann_error_bound(1.0, 1.0, 2, 0.0, 1.0) == doctest::Approx(0.625));
    CHECK(riemann_error_bound(0.0, 0.0, 5, 0.0, 1.0) == doctest::Approx(0.0));
    // the Lorentzian-density budget at delta = 0.1, N = 1024
    const double delta = 0.1;
    const double md = 6.0 * std::sqrt(2.0) * pi / (delta * delta);
    const double ma = 1.0 + 2.0 / delta;
    CHECK(riemann_error_bound(md, ma, 10, 0.0, 1.0) == doctest::Approx(1.34264149).epsilon(1e-7));
}

TEST_CASE("window: enumerated examples") {
    const WindowProjector w1 = window(0.5, 0.1, 3, false);
    CHECK(w1.indices() == std::vector<std::uint64_t>{4});

    const WindowProjector w2 = window(0.0, 0.13, 3, true);
    CHECK(w2.indices() == std::vector<std::uint64_t>{7, 0, 1});

    const WindowProjector w3 = window(0.25, 1.5, 3, true);
    CHECK(w3.covers_all());
    CHECK(w3.indices().size() == 8);
}

TEST_CASE("window: set and complement partition the index range") {
    SequentialRng rng(21);
    for (int t = 0; t < 50; ++t) {
        const int a = 2 + static_cast<int>(rng.integer(6));
        const bool modular = rng.uniform() < 0.5;
        const WindowProjector w = window(rng.uniform(), rng.uniform(0.01, 0.6), a, modular);
        const std::uint64_t n = std::uint64_t(1) << a;
        std::vector<bool> seen(n, false);
        for (std::uint64_t j : w.indices()) {
            CHECK(!seen[j]);  // no duplicates
            seen[j] = true;
        }
        for (std::uint64_t j = 0; j < n; ++j) CHECK(w.contains(j) == seen[j]);
        // membership matches the defining distance test
        for (std::uint64_t j = 0; j < n; ++j) {
            const double t_j = static_cast<double>(j) / static_cast<double>(n);
            double dist = std::abs(t_j - w.center_t);
            if (modular) dist = std::min(dist, 1.0 - dist);
            if (std::abs(dist - w.epsilon) > 1e-12)  // skip knife-edge float ties
                CHECK(w.contains(j) == (dist <= w.epsilon));
        }
    }
}

TEST_CASE("property: riemann error bound holds for polynomials") {
    SequentialRng rng(22);
    for (int t = 0; t < 60; ++t) {
        const double c2 = rng.uniform(-2, 2), c1 = rng.uniform(-2, 2), c0 = rng.uniform(-2, 2);
        auto f = [&](double x) { return Complex{c2 * x * x + c1 * x + c0, 0.0}; };
        const int a = 3 + static_cast<int>(rng.integer(6));
        double t0 = rng.uniform(0.0, 0.5), t1 = t0 + rng.uniform(0.1, 0.5);
        t1 = std::min(t1, 1.0);
        auto integral = [&](double x) { return c2 * x * x * x / 3 + c1 * x * x / 2 + c0 * x; };
        const double exact = integral(t1) - integral(t0);
        const double approx = riemann_sum(f, a, t0, t1).real();
        double max_deriv = 0.0, max_abs = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = t0 + (t1 - t0) * i / 100.0;
            max_deriv = std::max(max_deriv, std::abs(2 * c2 * x + c1));
            max_abs = std::max(max_abs, std::abs(f(x)));
        }
        const double bound = riemann_error_bound(max_deriv, max_abs, a, t0, t1);
        CHECK(std::abs(exact - approx) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("property: riemann error bound holds for the circle density") {
    SequentialRng rng(23);
    for (int t = 0; t < 40; ++t) {
        const double delta = rng.uniform(0.05, 0.5);
        const double theta = rng.uniform(0.0, 1.0);
        auto g = [&](double x) {
            const double s = std::sin(pi * (x - theta));
            return Complex{delta * (2 + delta) / (delta * delta + 4 * (1 + delta) * s * s), 0.0};
        };
        const int a = 6 + static_cast<int>(rng.integer(6));
        const double approx = periodic_sum(g, a).real();
        // closed form: full-period integral of the density is exactly 1
        const double md = 6.0 * std::sqrt(2.0) * pi / (delta * delta);
        const double ma = 1.0 + 2.0 / delta;
        const double bound = riemann_error_bound(md, ma, a, 0.0, 1.0);
        CHECK(std::abs(1.0 - approx) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("curve_parameter: closed forms and custom scan") {
    CHECK(curve_parameter(Curve::unit_circle(), Complex{0, 1}) == doctest::Approx(0.25));
    CHECK(curve_parameter(Curve::real_segment(2.0), Complex{1.0, 0.0}) == doctest::Approx(0.75));
    const Curve ell = Curve::custom(
        "e", [](double t) { return Complex{std::cos(2 * pi * t), 0.5 * std::sin(2 * pi * t)}; },
        true);
    const double t = curve_parameter(ell, Complex{0.0, 0.5});
    CHECK(t == doctest::Approx(0.25).epsilon(1e-6));
}
