#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resolvex/paramcurve.hpp"
#include "resolvex/rng.hpp"

using namespace resolvex;

namespace {
constexpr double pi = oracles::pi;
constexpr double two_pi = 2.0 * pi;
}

TEST_CASE("families: registered speeds and prefactors") {
    const CurveFamily circ = circle_family();
    CHECK(circ.max_speed == doctest::Approx(two_pi));
    CHECK(circ.prefactor_sq(0.01, 1024) == doctest::Approx(0.01 * 2.01 / 1024.0));

    const CurveFamily seg = segment_family(1.5);
    CHECK(seg.max_speed == doctest::Approx(3.0));
    CHECK(seg.prefactor_sq(0.01, 1024) == doctest::Approx(2.0 * 1.5 * 0.01 / (pi * 1024.0)));

    // the ellipse registers uniform speed, so max_speed is its circumference;
    // Ramanujan's approximation gives 4.8442 for semi-axes (1, 0.5)
    const CurveFamily ell = ellipse_family(1.0, 0.5);
    CHECK(ell.max_speed == doctest::Approx(4.8442).epsilon(1e-3));
    // quadrature prefactor approximates 1/(N c_delta); c_delta ~ pi/(L delta)
    const double p = ell.prefactor_sq(0.02, 4096);
    CHECK(p == doctest::Approx(0.02 * 4.8442 / (pi * 4096.0)).epsilon(0.05));
}

TEST_CASE("check_conditions: circle family passes with exponent 2") {
    const ConformanceReport rep =
        check_conditions(circle_family(), {0.04, 0.02, 0.01, 0.005}, {0.05, 0.1}, 16);
    CHECK(rep.pass1);
    CHECK(rep.cond1_max_rel_deviation <= 1e-6);  // exact rotational symmetry
    CHECK(rep.pass2);
    CHECK(rep.cond2_r2 >= 0.9);
    CHECK(rep.cond3_exponent == doctest::Approx(2.0).epsilon(0.1));
    CHECK(rep.passed());
}

TEST_CASE("check_conditions: segment family passes on the interior domain") {
    const ConformanceReport rep =
        check_conditions(segment_family(1.0), {0.01, 0.005, 0.002, 0.001}, {0.05}, 16);
    CHECK(rep.pass1);
    CHECK(rep.cond1_max_rel_deviation <= 1e-3);  // shift invariance away from endpoints
    CHECK(rep.cond3_exponent == doctest::Approx(2.0).epsilon(0.1));
    CHECK(rep.passed());
}

TEST_CASE("check_conditions: self-intersecting figure-eight violates cond1") {
    auto eight = [](double t) {
        return Complex{0.8 * std::sin(two_pi * t), 0.4 * std::sin(2.0 * two_pi * t)};
    };
    auto shift = [eight](double t, double delta) { return eight(t) + Complex{0.0, delta}; };
    const CurveFamily fig8 =
        make_family("figure-eight", Curve::custom("figure-eight", eight, true, shift));
    bool fails = false;
    try {
        const ConformanceReport rep = check_conditions(fig8, {0.02, 0.01}, {0.05}, 16);
        fails = !rep.pass1 && rep.cond1_max_rel_deviation > 0.1;  // O(1) deviation
    } catch (const QuadratureFailure&) {
        fails = true;
    }
    CHECK(fails);
}

TEST_CASE("generalized_estimate: circle family reproduces the QEUE pipeline bit for bit") {
    JordanSpec spec;
    spec.blocks = {{std::polar(1.0, 1.1), 1}, {Complex{0.4, 0.2}, 1}};
    spec.transform_cond = 3.0;
    spec.seed = 8;
    const GeneratedMatrix gm = generate(spec);
    const CurveFamily fam = circle_family();
    const ConformanceReport conf = check_conditions(fam, {0.02, 0.01}, {0.05}, 16);
    REQUIRE(conf.passed());

    const EstimationConfig cfg = select_parameters(Problem::QEUE, 0.1, 0.5, 1.0, gm.alpha,
                                                   ParameterMode::feasible, 0.005, 12);
    const EstimationReport gen_rep =
        generalized_estimate(fam, gm, cfg, {Complex{1, 0}}, 800, 42, conf);

    // the reference pipeline with identical grid, solver and seed
    const DiscretizedCurve dcurve = discretize(Curve::unit_circle(), cfg.a, cfg.delta);
    const ResolventSystem sys = build_system(gm, dcurve, Problem::QEUE);
    ResolventOptions opts;
    opts.mode = SolveMode::direct;
    const ResolventState rs =
        resolvent_state(sys, input_state(gm, {Complex{1, 0}}, Problem::QEUE).psi, opts);
    const EstimationReport ref = readout(rs, cfg, gm, 800, 42);

    REQUIRE(gen_rep.modal.size() == ref.modal.size());
    CHECK(gen_rep.modal[0].j == ref.modal[0].j);
    CHECK(gen_rep.modal[0].estimate == ref.modal[0].estimate);  // bitwise
    CHECK(gen_rep.empirical_failure_rate == ref.empirical_failure_rate);
    CHECK(gen_rep.success.eigs[0].a_sq == ref.success.eigs[0].a_sq);
}

TEST_CASE("generalized_estimate: segment family reproduces the QERE pipeline") {
    JordanSpec spec;
    spec.blocks = {{Complex{0.3, 0}, 1}, {Complex{-0.6, 0}, 1}};
    spec.transform_cond = 2.0;
    spec.seed = 12;
    const GeneratedMatrix gm = generate(spec);
    const EstimationConfig cfg = select_parameters(Problem::QERE, 0.1, 0.5, 1.0, gm.alpha,
                                                   ParameterMode::feasible, 0.005, 12);
    const CurveFamily fam = segment_family(cfg.rho());
    const ConformanceReport conf = check_conditions(fam, {0.02, 0.01}, {0.05}, 16);
    REQUIRE(conf.passed());
    const std::vector<Complex> betas{Complex{1, 0}, Complex{1, 0}};
    const EstimationReport gen_rep = generalized_estimate(fam, gm, cfg, betas, 600, 7, conf);

    const DiscretizedCurve dcurve = discretize(Curve::real_segment(cfg.rho()), cfg.a, cfg.delta);
    const ResolventSystem sys = build_system(gm, dcurve, Problem::QERE);
    ResolventOptions opts;
    opts.mode = SolveMode::direct;
    const ResolventState rs =
        resolvent_state(sys, input_state(gm, betas, Problem::QERE).psi, opts);
    const EstimationReport ref = readout(rs, cfg, gm, 600, 7);
    REQUIRE(gen_rep.modal.size() == ref.modal.size());
    for (std::size_t i = 0; i < ref.modal.size(); ++i) {
        CHECK(gen_rep.modal[i].j == ref.modal[i].j);
        CHECK(gen_rep.modal[i].estimate == ref.modal[i].estimate);
    }
    CHECK(gen_rep.empirical_failure_rate == ref.empirical_failure_rate);
}

TEST_CASE("generalized_estimate: conformance is mandatory") {
    JordanSpec spec;
    spec.blocks = {{std::polar(1.0, 1.1), 1}};
    spec.identity_transform = true;
    const GeneratedMatrix gm = generate(spec);
    ConformanceReport unchecked;
    const EstimationConfig cfg = select_parameters(Problem::QEUE, 0.1, 0.5, 1.0, gm.alpha,
                                                   ParameterMode::feasible, 0.005, 10);
    CHECK_THROWS_AS(
        generalized_estimate(circle_family(), gm, cfg, {Complex{1, 0}}, 10, 1, unchecked),
        ConformanceRequired);
}

TEST_CASE("generalized_estimate: ellipse family recovers on-ellipse eigenvalues") {
    const double ax = 1.0, by = 0.5;
    auto on_ellipse = [&](double t) {
        return Complex{ax * std::cos(two_pi * t), by * std::sin(two_pi * t)};
    };
    JordanSpec spec;
    spec.blocks = {{on_ellipse(0.15), 1}, {on_ellipse(0.6), 1}, {Complex{0.1, 0.05}, 1},
                   {Complex{-0.2, -0.1}, 1}};
    spec.transform_cond = 5.0;
    spec.seed = 77;
    const GeneratedMatrix gm = generate(spec);

    const CurveFamily fam = ellipse_family(ax, by);
    // curvature corrections to cond1 scale like delta; probe below 0.01
    const ConformanceReport conf = check_conditions(fam, {0.004, 0.002}, {0.03}, 16);
    REQUIRE(conf.passed());

    EstimationConfig cfg = select_parameters(Problem::QEUE, 0.1, 0.5, 1.0, gm.alpha,
                                             ParameterMode::feasible, 0.004, 12);
    const std::vector<Complex> betas{Complex{1, 0}, Complex{1, 0}};
    const EstimationReport rep = generalized_estimate(fam, gm, cfg, betas, 2000, 19, conf);
    REQUIRE(rep.modal.size() == 2);
    // modal grid parameters sit within eps_eig of the true eigenvalues on the curve
    for (const auto& m : rep.modal) {
        const Complex est = fam.base.point(m.t);
        const double d0 = std::abs(est - gm.spec.blocks[0].lambda);
        const double d1 = std::abs(est - gm.spec.blocks[1].lambda);
        CHECK(std::min(d0, d1) <= 0.1);
    }
}

TEST_CASE("radial_search: localizes a magnitude-0.7 eigenvalue") {
    JordanSpec spec;
    spec.blocks = {{std::polar(0.7, pi / 3.0), 1}};
    spec.transform_cond = 2.0;
    spec.seed = 4;
    const GeneratedMatrix gm = generate(spec);
    const ComplexVector psi = gm.block_eigvecs[0];
    const EstimationConfig cfg = select_parameters(Problem::QEUE, 0.1, 0.5, 1.0, 1.0,
                                                   ParameterMode::feasible, 0.005, 12);
    const RadialSweep sweep = radial_search(gm, psi, 0.5, 0.8, 0.1, cfg);
    REQUIRE(sweep.entries.size() == 4);
    CHECK(sweep.entries[sweep.best].radius == doctest::Approx(0.7));
    CHECK(std::abs(sweep.entries[sweep.best].peak_arg - pi / 3.0) <= 0.1);
    // neighbours show suppressed mass
    for (std::size_t i = 0; i < sweep.entries.size(); ++i)
        if (i != sweep.best)
            CHECK(sweep.entries[i].success_mass < sweep.entries[sweep.best].success_mass);
}

TEST_CASE("radial_search: no eigenvalue in range keeps every mass low") {
    JordanSpec spec;
    spec.blocks = {{std::polar(0.2, 1.0), 1}};
    spec.transform_cond = 1.0;
    spec.seed = 6;
    const GeneratedMatrix gm = generate(spec);
    const ComplexVector psi = gm.block_eigvecs[0];
    const EstimationConfig cfg = select_parameters(Problem::QEUE, 0.1, 0.5, 1.0, 1.0,
                                                   ParameterMode::feasible, 0.02, 12);
    const RadialSweep sweep = radial_search(gm, psi, 0.6, 0.9, 0.1, cfg);
    // failure-mass threshold 2 delta/(pi eps) + 2 eps_disc, far exceeded by the
    // diffuse marginal here; just require every mass to stay below 1/2
    for (const auto& e : sweep.entries) CHECK(e.success_mass < 0.5);
}
