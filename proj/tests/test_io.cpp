#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "resolvex/json_io.hpp"
#include "resolvex/verify.hpp"

using namespace resolvex;

TEST_CASE("matrix and vector JSON round trip") {
    ComplexMatrix m(2);
    m.at(0, 0) = Complex{1.25, -0.5};
    m.at(1, 0) = Complex{0, 3};
    const Json j = to_json(m);
    CHECK(j["dim"] == 2);
    CHECK(j["entries"][0][0] == 1.25);
    const ComplexMatrix back = matrix_from_json(j);
    CHECK(back.dim() == 2);
    CHECK(back.at(1, 0) == Complex{0, 3});

    const ComplexVector v(std::vector<Complex>{{0.5, 0.25}, {4, 0}});
    const ComplexVector vb = vector_from_json(to_json(v));
    CHECK(vb[0] == Complex{0.5, 0.25});
}

TEST_CASE("unknown keys are rejected") {
    Json j{{"dim", 1}, {"entries", Json::array({Json::array({1.0, 0.0})})}, {"extra", 1}};
    CHECK_THROWS_AS(matrix_from_json(j), ConfigError);
    Json missing{{"dim", 1}};
    CHECK_THROWS_AS(matrix_from_json(missing), ConfigError);
}

TEST_CASE("JordanSpec and GeneratedMatrix round trip losslessly") {
    JordanSpec spec;
    spec.blocks = {{Complex{0.5, -0.25}, 2}, {Complex{1, 0}, 1}};
    spec.transform_cond = 7.5;
    spec.seed = 12345;
    const JordanSpec back = spec_from_json(to_json(spec));
    CHECK(back.blocks.size() == 2);
    CHECK(back.blocks[0].lambda == spec.blocks[0].lambda);
    CHECK(back.blocks[0].d == 2);
    CHECK(back.transform_cond == 7.5);
    CHECK(back.seed == 12345);
    CHECK_FALSE(back.identity_transform);

    const GeneratedMatrix gm = generate(spec);
    const GeneratedMatrix gback = generated_from_json(to_json(gm));
    CHECK(gback.A.entries() == gm.A.entries());
    CHECK(gback.alpha == gm.alpha);
    CHECK(gback.kappa_bar_witness == gm.kappa_bar_witness);
    CHECK(gback.block_eigvecs[0].entries() == gm.block_eigvecs[0].entries());
    // serialized matrices reproduce reports bit for bit
    CHECK(to_json(gback).dump() == to_json(gm).dump());
}

TEST_CASE("curve JSON encoding") {
    CHECK(to_json(Curve::unit_circle())["kind"] == "unit_circle");
    const Json seg = to_json(Curve::real_segment(2.5));
    CHECK(seg["rho"] == 2.5);
    CHECK(curve_from_json(seg).rho() == 2.5);
    const Curve c = Curve::custom("x", [](double t) { return Complex{t, 0}; }, false);
    CHECK_THROWS_AS(to_json(c), ConfigError);
}

TEST_CASE("reports are deterministic for identical config and seed") {
    JordanSpec spec;
    spec.blocks = {{std::polar(1.0, 0.9), 1}};
    spec.transform_cond = 2.0;
    spec.seed = 3;
    const GeneratedMatrix gm = generate(spec);
    const EstimationConfig cfg = select_parameters(Problem::QEUE, 0.1, 0.5, 1.0, gm.alpha,
                                                   ParameterMode::feasible, 0.002, 12);
    const DiscretizedCurve dcurve = discretize(Curve::unit_circle(), cfg.a, cfg.delta);
    const ResolventSystem sys = build_system(gm, dcurve, Problem::QEUE);
    const ResolventState rs =
        resolvent_state(sys, input_state(gm, {Complex{1, 0}}, Problem::QEUE).psi);

    const std::string r1 = to_json(readout(rs, cfg, gm, 400, 99), false).dump();
    const std::string r2 = to_json(readout(rs, cfg, gm, 400, 99), false).dump();
    CHECK(r1 == r2);
    const std::string r3 = to_json(readout(rs, cfg, gm, 400, 100), false).dump();
    CHECK(r1 != r3);
    // reports embed the library version
    CHECK(r1.find("resolvex 0.1.0") != std::string::npos);
}

TEST_CASE("verify CSV has measured-vs-bound columns") {
    const SuiteResult res = run_suite("params", 1, 1);
    CHECK(res.passed());
    std::ostringstream os;
    write_csv(res, os);
    const std::string csv = os.str();
    CHECK(csv.find("suite,case,quantity,measured,bound,pass,note") == 0);
    CHECK(csv.find("params") != std::string::npos);
}

TEST_CASE("resolvent state export: joint gated on size, components always") {
    JordanSpec spec;
    spec.blocks = {{std::polar(1.0, 1.2), 1}};
    spec.identity_transform = true;
    const GeneratedMatrix gm = generate(spec);
    const DiscretizedCurve dcurve = discretize(Curve::unit_circle(), 6, 0.01);
    const ResolventSystem sys = build_system(gm, dcurve, Problem::QEUE);
    const ResolventState rs =
        resolvent_state(sys, input_state(gm, {Complex{1, 0}}, Problem::QEUE).psi);
    const Json full = to_json(rs);
    CHECK(full.contains("joint"));
    CHECK(full["joint"].size() == 64);
    CHECK(full["components"].size() == 1);
    const Json gated = to_json(rs, 16);  // cap below the joint size
    CHECK_FALSE(gated.contains("joint"));
    CHECK(gated["components"].size() == 1);
    CHECK(gated["norm"] == rs.norm);
}

TEST_CASE("kreiss estimate JSON shape") {
    KreissEstimate est;
    est.delta = 0.1;
    est.value = 1.0;
    est.argmax_z = Complex{1.1, 0.0};
    const Json j = to_json(est);
    CHECK(j["delta"] == 0.1);
    CHECK(j["value"] == 1.0);
    CHECK(j["argmax_z"][0] == 1.1);
    CHECK(j["analytic_bound"].is_null());
}
