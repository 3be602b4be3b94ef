#include "resolvex/json_io.hpp"

namespace resolvex {

std::string version_string() { return "resolvex 0.1.0"; }

namespace {

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

void require_keys(const Json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    for (const char* k : required)
        if (!j.contains(k)) throw ConfigError(std::string("missing key '") + k + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : required)
            if (it.key() == k) known = true;
        for (const char* k : optional)
            if (it.key() == k) known = true;
        if (!known) throw ConfigError("unknown key '" + it.key() + "'");
    }
}

Json to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (const auto& e : m.entries()) entries.push_back(complex_to_json(e));
    return Json{{"dim", m.dim()}, {"entries", std::move(entries)}};
}

Json to_json(const ComplexVector& v) {
    Json entries = Json::array();
    for (const auto& e : v.entries()) entries.push_back(complex_to_json(e));
    return Json{{"dim", v.dim()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    require_keys(j, {"dim", "entries"}, {});
    const std::size_t dim = j["dim"].get<std::size_t>();
    std::vector<Complex> entries;
    for (const auto& e : j["entries"]) entries.push_back(complex_from_json(e));
    return ComplexMatrix(dim, std::move(entries));
}

ComplexVector vector_from_json(const Json& j) {
    require_keys(j, {"dim", "entries"}, {});
    const std::size_t dim = j["dim"].get<std::size_t>();
    std::vector<Complex> entries;
    for (const auto& e : j["entries"]) entries.push_back(complex_from_json(e));
    if (entries.size() != dim) throw ConfigError("vector entry count does not match dim");
    return ComplexVector(std::move(entries));
}

Json to_json(const JordanSpec& spec) {
    Json blocks = Json::array();
    for (const auto& b : spec.blocks) blocks.push_back(Json::array({complex_to_json(b.lambda), b.d}));
    Json j{{"blocks", std::move(blocks)},
           {"transform_cond", spec.transform_cond},
           {"seed", spec.seed}};
    if (spec.identity_transform) j["identity_transform"] = true;
    return j;
}

JordanSpec spec_from_json(const Json& j) {
    require_keys(j, {"blocks", "transform_cond", "seed"}, {"identity_transform"});
    JordanSpec spec;
    for (const auto& b : j["blocks"]) {
        if (!b.is_array() || b.size() != 2) throw ConfigError("block must be [[re,im], d]");
        spec.blocks.push_back({complex_from_json(b[0]), b[1].get<int>()});
    }
    spec.transform_cond = j["transform_cond"].get<double>();
    spec.seed = j["seed"].get<std::uint64_t>();
    spec.identity_transform = j.value("identity_transform", false);
    spec.validate();
    return spec;
}

Json to_json(const GeneratedMatrix& gm) {
    Json eigvecs = Json::array();
    for (const auto& v : gm.block_eigvecs) eigvecs.push_back(to_json(v));
    return Json{{"spec", to_json(gm.spec)},
                {"A", to_json(gm.A)},
                {"T", to_json(gm.T)},
                {"T_inv", to_json(gm.T_inv)},
                {"subdiag_scale", gm.subdiag_scale},
                {"kappa_bar_witness", gm.kappa_bar_witness},
                {"alpha", gm.alpha},
                {"block_eigvecs", std::move(eigvecs)}};
}

GeneratedMatrix generated_from_json(const Json& j) {
    require_keys(j, {"spec", "A", "T", "T_inv", "subdiag_scale", "kappa_bar_witness", "alpha",
                     "block_eigvecs"},
                 {});
    GeneratedMatrix gm;
    gm.spec = spec_from_json(j["spec"]);
    gm.A = matrix_from_json(j["A"]);
    gm.T = matrix_from_json(j["T"]);
    gm.T_inv = matrix_from_json(j["T_inv"]);
    gm.subdiag_scale = j["subdiag_scale"].get<double>();
    gm.kappa_bar_witness = j["kappa_bar_witness"].get<double>();
    gm.alpha = j["alpha"].get<double>();
    for (const auto& v : j["block_eigvecs"]) gm.block_eigvecs.push_back(vector_from_json(v));
    if (gm.block_eigvecs.size() != gm.spec.blocks.size())
        throw ConfigError("eigenvector count does not match block count");
    return gm;
}

Json to_json(const Curve& curve) {
    if (curve.kind() == CurveKind::unit_circle) return Json{{"kind", "unit_circle"}};
    if (curve.kind() == CurveKind::real_segment)
        return Json{{"kind", "real_segment"}, {"rho", curve.rho()}};
    throw ConfigError("custom curves are registered programmatically only");
}

Curve curve_from_json(const Json& j) {
    require_keys(j, {"kind"}, {"rho"});
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "unit_circle") return Curve::unit_circle();
    if (kind == "real_segment") return Curve::real_segment(j.value("rho", 1.0));
    throw ConfigError("unknown curve kind '" + kind + "'");
}

Json to_json(const EstimationConfig& cfg) {
    return Json{{"problem", cfg.problem == Problem::QEUE ? "qeue" : "qere"},
                {"eps_eig", cfg.eps_eig},
                {"eps_st", cfg.eps_st},
                {"kappa_S", cfg.kappa_S},
                {"alpha_A", cfg.alpha_A},
                {"mode", cfg.mode == ParameterMode::strict_theorem ? "strict_theorem" : "feasible"},
                {"delta", cfg.delta},
                {"a", cfg.a},
                {"delta_user_set", cfg.delta_user_set},
                {"a_user_set", cfg.a_user_set},
                {"lemma_hypotheses_met", cfg.lemma_hypotheses_met},
                {"direct_feasible", cfg.direct_feasible},
                {"theta_ratio", cfg.theta_ratio},
                {"grid_lower_bound", cfg.grid_lower_bound()},
                {"window_halfwidth_t", cfg.window_halfwidth_t()},
                {"problem_header_halfwidth_t", cfg.problem_header_halfwidth_t()}};
}

Json to_json(const SuccessReport& rep) {
    Json eigs = Json::array();
    for (const auto& e : rep.eigs) {
        eigs.push_back(Json{{"lambda", complex_to_json(e.lambda)},
                            {"a_l", e.a_l},
                            {"b_l", e.b_l},
                            {"a_sq", e.a_sq},
                            {"b_sq", e.b_sq},
                            {"full_sq", e.full_sq},
                            {"window_integral", e.window_integral},
                            {"full_integral", e.full_integral},
                            {"interval_halfwidth", e.interval_halfwidth},
                            {"ratio_dev", e.ratio_dev},
                            {"path", e.path}});
    }
    Json j{{"eigs", std::move(eigs)},
           {"a_bound_lo", rep.a_bound_lo},
           {"a_bound_hi", rep.a_bound_hi},
           {"ratio_bound", rep.ratio_bound},
           {"b_bound", rep.b_bound},
           {"hypotheses_met", rep.hypotheses_met},
           {"bounds_hold", rep.bounds_hold}};
    if (rep.aggregates_computed) {
        j["psi1_norm"] = rep.psi1_norm;
        j["psi2_norm"] = rep.psi2_norm;
        j["psi3_norm"] = rep.psi3_norm;
        j["total_failure_mass"] = rep.total_failure_mass;
    }
    return j;
}

Json to_json(const EstimationReport& rep, bool with_timing) {
    Json modal = Json::array();
    for (const auto& m : rep.modal) {
        modal.push_back(Json{{"component", m.component},
                             {"j", m.j},
                             {"t", m.t},
                             {"estimate", m.estimate},
                             {"hits", m.hits}});
    }
    Json j{{"version", version_string()},
           {"config", to_json(rep.config)},
           {"n_samples", rep.n_samples},
           {"rng_seed", rep.rng_seed},
           {"empirical_failure_rate", rep.empirical_failure_rate},
           {"modal", std::move(modal)},
           {"success", to_json(rep.success)},
           {"cost", rep.cost}};
    if (!rep.note.empty()) j["note"] = rep.note;
    if (with_timing) j["wall_ms"] = rep.wall_ms;
    return j;
}

Json to_json(const ResolventState& rs, std::uint64_t joint_cap) {
    Json comps = Json::array();
    for (std::size_t l = 0; l < rs.components.size(); ++l) {
        const auto& c = rs.components[l];
        comps.push_back(Json{{"lambda", complex_to_json(c.lambda)},
                             {"beta", complex_to_json(c.beta)},
                             {"block", c.block},
                             {"eigvec", to_json(rs.eigvecs[l])}});
    }
    Json j{{"problem", rs.problem == Problem::QEUE ? "qeue" : "qere"},
           {"a", rs.dcurve.a()},
           {"delta", rs.dcurve.delta()},
           {"prefactor", rs.prefactor},
           {"norm", rs.norm},
           {"perturbed", rs.perturbed},
           {"components", std::move(comps)}};
    if (rs.materialized() && rs.joint.size() <= joint_cap) {
        Json joint = Json::array();
        for (const auto& e : rs.joint) joint.push_back(complex_to_json(e));
        j["joint"] = std::move(joint);
    }
    return j;
}

Json to_json(const KreissEstimate& est) {
    Json j{{"delta", est.delta},
           {"value", est.value},
           {"argmax_z", complex_to_json(est.argmax_z)},
           {"analytic_bound", est.analytic_bound ? Json(*est.analytic_bound) : Json(nullptr)},
           {"sampled_value", est.sampled_value},
           {"contour", est.contour == ContourKind::circle ? "circle" : "vertical_line"},
           {"samples", est.samples},
           {"refinement_passes", est.refinement_passes}};
    return j;
}

Json to_json(const ConformanceReport& rep) {
    return Json{{"family", rep.family},
                {"cond1_max_rel_deviation", rep.cond1_max_rel_deviation},
                {"cond2_constant", rep.cond2_constant},
                {"cond2_r2", rep.cond2_r2},
                {"cond2_max_ratio", rep.cond2_max_ratio},
                {"cond3_exponent", rep.cond3_exponent},
                {"pass1", rep.pass1},
                {"pass2", rep.pass2},
                {"pass3", rep.pass3},
                {"passed", rep.passed()},
                {"tol1", rep.tol1},
                {"r2_min", rep.r2_min},
                {"exponent_max", rep.exponent_max}};
}

Json to_json(const RadialSweep& sweep) {
    Json entries = Json::array();
    for (const auto& e : sweep.entries) {
        entries.push_back(Json{{"radius", e.radius},
                               {"success_mass", e.success_mass},
                               {"peak_t", e.peak_t},
                               {"peak_arg", e.peak_arg}});
    }
    return Json{{"entries", std::move(entries)}, {"best", sweep.best}};
}

} // namespace resolvex
