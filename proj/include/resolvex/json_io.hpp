#pragma once

#include <string>

#include <json.hpp>

#include "resolvex/estimator.hpp"
#include "resolvex/kreiss.hpp"
#include "resolvex/paramcurve.hpp"

// JSON wire formats. Matrices and vectors use {"dim": n, "entries": [[re,im],...]}
// row-major; JordanSpec uses {"blocks": [[[re,im], d], ...], "transform_cond": c,
// "seed": s} with an optional "identity_transform".

namespace resolvex {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& m);
Json to_json(const ComplexVector& v);
Json to_json(const JordanSpec& spec);
Json to_json(const GeneratedMatrix& gm);
Json to_json(const Curve& curve);
Json to_json(const EstimationConfig& cfg);
Json to_json(const SuccessReport& rep);
Json to_json(const EstimationReport& rep, bool with_timing = false);
// Ancilla-major [re, im] pairs; the joint array is included only when its
// entry count stays within joint_cap, per-eigenvalue components always are.
Json to_json(const ResolventState& rs, std::uint64_t joint_cap = std::uint64_t(1) << 22);
Json to_json(const KreissEstimate& est);
Json to_json(const ConformanceReport& rep);
Json to_json(const RadialSweep& sweep);

ComplexMatrix matrix_from_json(const Json& j);
ComplexVector vector_from_json(const Json& j);
JordanSpec spec_from_json(const Json& j);
GeneratedMatrix generated_from_json(const Json& j);
Curve curve_from_json(const Json& j);

// Strict key checking: unknown keys throw ConfigError.
void require_keys(const Json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional);

std::string version_string();

} // namespace resolvex
