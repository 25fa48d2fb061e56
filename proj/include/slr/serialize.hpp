#pragma once

#include "slr/certificate.hpp"
#include "slr/ensembles.hpp"
#include "slr/experiments.hpp"
#include "slr/solver.hpp"

#include <json.hpp>

namespace slr {

using Json = nlohmann::json;

// JSON views of the result types. Field names are part of the tool contract;
// optional quantities serialize as null so the schema is stable.

Json toJson(const GammaRange& range);          // lower, upper, recommended, valid
Json toJson(const DecompositionResult& r);     // scalar fields only
Json toJson(const CertificateResult& r);       // includes q_hat row-major
Json toJson(const IncoherenceReport& r);
Json toJson(const LemmaReport& r);
Json toJson(const SweepResult& r);
Json toJson(const RigidityResult& r);
Json toJson(const OptimalityReport& r);

}  // namespace slr
