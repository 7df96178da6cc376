#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "spinorbench/checks.hpp"

namespace spinorbench {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "spinorbench/1";

// JSON text with every float at 17 significant digits; non-finite values become null.
std::string dump_json(const Json& j, int indent = 2);

// ---- value I/O ------------------------------------------------------------------------

// { "degree": p, "terms": [ { "idx": [...], "c": value }, ... ] }
Json to_json(const PForm& w);
PForm pform_from_json(const Json& j, const Signature& sig);

// { "gram": [[...]], "b": [[...]] }
Json to_json(const SkewOperator& op);
SkewOperator operator_from_json(const Json& j);
SkewOperator operator_from_text(const std::string& text);

Json to_json(const Check& c);
Json to_json(const std::vector<Check>& cs);
Json to_json(const RMat& m);
Json to_json(const RVec& v);
Json to_json(cplx z);  // [re, im]
Json to_json(const Block& b);
Json to_json(const BlockDecomposition& d);

Json catalog_manifest();

// ---- pipelines --------------------------------------------------------------------------

struct RunConfig {
  std::string command;
  std::string chart;
  std::string spinor;
  std::optional<cplx> lambda;
  std::uint64_t seed = 1;
  int samples = 50;
  Tolerances tol;
  std::vector<std::string> tol_overrides;  // echoed verbatim
  bool timing = false;
};

struct Report {
  Json body;
  bool pass = false;
};

// Stable 64-bit FNV-1a digest of the canonical inputs, as hex.
std::string inputs_digest(const Json& inputs);

Report classify_report(const SkewOperator& op, const RunConfig& cfg);
Report verify_killing_report(const RunConfig& cfg);
Report lift_cone_report(const RunConfig& cfg);

}  // namespace spinorbench
