#pragma once

// JSON documents for operators, sets, samplers and reports. Readers reject
// unknown keys so that a misspelled option never passes silently.

#include <initializer_list>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "afne/certify.hpp"
#include "afne/dynamics.hpp"
#include "afne/operators.hpp"
#include "afne/projections.hpp"

namespace afne::io {

using json = nlohmann::json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Defaults applied while reading operator and set descriptions.
struct ParseContext {
  SpaceParams sp = space_params(2.0);
  /// Dimension used by atoms that do not state their own.
  Index dim = 0;
};

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where);
const json& require(const json& j, const char* key, const std::string& where);

double number_from_json(const json& j, const std::string& where);
Index index_from_json(const json& j, const std::string& where);
Vector vector_from_json(const json& j, const std::string& where);
Matrix matrix_from_json(const json& j, const std::string& where);

json to_json(const Vector& v);

/// {"type": "identity" | "scale" | "truncate" | "swap" | "activation" | "affine" |
///  "averaged" | "compose" | "convex_combination" | "resolvent" |
///  "contractive_projection" | "neural_network", ...}
OperatorExpr operator_from_json(const json& j, const ParseContext& ctx);
json operator_to_json(const OperatorExpr& T);

/// {"type": "box" | "affine_equal" | "ball" | "halfspace", ...}; balls use ctx.sp.p.
ConvexSet convex_set_from_json(const json& j, const ParseContext& ctx);
json convex_set_to_json(const ConvexSet& C);
json affine_equal_to_json(const AffineEqual& A);

Distribution distribution_from_json(const json& j);
StopRule stop_rule_from_json(const json& j);

json cert_report_to_json(const CertReport& rep);
json meta_to_json(const OperatorMeta& meta);

}  // namespace afne::io
