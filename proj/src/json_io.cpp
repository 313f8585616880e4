#include "afne/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace afne::io {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string at(const std::string& where, const std::string& key) { return where + "." + key; }

Index optional_dim(const json& j, const std::string& where, Index fallback) {
  return j.contains("dim") ? index_from_json(j["dim"], at(where, "dim")) : fallback;
}

Index required_dim(const json& j, const std::string& where, Index fallback) {
  const Index d = optional_dim(j, where, fallback);
  if (d < 1) throw SchemaError(where + ": dimension required (set \"dim\")");
  return d;
}

std::vector<OperatorExpr> operator_list(const json& j, const std::string& where,
                                        const ParseContext& ctx) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a nonempty array");
  std::vector<OperatorExpr> ops;
  for (std::size_t k = 0; k < j.size(); ++k) {
    ops.push_back(operator_from_json(j[k], ctx));
  }
  return ops;
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(number_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

OperatorExpr parse_operator(const json& j, const ParseContext& ctx) {
  const std::string where = "operator";
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const json& type_j = require(j, "type", where);
  if (!type_j.is_string()) throw SchemaError(where + ".type: expected a string");
  const std::string type = type_j.get<std::string>();
  const std::string here = where + "(" + type + ")";

  if (type == "identity") {
    check_keys(j, {"type", "dim"}, here);
    return identity(optional_dim(j, here, ctx.dim));
  }
  if (type == "scale") {
    check_keys(j, {"type", "lambda", "dim"}, here);
    return scale(number_from_json(require(j, "lambda", here), at(here, "lambda")),
                 optional_dim(j, here, ctx.dim));
  }
  if (type == "truncate") {
    check_keys(j, {"type", "k", "dim"}, here);
    return truncation_operator(index_from_json(require(j, "k", here), at(here, "k")),
                               required_dim(j, here, ctx.dim), ctx.sp);
  }
  if (type == "swap") {
    check_keys(j, {"type", "i", "j", "dim"}, here);
    return swap_isometry(index_from_json(require(j, "i", here), at(here, "i")),
                         index_from_json(require(j, "j", here), at(here, "j")),
                         required_dim(j, here, ctx.dim));
  }
  if (type == "activation") {
    check_keys(j, {"type", "fn"}, here);
    const json& fn = require(j, "fn", here);
    if (!fn.is_string()) throw SchemaError(at(here, "fn") + ": expected a string");
    return stable_activation(fn.get<std::string>());
  }
  if (type == "affine") {
    check_keys(j, {"type", "matrix", "offset", "rescale"}, here);
    Matrix W = matrix_from_json(require(j, "matrix", here), at(here, "matrix"));
    Vector b = j.contains("offset") ? vector_from_json(j["offset"], at(here, "offset"))
                                    : Vector::Zero(W.rows());
    bool rescale = false;
    if (j.contains("rescale")) {
      if (!j["rescale"].is_boolean()) throw SchemaError(at(here, "rescale") + ": expected a boolean");
      rescale = j["rescale"].get<bool>();
    }
    if (rescale) return guaranteed_nonexpansive_affine(W, b, ctx.sp.p);
    return affine(std::move(W), std::move(b), ctx.sp);
  }
  if (type == "averaged") {
    check_keys(j, {"type", "inner", "alpha"}, here);
    return averaged(operator_from_json(require(j, "inner", here), ctx),
                    number_from_json(require(j, "alpha", here), at(here, "alpha")));
  }
  if (type == "compose") {
    check_keys(j, {"type", "ops"}, here);
    return compose(operator_list(require(j, "ops", here), at(here, "ops"), ctx), ctx.sp);
  }
  if (type == "convex_combination") {
    check_keys(j, {"type", "ops", "weights"}, here);
    return convex_combination(operator_list(require(j, "ops", here), at(here, "ops"), ctx),
                              number_list(require(j, "weights", here), at(here, "weights")),
                              ctx.sp);
  }
  if (type == "resolvent") {
    check_keys(j, {"type", "inner", "lambda", "tol", "max_iter"}, here);
    const double tol = j.contains("tol") ? number_from_json(j["tol"], at(here, "tol")) : 1e-13;
    const std::size_t max_iter =
        j.contains("max_iter")
            ? static_cast<std::size_t>(index_from_json(j["max_iter"], at(here, "max_iter")))
            : 1000000;
    return resolvent_of(operator_from_json(require(j, "inner", here), ctx),
                        number_from_json(require(j, "lambda", here), at(here, "lambda")), ctx.sp,
                        tol, max_iter);
  }
  if (type == "contractive_projection") {
    check_keys(j, {"type", "isometry"}, here);
    return contractive_projection(operator_from_json(require(j, "isometry", here), ctx));
  }
  if (type == "neural_network") {
    check_keys(j, {"type", "layers", "activation"}, here);
    const json& fn = require(j, "activation", here);
    if (!fn.is_string()) throw SchemaError(at(here, "activation") + ": expected a string");
    return neural_network(operator_list(require(j, "layers", here), at(here, "layers"), ctx),
                          stable_activation(fn.get<std::string>()), ctx.sp);
  }
  throw SchemaError(where + ": unknown type \"" + type + "\"");
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw SchemaError(where + ": unknown key \"" + item.key() + "\"");
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(where + ": missing key \"" + std::string(key) + "\"");
  }
  return j[key];
}

double number_from_json(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(where + ": expected a finite number");
  return v;
}

Index index_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw SchemaError(where + ": expected a nonnegative integer");
  }
  return static_cast<Index>(j.get<long long>());
}

Vector vector_from_json(const json& j, const std::string& where) {
  const std::vector<double> values = number_list(j, where);
  if (values.empty()) throw SchemaError(where + ": expected a nonempty array");
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected an array of rows");
  const Index rows = static_cast<Index>(j.size());
  Matrix M;
  for (Index i = 0; i < rows; ++i) {
    const Vector row = vector_from_json(j[i], where + "[" + std::to_string(i) + "]");
    if (i == 0) M.resize(rows, row.size());
    if (row.size() != M.cols()) throw SchemaError(where + ": rows have different lengths");
    M.row(i) = row.transpose();
  }
  return M;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

OperatorExpr operator_from_json(const json& j, const ParseContext& ctx) {
  try {
    return parse_operator(j, ctx);
  } catch (const SchemaError&) {
    throw;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("operator: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("operator: ") + e.what());
  } catch (const std::domain_error& e) {
    throw SchemaError(std::string("operator: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw SchemaError(std::string("operator: ") + e.what());
  }
}

json operator_to_json(const OperatorExpr& T) {
  const OperatorNode& node = T.node();
  json out = std::visit(
      overloaded{
          [&](const expr::Identity&) { return json{{"type", "identity"}}; },
          [&](const expr::Affine& a) {
            json rows = json::array();
            for (Index i = 0; i < a.W.rows(); ++i) rows.push_back(to_json(a.W.row(i).transpose()));
            return json{{"type", "affine"}, {"matrix", rows}, {"offset", to_json(a.b)}};
          },
          [&](const expr::Scale& s) { return json{{"type", "scale"}, {"lambda", s.lambda}}; },
          [&](const expr::Truncate& t) { return json{{"type", "truncate"}, {"k", t.k}}; },
          [&](const expr::Swap& s) { return json{{"type", "swap"}, {"i", s.i}, {"j", s.j}}; },
          [&](const expr::Act& a) { return json{{"type", "activation"}, {"fn", to_string(a.fn)}}; },
          [&](const expr::Averaged& a) {
            return json{{"type", "averaged"}, {"inner", operator_to_json(a.inner)}, {"alpha", a.alpha}};
          },
          [&](const expr::Compose& c) {
            json ops = json::array();
            for (const auto& op : c.ops) ops.push_back(operator_to_json(op));
            return json{{"type", "compose"}, {"ops", ops}};
          },
          [&](const expr::ConvexCombo& c) {
            json ops = json::array();
            for (const auto& op : c.ops) ops.push_back(operator_to_json(op));
            return json{{"type", "convex_combination"}, {"ops", ops}, {"weights", c.weights}};
          },
          [&](const expr::Resolvent& r) {
            return json{{"type", "resolvent"},
                        {"inner", operator_to_json(r.inner)},
                        {"lambda", r.lambda},
                        {"tol", r.tol},
                        {"max_iter", r.max_iter}};
          },
          [&](const expr::ContractiveProjection& c) {
            return json{{"type", "contractive_projection"}, {"isometry", operator_to_json(c.isometry)}};
          },
      },
      node.kind);
  const bool sized = std::holds_alternative<expr::Identity>(node.kind) ||
                     std::holds_alternative<expr::Scale>(node.kind) ||
                     std::holds_alternative<expr::Truncate>(node.kind) ||
                     std::holds_alternative<expr::Swap>(node.kind);
  if (sized && node.dim > 0) out["dim"] = node.dim;
  return out;
}

ConvexSet convex_set_from_json(const json& j, const ParseContext& ctx) {
  const std::string where = "set";
  try {
    const json& type_j = require(j, "type", where);
    if (!type_j.is_string()) throw SchemaError(where + ".type: expected a string");
    const std::string type = type_j.get<std::string>();
    const std::string here = where + "(" + type + ")";
    if (type == "box") {
      check_keys(j, {"type", "lower", "upper"}, here);
      return ConvexSet::box(vector_from_json(require(j, "lower", here), at(here, "lower")),
                            vector_from_json(require(j, "upper", here), at(here, "upper")));
    }
    if (type == "affine_equal") {
      check_keys(j, {"type", "dim", "groups", "fixed"}, here);
      const Index dim = required_dim(j, here, ctx.dim);
      std::vector<std::vector<Index>> groups;
      if (j.contains("groups")) {
        for (const auto& g : j["groups"]) {
          std::vector<Index> members;
          for (const auto& m : g) members.push_back(index_from_json(m, at(here, "groups")));
          groups.push_back(std::move(members));
        }
      }
      std::vector<std::pair<Index, double>> fixed;
      if (j.contains("fixed")) {
        for (const auto& f : j["fixed"]) {
          if (!f.is_array() || f.size() != 2) throw SchemaError(at(here, "fixed") + ": expected [index, value]");
          fixed.emplace_back(index_from_json(f[0], at(here, "fixed")),
                             number_from_json(f[1], at(here, "fixed")));
        }
      }
      return ConvexSet::affine_equal(AffineEqual::make(dim, groups, fixed));
    }
    if (type == "ball") {
      check_keys(j, {"type", "center", "radius"}, here);
      return ConvexSet::ball(vector_from_json(require(j, "center", here), at(here, "center")),
                             number_from_json(require(j, "radius", here), at(here, "radius")),
                             ctx.sp.p);
    }
    if (type == "halfspace") {
      check_keys(j, {"type", "normal", "offset"}, here);
      return ConvexSet::halfspace(vector_from_json(require(j, "normal", here), at(here, "normal")),
                                  number_from_json(require(j, "offset", here), at(here, "offset")));
    }
    throw SchemaError(where + ": unknown type \"" + type + "\"");
  } catch (const SchemaError&) {
    throw;
  } catch (const json::exception& e) {
    throw SchemaError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

json affine_equal_to_json(const AffineEqual& A) {
  json fixed = json::array();
  for (const auto& [i, v] : A.fixed()) fixed.push_back(json::array({i, v}));
  return json{{"type", "affine_equal"}, {"dim", A.dim()}, {"groups", A.groups()}, {"fixed", fixed}};
}

json convex_set_to_json(const ConvexSet& C) {
  return std::visit(
      overloaded{
          [](const Box& b) {
            return json{{"type", "box"}, {"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}};
          },
          [](const AffineEqual& a) { return affine_equal_to_json(a); },
          [](const Ball& b) {
            return json{{"type", "ball"}, {"center", to_json(b.center)}, {"radius", b.radius}, {"p", b.p}};
          },
          [](const Halfspace& h) {
            return json{{"type", "halfspace"}, {"normal", to_json(h.normal)}, {"offset", h.offset}};
          },
      },
      C.kind());
}

Distribution distribution_from_json(const json& j) {
  const std::string where = "distribution";
  const json& kind_j = require(j, "kind", where);
  if (!kind_j.is_string()) throw SchemaError(where + ".kind: expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "uniform") {
    check_keys(j, {"kind", "low", "high"}, where);
    const double low = j.contains("low") ? number_from_json(j["low"], at(where, "low")) : -10.0;
    const double high = j.contains("high") ? number_from_json(j["high"], at(where, "high")) : 10.0;
    if (!(low < high)) throw SchemaError(where + ": low must be below high");
    return Distribution::uniform(low, high);
  }
  if (kind == "gaussian") {
    check_keys(j, {"kind", "stddev"}, where);
    const double sd = j.contains("stddev") ? number_from_json(j["stddev"], at(where, "stddev")) : 1.0;
    if (!(sd > 0.0)) throw SchemaError(where + ": stddev must be positive");
    return Distribution::gaussian(sd);
  }
  throw SchemaError(where + ": unknown kind \"" + kind + "\"");
}

StopRule stop_rule_from_json(const json& j) {
  const std::string where = "stop";
  check_keys(j, {"step_tol", "max_iter"}, where);
  StopRule s;
  if (j.contains("step_tol")) s.step_tol = number_from_json(j["step_tol"], at(where, "step_tol"));
  if (j.contains("max_iter")) {
    s.max_iter = static_cast<std::size_t>(index_from_json(j["max_iter"], at(where, "max_iter")));
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
  return s;
}

json meta_to_json(const OperatorMeta& meta) {
  json out{{"nonexpansive", meta.nonexpansive == Proof::proven ? "proven" : "unknown"},
           {"alpha_firm", optional_number(meta.alpha_firm)},
           {"averaged_alpha", optional_number(meta.averaged_alpha)}};
  out["fixed_set"] = meta.fixed_set ? affine_equal_to_json(*meta.fixed_set) : json(nullptr);
  return out;
}

json cert_report_to_json(const CertReport& rep) {
  json out{{"property", to_string(rep.property)},
           {"passed", rep.passed},
           {"samples", rep.samples},
           {"degenerate_pairs", rep.degenerate},
           {"alpha", optional_number(rep.alpha)},
           {"tolerance", rep.tolerance},
           {"worst_residual", rep.worst_residual},
           {"worst_relative", rep.worst_relative},
           {"estimated_min_alpha", optional_number(rep.estimated_min_alpha)},
           {"alpha_unattainable", rep.alpha_unattainable}};
  if (rep.witness) {
    out["witness"] = json{{"x", to_json(rep.witness->first)}, {"y", to_json(rep.witness->second)}};
  } else {
    out["witness"] = nullptr;
  }
  if (!rep.w_grid.empty()) {
    json grid = json::array();
    for (std::size_t k = 0; k < rep.w_grid.size(); ++k) {
      grid.push_back(json{{"w", rep.w_grid[k]}, {"passed", static_cast<bool>(rep.w_passed[k])}});
    }
    out["w_grid"] = grid;
    out["implied_alphas"] = rep.implied_alphas;
  }
  return out;
}

}  // namespace afne::io
