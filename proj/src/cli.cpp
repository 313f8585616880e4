#include "afne/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "afne/certify.hpp"
#include "afne/dynamics.hpp"
#include "afne/feasibility.hpp"
#include "afne/json_io.hpp"
#include "csv_format.hpp"

namespace afne::cli {
namespace {

using io::json;
using io::SchemaError;
using detail::format_double;

constexpr double kFejerSlack = 1e-12;
constexpr double kMembershipTol = 1e-8;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<long long> dim;
  std::optional<double> p;
};

struct Run {
  json config;
  io::ParseContext ctx;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("config: expected a JSON object");
  return j;
}

Run prepare(const Flags& flags, std::initializer_list<const char*> command_keys) {
  Run run;
  run.config = read_config(flags.config);
  const json& c = run.config;
  std::vector<const char*> allowed{"p", "dim", "seed", "out"};
  allowed.insert(allowed.end(), command_keys.begin(), command_keys.end());
  for (const auto& item : c.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; }) == allowed.end()) {
      throw SchemaError("config: unknown key \"" + item.key() + "\"");
    }
  }

  double p = 2.0;
  if (flags.p) {
    p = *flags.p;
  } else if (c.contains("p")) {
    p = io::number_from_json(c["p"], "config.p");
  }
  try {
    run.ctx.sp = space_params(p);
  } catch (const std::domain_error& e) {
    throw SchemaError(std::string("config.p: ") + e.what());
  }

  if (flags.dim) {
    if (*flags.dim < 1) throw SchemaError("--dim must be positive");
    run.ctx.dim = static_cast<Index>(*flags.dim);
  } else if (c.contains("dim")) {
    run.ctx.dim = io::index_from_json(c["dim"], "config.dim");
  }

  if (flags.seed) {
    run.seed = *flags.seed;
  } else if (c.contains("seed")) {
    if (!c["seed"].is_number_unsigned()) throw SchemaError("config.seed: expected a nonnegative integer");
    run.seed = c["seed"].get<std::uint64_t>();
  }

  if (flags.out) {
    run.out = *flags.out;
  } else if (c.contains("out")) {
    if (!c["out"].is_string()) throw SchemaError("config.out: expected a string");
    run.out = c["out"].get<std::string>();
  } else {
    run.out = "afne_out";
  }
  std::filesystem::create_directories(run.out);
  return run;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json header(const Run& run, const char* command) {
  return json{{"command", command}, {"p", run.ctx.sp.p}, {"seed", run.seed}};
}

Index operator_dim(const OperatorExpr& T, const Run& run) {
  const Index d = T.dim();
  if (d != 0 && run.ctx.dim != 0 && d != run.ctx.dim) {
    throw SchemaError("operator dimension " + std::to_string(d) + " differs from dim " +
                      std::to_string(run.ctx.dim));
  }
  const Index dim = d != 0 ? d : run.ctx.dim;
  if (dim < 1) throw SchemaError("dimension unknown; set \"dim\" or --dim");
  return dim;
}

Vector point(const json& c, const char* key, Index dim, const std::string& where) {
  Vector x = io::vector_from_json(io::require(c, key, where), where + "." + key);
  if (dim != 0 && x.size() != dim) {
    throw SchemaError(where + "." + key + ": expected " + std::to_string(dim) + " coordinates");
  }
  return x;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  return os.str();
}

json trajectory_summary(const Trajectory& tr) {
  const double fv = fejer_violation(tr);
  return json{{"iterations", tr.steps()},
              {"converged", tr.converged},
              {"stop_reason", to_string(tr.stop_reason)},
              {"final_step", tr.step_norms.empty() ? 0.0 : tr.step_norms.back()},
              {"limit", io::to_json(tr.limit())},
              {"tracked_points", tr.tracked_points.size()},
              {"fejer_violation", tr.fejer_distances.empty() ? json(nullptr) : json(fv)},
              {"fejer_ok", tr.fejer_distances.empty() || fv <= kFejerSlack}};
}

// ---- certify ------------------------------------------------------------------

int cmd_certify(const Flags& flags, std::ostream& out) {
  Run run = prepare(flags, {"operator", "property", "alpha", "samples", "tolerance",
                            "distribution", "w_grid", "domain"});
  const json& c = run.config;
  const OperatorExpr T = io::operator_from_json(io::require(c, "operator", "config"), run.ctx);
  const Index dim = operator_dim(T, run);
  run.ctx.dim = dim;

  const json& prop_j = io::require(c, "property", "config");
  if (!prop_j.is_string()) throw SchemaError("config.property: expected a string");
  Property property;
  try {
    property = parse_property(prop_j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("config.property: ") + e.what());
  }

  const std::size_t n = c.contains("samples")
                            ? static_cast<std::size_t>(io::index_from_json(c["samples"], "config.samples"))
                            : 10000;
  const double tol = c.contains("tolerance") ? io::number_from_json(c["tolerance"], "config.tolerance")
                                             : kDefaultCertTolerance;
  const Distribution dist = c.contains("distribution") ? io::distribution_from_json(c["distribution"])
                                                       : Distribution{};
  Sampler::Constraint domain;
  if (c.contains("domain")) domain = io::convex_set_from_json(c["domain"], run.ctx);

  auto alpha_of = [&]() {
    const json& a = io::require(c, "alpha", "config");
    if (a.is_string() && a.get<std::string>() == "propagated") {
      if (!T.meta().alpha_firm) throw SchemaError("config.alpha: operator carries no propagated constant");
      return *T.meta().alpha_firm;
    }
    const double alpha = io::number_from_json(a, "config.alpha");
    if (!(alpha > 0.0 && alpha < 1.0)) throw SchemaError("config.alpha: must lie in (0,1)");
    return alpha;
  };

  Sampler sampler(run.seed, dim, dist, domain);
  CertReport rep;
  switch (property) {
    case Property::nonexpansive:
      rep = certify_nonexpansive(T, run.ctx.sp.p, sampler, n, tol);
      break;
    case Property::alpha_firm:
      rep = certify_alpha_firm(T, alpha_of(), run.ctx.sp, sampler, n, tol);
      break;
    case Property::quasi_alpha_firm: {
      if (!T.meta().fixed_set) throw SchemaError("quasi_alpha_firm needs an operator with a known fixed set");
      Sampler fix = fixed_set_sampler(T, run.seed + 1, dist);
      rep = certify_quasi_alpha_firm(T, alpha_of(), run.ctx.sp, fix, sampler, n, tol);
      break;
    }
    case Property::bruck_firm: {
      std::vector<double> grid = default_w_grid();
      if (c.contains("w_grid")) {
        const Vector g = io::vector_from_json(c["w_grid"], "config.w_grid");
        grid.assign(g.data(), g.data() + g.size());
      }
      rep = certify_bruck_firm(T, run.ctx.sp.p, sampler, grid, n, tol);
      break;
    }
  }

  json doc = header(run, "certify");
  doc["dim"] = dim;
  doc["operator"] = io::operator_to_json(T);
  doc["meta"] = io::meta_to_json(T.meta());
  doc["report"] = io::cert_report_to_json(rep);
  write_json(run.out / "certify_report.json", doc);
  out << "certify " << to_string(property) << ": " << (rep.passed ? "PASS" : "FAIL")
      << " worst_relative=" << format_double(rep.worst_relative) << "\n";
  return rep.passed ? kPass : kPropertyFailed;
}

// ---- iterate ------------------------------------------------------------------

int cmd_iterate(const Flags& flags, std::ostream& out) {
  Run run = prepare(flags, {"operator", "x0", "stop", "track", "auto_track"});
  const json& c = run.config;
  const OperatorExpr T = io::operator_from_json(io::require(c, "operator", "config"), run.ctx);
  const Vector x0 = point(c, "x0", T.dim(), "config");
  const StopRule stop = c.contains("stop") ? io::stop_rule_from_json(c["stop"]) : StopRule{};

  MonitorConfig monitors;
  monitors.seed = run.seed;
  monitors.auto_track = c.contains("auto_track")
                            ? static_cast<std::size_t>(io::index_from_json(c["auto_track"], "config.auto_track"))
                            : 5;
  if (c.contains("track")) {
    if (!c["track"].is_array()) throw SchemaError("config.track: expected an array of points");
    for (const auto& y : c["track"]) {
      Vector v = io::vector_from_json(y, "config.track");
      if (v.size() != x0.size()) throw SchemaError("config.track: point dimension differs from x0");
      monitors.tracked_points.push_back(std::move(v));
    }
  }

  json doc = header(run, "iterate");
  doc["operator"] = io::operator_to_json(T);
  doc["meta"] = io::meta_to_json(T.meta());
  try {
    const Trajectory tr = picard_iterate(T, x0, stop, monitors, run.ctx.sp);
    write_text(run.out / "iterate.csv", trajectory_csv(tr));
    doc["trajectory"] = trajectory_summary(tr);
    const RegularityReport reg = asymptotic_regularity_report(tr, T.meta(), run.ctx.sp, stop.step_tol);
    json bounds = json::array();
    for (const auto& b : reg.bounds) {
      bounds.push_back(json{{"lhs", b.lhs}, {"rhs", b.rhs}, {"slack", b.slack}, {"holds", b.holds}});
    }
    doc["regularity"] = json{{"regular", reg.regular},
                             {"bound_checked", reg.bound_checked},
                             {"constant", reg.bound_checked ? json(reg.constant) : json(nullptr)},
                             {"bounds", bounds},
                             {"note", reg.note}};
    write_json(run.out / "iterate_summary.json", doc);
    out << "iterate: " << tr.steps() << " steps, " << (tr.converged ? "converged" : "not converged")
        << "\n";
    if (!tr.converged) return kNumericFailure;
    const bool monitors_ok = doc["trajectory"]["fejer_ok"].get<bool>() &&
                             (!reg.bound_checked || reg.bounds_hold());
    return monitors_ok ? kPass : kPropertyFailed;
  } catch (const DivergenceError& e) {
    write_text(run.out / "iterate.csv", trajectory_csv(e.partial()));
    doc["trajectory"] = trajectory_summary(e.partial());
    doc["error"] = e.what();
    write_json(run.out / "iterate_summary.json", doc);
    throw;
  }
}

// ---- resolvent ----------------------------------------------------------------

int cmd_resolvent(const Flags& flags, std::ostream& out) {
  Run run = prepare(flags, {"operator", "lambda", "x", "tol", "max_iter"});
  const json& c = run.config;
  const OperatorExpr F = io::operator_from_json(io::require(c, "operator", "config"), run.ctx);
  const Vector x = point(c, "x", F.dim(), "config");

  const json& lj = io::require(c, "lambda", "config");
  std::vector<double> lambdas;
  if (lj.is_array()) {
    const Vector l = io::vector_from_json(lj, "config.lambda");
    lambdas.assign(l.data(), l.data() + l.size());
  } else {
    lambdas.push_back(io::number_from_json(lj, "config.lambda"));
  }
  for (double l : lambdas) {
    if (l < 0.0) throw SchemaError("config.lambda: must be nonnegative");
  }

  ResolventOptions opts;
  opts.p = run.ctx.sp.p;
  if (c.contains("tol")) opts.tol = io::number_from_json(c["tol"], "config.tol");
  if (c.contains("max_iter")) {
    opts.max_iter = static_cast<std::size_t>(io::index_from_json(c["max_iter"], "config.max_iter"));
  }

  std::ostringstream csv;
  csv << "lambda,iterations,residual";
  for (Index i = 0; i < x.size(); ++i) csv << ",r_" << i + 1;
  csv << '\n';
  json rows = json::array();
  for (double l : lambdas) {
    const ResolventResult r = resolvent_apply(F, l, x, opts);
    csv << format_double(l) << ',' << r.iterations << ',' << format_double(r.residual);
    for (Index i = 0; i < x.size(); ++i) csv << ',' << format_double(r.value[i]);
    csv << '\n';
    rows.push_back(json{{"lambda", l}, {"iterations", r.iterations}, {"residual", r.residual},
                        {"value", io::to_json(r.value)}});
  }
  write_text(run.out / "resolvent.csv", csv.str());

  json doc = header(run, "resolvent");
  doc["operator"] = io::operator_to_json(F);
  doc["x"] = io::to_json(x);
  doc["results"] = rows;
  if (F.meta().nonexpansive != Proof::proven) {
    doc["warning"] = "F is not proven nonexpansive; convergence of the inner iteration is not guaranteed";
  }
  write_json(run.out / "resolvent_summary.json", doc);
  out << "resolvent: " << lambdas.size() << " value(s) computed\n";
  return kPass;
}

// ---- semigroup ----------------------------------------------------------------

int cmd_semigroup(const Flags& flags, std::ostream& out) {
  Run run = prepare(flags, {"operator", "t", "x", "schedule", "tol", "reference", "resolvent_tol"});
  const json& c = run.config;
  const OperatorExpr F = io::operator_from_json(io::require(c, "operator", "config"), run.ctx);
  const Vector x = point(c, "x", F.dim(), "config");
  const double t = io::number_from_json(io::require(c, "t", "config"), "config.t");
  if (t < 0.0) throw SchemaError("config.t: must be nonnegative");

  const json& sj = io::require(c, "schedule", "config");
  if (!sj.is_array() || sj.empty()) throw SchemaError("config.schedule: expected a nonempty array");
  std::vector<std::size_t> schedule;
  for (const auto& n : sj) schedule.push_back(static_cast<std::size_t>(io::index_from_json(n, "config.schedule")));
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] < 1 || (k > 0 && schedule[k] <= schedule[k - 1])) {
      throw SchemaError("config.schedule: must be strictly increasing and start at 1 or more");
    }
  }
  const double tol = c.contains("tol") ? io::number_from_json(c["tol"], "config.tol") : 1e-6;
  std::optional<Vector> reference;
  if (c.contains("reference")) reference = point(c, "reference", x.size(), "config");
  const double inner_tol = c.contains("resolvent_tol")
                               ? io::number_from_json(c["resolvent_tol"], "config.resolvent_tol")
                               : 1e-13;
  const SemigroupEstimate est = semigroup_limit_estimate(F, t, x, schedule, tol, run.ctx.sp, inner_tol);

  const double xnorm = lp_norm(x, run.ctx.sp.p);
  std::vector<double> errors;
  if (reference) {
    for (const auto& v : est.values) {
      const double e = lp_norm((v - *reference).eval(), run.ctx.sp.p);
      errors.push_back(xnorm > 0.0 ? e / xnorm : e);
    }
  }

  std::ostringstream csv;
  csv << "n,t,difference";
  if (reference) csv << ",relative_error";
  for (Index i = 0; i < x.size(); ++i) csv << ",value_" << i + 1;
  csv << '\n';
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    csv << schedule[k] << ',' << format_double(t) << ',';
    if (k > 0) csv << format_double(est.differences[k]);
    if (reference) csv << ',' << format_double(errors[k]);
    for (Index i = 0; i < x.size(); ++i) csv << ',' << format_double(est.values[k][i]);
    csv << '\n';
  }
  write_text(run.out / "semigroup.csv", csv.str());

  json doc = header(run, "semigroup");
  doc["operator"] = io::operator_to_json(F);
  doc["t"] = t;
  doc["schedule"] = schedule;
  doc["cauchy"] = est.cauchy;
  doc["limit"] = io::to_json(est.limit);
  if (reference) {
    json ratios = json::array();
    for (std::size_t k = 1; k < errors.size(); ++k) {
      ratios.push_back(errors[k - 1] > 0.0 ? json(errors[k] / errors[k - 1]) : json(nullptr));
    }
    doc["relative_errors"] = errors;
    doc["error_ratios"] = ratios;
  }
  write_json(run.out / "semigroup_summary.json", doc);
  out << "semigroup: " << schedule.size() << " products, " << (est.cauchy ? "cauchy" : "not cauchy")
      << "\n";
  return kPass;
}

// ---- feasibility --------------------------------------------------------------

OperatorExpr isometry_from_json(const json& j, Index dim, const io::ParseContext& ctx) {
  const std::string where = "config.isometries[]";
  if (j.contains("swap")) {
    io::check_keys(j, {"swap"}, where);
    const json& s = j["swap"];
    if (!s.is_array() || s.size() != 2) throw SchemaError(where + ".swap: expected [i, j]");
    try {
      return swap_isometry(io::index_from_json(s[0], where), io::index_from_json(s[1], where), dim);
    } catch (const std::out_of_range& e) {
      throw SchemaError(where + ".swap: " + e.what());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(where + ".swap: " + e.what());
    }
  }
  io::check_keys(j, {"matrix", "offset"}, where);
  const Matrix W = io::matrix_from_json(io::require(j, "matrix", where), where + ".matrix");
  const Vector b = j.contains("offset") ? io::vector_from_json(j["offset"], where + ".offset")
                                        : Vector::Zero(W.rows());
  if (W.rows() != dim || W.cols() != dim || b.size() != dim) {
    throw SchemaError(where + ": matrix and offset must match the dimension of x0");
  }
  return affine(W, b, ctx.sp);
}

int cmd_feasibility(const Flags& flags, std::ostream& out) {
  Run run = prepare(flags, {"isometries", "x0", "mode", "weights", "stop", "tracked", "witness"});
  const json& c = run.config;
  const Vector x0 = point(c, "x0", run.ctx.dim, "config");
  const Index dim = x0.size();
  const SpaceParams& sp = run.ctx.sp;

  std::string mode = "alternating";
  if (c.contains("mode")) {
    if (!c["mode"].is_string()) throw SchemaError("config.mode: expected a string");
    mode = c["mode"].get<std::string>();
  }
  if (mode != "alternating" && mode != "averaged") {
    throw SchemaError("config.mode: expected \"alternating\" or \"averaged\"");
  }

  FeasibilityOptions opts;
  opts.seed = run.seed;
  if (c.contains("stop")) opts.stop = io::stop_rule_from_json(c["stop"]);
  if (c.contains("tracked")) {
    opts.tracked = static_cast<std::size_t>(io::index_from_json(c["tracked"], "config.tracked"));
  }
  if (c.contains("witness")) opts.witness = point(c, "witness", dim, "config");

  const json& iso = io::require(c, "isometries", "config");
  if (!iso.is_array() || iso.empty()) throw SchemaError("config.isometries: expected a nonempty array");
  std::vector<double> weights;
  if (mode == "averaged") {
    const Vector w = io::vector_from_json(io::require(c, "weights", "config"), "config.weights");
    weights.assign(w.data(), w.data() + w.size());
    if (weights.size() != iso.size()) throw SchemaError("config.weights: one weight per isometry");
    double sum = 0.0;
    for (double v : weights) {
      if (!(v > 0.0 && v < 1.0)) throw SchemaError("config.weights: every weight must lie in (0,1)");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw SchemaError("config.weights: must sum to 1");
  } else if (c.contains("weights")) {
    throw SchemaError("config.weights: only used with mode \"averaged\"");
  }

  json doc = header(run, "feasibility");
  doc["mode"] = mode;
  auto fail = [&](const std::string& reason, int code) {
    doc["error"] = reason;
    write_json(run.out / "feasibility_summary.json", doc);
    out << "feasibility: " << reason << "\n";
    return code;
  };

  std::vector<ContractiveProjectionSpec> specs;
  for (std::size_t k = 0; k < iso.size(); ++k) {
    const OperatorExpr U = isometry_from_json(iso[k], dim, run.ctx);
    IsometryCheckOptions check;
    check.seed = run.seed + k;
    try {
      specs.push_back(projection_from_isometry(U, sp, dim, check));
    } catch (const IsometryRejected& e) {
      doc["witness"] = io::to_json(e.witness());
      return fail("isometry " + std::to_string(k) + " rejected: " + e.what(), kPropertyFailed);
    }
  }

  FeasibilityResult res;
  try {
    res = mode == "averaged" ? averaged_projections(specs, weights, x0, sp, opts)
                             : alternating_projections(specs, x0, sp, opts);
  } catch (const EmptyIntersection& e) {
    return fail(e.what(), kPropertyFailed);
  } catch (const DivergenceError& e) {
    write_text(run.out / "feasibility.csv", trajectory_csv(e.partial()));
    return fail(e.what(), kNumericFailure);
  }

  const Trajectory& tr = res.trajectory;
  write_text(run.out / "feasibility.csv", trajectory_csv(tr));
  doc["trajectory"] = trajectory_summary(tr);
  doc["intersection"] = res.intersection ? io::affine_equal_to_json(*res.intersection) : json(nullptr);
  const double scale = std::max(1.0, lp_norm(tr.limit(), sp.p));
  bool members_ok = true;
  for (double r : res.membership_residuals) members_ok = members_ok && r <= kMembershipTol * scale;
  doc["membership_residuals"] = res.membership_residuals;
  doc["membership_ok"] = members_ok;
  write_json(run.out / "feasibility_summary.json", doc);

  out << "feasibility (" << mode << "): " << tr.steps() << " steps, "
      << (tr.converged ? "converged" : "not converged") << "\n";
  if (!tr.converged) return kNumericFailure;
  return members_ok && doc["trajectory"]["fejer_ok"].get<bool>() ? kPass : kPropertyFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certification and iteration experiments for alpha-firmly nonexpansive operators"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    std::function<int(const Flags&, std::ostream&)> body;
  };
  const std::vector<Command> commands{
      {"certify", "sampled certification of an operator property", cmd_certify},
      {"iterate", "Picard iteration with Fejer and regularity monitors", cmd_iterate},
      {"resolvent", "evaluate resolvents (Id + lambda(Id - F))^-1 x", cmd_resolvent},
      {"semigroup", "exponential-formula products R_{t/n}^n x", cmd_semigroup},
      {"feasibility", "alternating or averaged contractive projections", cmd_feasibility},
  };

  std::vector<Flags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k].name, commands[k].help);
    sub->add_option("--config", flags[k].config, "JSON experiment config")->required();
    sub->add_option("--seed", flags[k].seed, "sampler seed (overrides config)");
    sub->add_option("--out", flags[k].out, "output directory (overrides config)");
    sub->add_option("--dim", flags[k].dim, "dimension (overrides config)");
    sub->add_option("--p", flags[k].p, "exponent of l_p (overrides config)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  for (std::size_t k = 0; k < commands.size(); ++k) {
    if (!subs[k]->parsed()) continue;
    try {
      return commands[k].body(flags[k], out);
    } catch (const SchemaError& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const DivergenceError& e) {
      err << "diverged: " << e.what() << "\n";
      return kNumericFailure;
    } catch (const ResolventError& e) {
      err << "resolvent failure: " << e.what() << "\n";
      return kNumericFailure;
    } catch (const ProjectionError& e) {
      err << "projection failure: " << e.what() << "\n";
      return kNumericFailure;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::domain_error& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::out_of_range& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      err << "failure: " << e.what() << "\n";
      return kNumericFailure;
    }
  }
  return kUsage;
}

}  // namespace afne::cli
