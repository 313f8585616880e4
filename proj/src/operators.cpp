#include "afne/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "afne/dynamics.hpp"

namespace afne {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

OperatorExpr make(OperatorNode::Kind kind, Index dim, OperatorMeta meta) {
  return OperatorExpr(std::make_shared<const OperatorNode>(
      OperatorNode{std::move(kind), dim, std::move(meta)}));
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("averaging constant must lie in (0,1), got " + std::to_string(alpha));
  }
}

Index common_dim(const std::vector<OperatorExpr>& ops) {
  Index dim = 0;
  for (const auto& op : ops) {
    if (op.dim() == 0) continue;
    if (dim != 0 && op.dim() != dim) {
      throw std::invalid_argument("operators act on different dimensions: " + std::to_string(dim) +
                                  " vs " + std::to_string(op.dim()));
    }
    dim = op.dim();
  }
  return dim;
}

bool all_nonexpansive(const std::vector<OperatorExpr>& ops) {
  return std::all_of(ops.begin(), ops.end(),
                     [](const auto& op) { return op.meta().nonexpansive == Proof::proven; });
}

// Fix of a composition or combination of quasi alpha-firm maps is the
// intersection of the operands' fixed sets, provided that is nonempty.
std::optional<AffineEqual> fixed_set_intersection(const std::vector<const OperatorExpr*>& ops) {
  if (ops.empty()) return std::nullopt;
  std::optional<AffineEqual> acc;
  for (const auto* op : ops) {
    const auto& m = op->meta();
    if (!m.fixed_set || (ops.size() > 1 && !m.alpha_firm)) return std::nullopt;
    acc = acc ? intersect(*acc, *m.fixed_set) : m.fixed_set;
    if (!acc) return std::nullopt;
  }
  return acc;
}

// Fix of x -> Wx + b when W is a signed permutation with (Wx+b) an involution.
// Only cases expressible as equality classes are described.
std::optional<AffineEqual> involution_fixed_set(const Matrix& W, const Vector& b) {
  const Index n = W.rows();
  std::vector<Index> target(static_cast<std::size_t>(n), -1);
  std::vector<double> sign(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double w = W(i, j);
      if (w == 0.0) continue;
      if ((w != 1.0 && w != -1.0) || target[i] != -1) return std::nullopt;
      target[i] = j;
      sign[i] = w;
    }
    if (target[i] == -1) return std::nullopt;
  }
  std::vector<std::vector<Index>> groups;
  std::vector<std::pair<Index, double>> fixed;
  for (Index i = 0; i < n; ++i) {
    const Index j = target[i];
    if (target[j] != i || sign[i] * sign[j] != 1.0) return std::nullopt;  // not an involution
    if (j == i) {
      if (sign[i] < 0.0) fixed.emplace_back(i, 0.5 * b[i]);
      else if (b[i] != 0.0) return std::nullopt;
    } else if (i < j) {
      if (sign[i] < 0.0 || b[i] != 0.0 || b[j] != 0.0) return std::nullopt;
      groups.push_back({i, j});
    }
  }
  return AffineEqual::build(n, groups, fixed);
}

double activation_value(Activation fn, double t) {
  switch (fn) {
    case Activation::relu:
      return t > 0.0 ? t : 0.0;
    case Activation::tanh:
      return std::tanh(t);
    case Activation::identity:
      return t;
  }
  return t;
}

}  // namespace

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::identity:
      return "identity";
  }
  return "identity";
}

OperatorExpr::OperatorExpr(std::shared_ptr<const OperatorNode> node) : node_(std::move(node)) {
  if (!node_) throw std::invalid_argument("null operator node");
}

const OperatorMeta& OperatorExpr::meta() const { return node_->meta; }
Index OperatorExpr::dim() const { return node_->dim; }

std::string OperatorExpr::kind_name() const {
  return std::visit(overloaded{
                        [](const expr::Identity&) { return std::string("identity"); },
                        [](const expr::Affine&) { return std::string("affine"); },
                        [](const expr::Scale&) { return std::string("scale"); },
                        [](const expr::Truncate&) { return std::string("truncate"); },
                        [](const expr::Swap&) { return std::string("swap"); },
                        [](const expr::Act&) { return std::string("activation"); },
                        [](const expr::Averaged&) { return std::string("averaged"); },
                        [](const expr::Compose&) { return std::string("compose"); },
                        [](const expr::ConvexCombo&) { return std::string("convex_combination"); },
                        [](const expr::Resolvent&) { return std::string("resolvent"); },
                        [](const expr::ContractiveProjection&) {
                          return std::string("contractive_projection");
                        },
                    },
                    node_->kind);
}

Vector OperatorExpr::apply(const Vector& x) const {
  if (node_->dim != 0 && x.size() != node_->dim) {
    throw std::invalid_argument("operator expects dimension " + std::to_string(node_->dim) +
                                ", got " + std::to_string(x.size()));
  }
  check_finite(x);
  return std::visit(
      overloaded{
          [&](const expr::Identity&) -> Vector { return x; },
          [&](const expr::Affine& a) -> Vector { return a.W * x + a.b; },
          [&](const expr::Scale& s) -> Vector { return s.lambda * x; },
          [&](const expr::Truncate& t) -> Vector {
            Vector y = x;
            y.tail(x.size() - t.k).setZero();
            return y;
          },
          [&](const expr::Swap& s) -> Vector {
            Vector y = x;
            std::swap(y[s.i], y[s.j]);
            return y;
          },
          [&](const expr::Act& a) -> Vector {
            return x.unaryExpr([fn = a.fn](double t) { return activation_value(fn, t); });
          },
          [&](const expr::Averaged& a) -> Vector {
            return (1.0 - a.alpha) * x + a.alpha * a.inner.apply(x);
          },
          [&](const expr::Compose& c) -> Vector {
            Vector y = x;
            for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) y = it->apply(y);
            return y;
          },
          [&](const expr::ConvexCombo& c) -> Vector {
            Vector y = Vector::Zero(x.size());
            for (std::size_t i = 0; i < c.ops.size(); ++i) {
              if (c.weights[i] != 0.0) y += c.weights[i] * c.ops[i].apply(x);
            }
            return y;
          },
          [&](const expr::Resolvent& r) -> Vector {
            ResolventOptions opts;
            opts.tol = r.tol;
            opts.max_iter = r.max_iter;
            opts.p = r.p;
            return resolvent_apply(r.inner, r.lambda, x, opts).value;
          },
          [&](const expr::ContractiveProjection& c) -> Vector {
            return 0.5 * (x + c.isometry.apply(x));
          },
      },
      node_->kind);
}

double composition_firm_constant(std::span<const double> alphas, double r) {
  if (alphas.empty()) throw std::invalid_argument("empty composition");
  const double a_max = *std::max_element(alphas.begin(), alphas.end());
  const double n = static_cast<double>(alphas.size());
  return 1.0 / (1.0 + (1.0 - a_max) / (std::pow(n, r - 1.0) * a_max));
}

double composition_averaged_constant(std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("empty composition");
  double keep = 1.0;
  for (double a : alphas) keep *= 1.0 - a;
  return 1.0 - keep;
}

double combination_averaged_constant(std::span<const double> alphas,
                                     std::span<const double> weights) {
  if (alphas.size() != weights.size()) throw std::invalid_argument("alphas/weights size mismatch");
  double a = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) a += weights[i] * alphas[i];
  return a;
}

double interpolation_norm_bound(const Matrix& W, double p) {
  check_exponent(p);
  if (W.size() == 0) return 0.0;
  const double col = W.cwiseAbs().colwise().sum().maxCoeff();  // induced l_1 norm
  const double row = W.cwiseAbs().rowwise().sum().maxCoeff();  // induced l_inf norm
  if (col == 0.0 || row == 0.0) return 0.0;
  return std::exp(std::log(col) / p + std::log(row) * (1.0 - 1.0 / p));
}

OperatorExpr identity(Index dim) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  OperatorMeta meta;
  meta.nonexpansive = Proof::proven;
  if (dim > 0) meta.fixed_set = AffineEqual::whole(dim);
  return make(expr::Identity{}, dim, std::move(meta));
}

OperatorExpr scale(double lambda, Index dim) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("scale factor must be finite");
  if (dim < 0) throw std::invalid_argument("negative dimension");
  OperatorMeta meta;
  if (std::abs(lambda) <= 1.0) meta.nonexpansive = Proof::proven;
  if (dim > 0) {
    if (lambda == 1.0) {
      meta.fixed_set = AffineEqual::whole(dim);
    } else {
      std::vector<std::pair<Index, double>> zeros;
      for (Index i = 0; i < dim; ++i) zeros.emplace_back(i, 0.0);
      meta.fixed_set = AffineEqual::make(dim, {}, zeros);
    }
  }
  return make(expr::Scale{lambda}, dim, std::move(meta));
}

OperatorExpr affine(Matrix W, Vector b, const SpaceParams& sp) {
  if (W.rows() != W.cols()) throw std::invalid_argument("affine map must be square");
  if (W.rows() < 1) throw std::invalid_argument("affine map must have positive dimension");
  if (b.size() != W.rows()) throw std::invalid_argument("offset length differs from matrix size");
  if (!W.allFinite() || !b.allFinite()) throw std::invalid_argument("affine map must be finite");
  OperatorMeta meta;
  if (interpolation_norm_bound(W, sp.p) <= 1.0) meta.nonexpansive = Proof::proven;
  meta.fixed_set = involution_fixed_set(W, b);
  const Index dim = W.rows();
  return make(expr::Affine{std::move(W), std::move(b)}, dim, std::move(meta));
}

OperatorExpr guaranteed_nonexpansive_affine(const Matrix& W, const Vector& b, double p) {
  if (!W.allFinite()) throw std::invalid_argument("affine map must be finite");
  const double s = std::max(1.0, interpolation_norm_bound(W, p));
  Matrix scaled = W / s;
  // rounding in W/s can leave the bound a hair above one
  while (interpolation_norm_bound(scaled, p) > 1.0) scaled *= 1.0 - 1e-15;
  SpaceParams sp = space_params(p);
  return affine(std::move(scaled), b, sp);
}

OperatorExpr truncation_operator(Index k, Index dim, const SpaceParams& sp) {
  if (k < 1 || k >= dim) {
    throw std::out_of_range("truncation needs 1 <= k < dim, got k=" + std::to_string(k) +
                            ", dim=" + std::to_string(dim));
  }
  OperatorMeta meta;
  meta.nonexpansive = Proof::proven;
  meta.alpha_firm = sp.c_r / (sp.c_r + 2.0);
  std::vector<std::pair<Index, double>> tail;
  for (Index i = k; i < dim; ++i) tail.emplace_back(i, 0.0);
  meta.fixed_set = AffineEqual::make(dim, {}, tail);
  return make(expr::Truncate{k}, dim, std::move(meta));
}

OperatorExpr swap_isometry(Index i, Index j, Index dim) {
  if (i == j) throw std::invalid_argument("swap indices must be distinct");
  if (i < 0 || j < 0 || i >= dim || j >= dim) {
    throw std::out_of_range("swap indices outside dimension " + std::to_string(dim));
  }
  OperatorMeta meta;
  meta.nonexpansive = Proof::proven;
  meta.fixed_set = AffineEqual::make(dim, {{std::min(i, j), std::max(i, j)}});
  return make(expr::Swap{i, j}, dim, std::move(meta));
}

OperatorExpr stable_activation(Activation fn) {
  OperatorMeta meta;
  meta.nonexpansive = Proof::proven;
  meta.alpha_firm = 0.5;
  return make(expr::Act{fn}, 0, std::move(meta));
}

OperatorExpr stable_activation(const std::string& name) {
  return stable_activation(parse_activation(name));
}

OperatorExpr averaged(const OperatorExpr& R, double alpha) {
  check_alpha(alpha);
  OperatorMeta meta;
  if (R.meta().nonexpansive == Proof::proven) {
    meta.nonexpansive = Proof::proven;
    meta.alpha_firm = alpha;
    meta.averaged_alpha = alpha;
  }
  meta.fixed_set = R.meta().fixed_set;  // Fix((1-a)Id + aR) = Fix R for a > 0
  return make(expr::Averaged{R, alpha}, R.dim(), std::move(meta));
}

OperatorExpr compose(const std::vector<OperatorExpr>& ops, const SpaceParams& sp) {
  if (ops.empty()) throw std::invalid_argument("compose needs at least one operator");
  const Index dim = common_dim(ops);
  OperatorMeta meta;
  if (all_nonexpansive(ops)) meta.nonexpansive = Proof::proven;

  std::vector<double> firm, avg;
  for (const auto& op : ops) {
    if (op.meta().alpha_firm) firm.push_back(*op.meta().alpha_firm);
    if (op.meta().averaged_alpha) avg.push_back(*op.meta().averaged_alpha);
  }
  if (firm.size() == ops.size()) meta.alpha_firm = composition_firm_constant(firm, sp.r);
  if (avg.size() == ops.size()) {
    meta.averaged_alpha = composition_averaged_constant(avg);
    meta.alpha_firm = std::min(*meta.alpha_firm, *meta.averaged_alpha);
  }

  std::vector<const OperatorExpr*> all;
  for (const auto& op : ops) all.push_back(&op);
  meta.fixed_set = fixed_set_intersection(all);
  return make(expr::Compose{ops}, dim, std::move(meta));
}

OperatorExpr convex_combination(const std::vector<OperatorExpr>& ops,
                                const std::vector<double>& weights, const SpaceParams& /*sp*/) {
  if (ops.empty()) throw std::invalid_argument("convex combination needs at least one operator");
  if (ops.size() != weights.size()) throw std::invalid_argument("one weight per operator required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::domain_error("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::domain_error("weights must sum to one");
  const Index dim = common_dim(ops);

  OperatorMeta meta;
  if (all_nonexpansive(ops)) meta.nonexpansive = Proof::proven;
  std::vector<double> firm, avg;
  for (const auto& op : ops) {
    if (op.meta().alpha_firm) firm.push_back(*op.meta().alpha_firm);
    if (op.meta().averaged_alpha) avg.push_back(*op.meta().averaged_alpha);
  }
  if (firm.size() == ops.size()) meta.alpha_firm = *std::max_element(firm.begin(), firm.end());
  if (avg.size() == ops.size()) {
    meta.averaged_alpha = combination_averaged_constant(avg, weights);
    meta.alpha_firm = std::min(*meta.alpha_firm, *meta.averaged_alpha);
  }

  // zero-weight operands do not constrain the fixed set
  std::vector<const OperatorExpr*> active;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (weights[i] > 0.0) active.push_back(&ops[i]);
  }
  meta.fixed_set = fixed_set_intersection(active);
  return make(expr::ConvexCombo{ops, weights}, dim, std::move(meta));
}

OperatorExpr contractive_projection(const OperatorExpr& U) {
  OperatorMeta meta;
  if (U.meta().nonexpansive == Proof::proven) {
    meta.nonexpansive = Proof::proven;
    meta.alpha_firm = 0.5;
    meta.averaged_alpha = 0.5;
  }
  meta.fixed_set = U.meta().fixed_set;  // Fix (Id+U)/2 = Fix U
  return make(expr::ContractiveProjection{U}, U.dim(), std::move(meta));
}

OperatorExpr resolvent_of(const OperatorExpr& F, double lambda, const SpaceParams& sp, double tol,
                          std::size_t max_iter) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("resolvent parameter must be nonnegative");
  }
  if (!(tol > 0.0)) throw std::domain_error("resolvent tolerance must be positive");
  OperatorMeta meta;
  if (F.meta().nonexpansive == Proof::proven) {
    meta.nonexpansive = Proof::proven;
    if (lambda > 0.0) meta.alpha_firm = 0.5;
  }
  meta.fixed_set = F.meta().fixed_set;  // Fix R_lambda = Fix F
  return make(expr::Resolvent{F, lambda, sp.p, tol, max_iter}, F.dim(), std::move(meta));
}

OperatorExpr neural_network(const std::vector<OperatorExpr>& layers, const OperatorExpr& sigma,
                            const SpaceParams& sp) {
  if (layers.empty()) throw std::invalid_argument("network needs at least one layer");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (!layers[k].meta().alpha_firm) {
      throw std::invalid_argument("layer " + std::to_string(k + 1) + " carries no alpha_firm constant");
    }
  }
  if (!sigma.meta().alpha_firm) throw std::invalid_argument("activation carries no alpha_firm constant");
  std::vector<OperatorExpr> chain;
  for (std::size_t k = layers.size(); k-- > 0;) {
    chain.push_back(layers[k]);
    if (k > 0) chain.push_back(sigma);
  }
  return compose(chain, sp);
}

}  // namespace afne
