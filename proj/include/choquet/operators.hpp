#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "choquet/capacity.hpp"
#include "choquet/errors.hpp"
#include "choquet/ground.hpp"
#include "choquet/integral.hpp"
#include "choquet/ordered_value.hpp"
#include "choquet/report.hpp"
#include "choquet/rng.hpp"

namespace choquet {

// A deterministic black-box evaluator C(X) -> E with declared codomain.
// Handles are pure and cheap to copy; evaluation must be total on finite
// inputs.
struct OperatorHandle {
  std::string name;
  int ground_size = 0;
  ValueKind codomain_kind = ValueKind::scalar;
  int codomain_dim = 1;
  std::function<OrderedValue(const GroundFunction&)> evaluate;

  OrderedValue operator()(const GroundFunction& f) const { return evaluate(f); }
};

// f |-> integral of f over X against mu.  Works for signed set functions as
// well (the sorted sum is linear in the table), which is what the bounded
// variation analysis needs.
inline OperatorHandle cb_operator(const SetFunction& mu, std::string name = "cb") {
  auto held = std::make_shared<const SetFunction>(mu);
  return {std::move(name), held->ground_size(), held->kind(), held->dim(),
          [held](const GroundFunction& f) { return choquet_sorted(f, *held, held->full()); }};
}

inline OperatorHandle cb_operator(const Capacity& mu, std::string name = "cb") {
  return cb_operator(mu.set_function(), std::move(name));
}

inline OperatorHandle min_operator(int n) {
  if (n < 1) throw InputError("min_operator needs a nonempty ground set");
  return {"min", n, ValueKind::scalar, 1, [n](const GroundFunction& f) {
            if (f.size() != n) throw GroundMismatch("min: wrong ground size");
            return OrderedValue::scalar(min_over(f, full_mask(n)));
          }};
}

inline OperatorHandle max_operator(int n) {
  if (n < 1) throw InputError("max_operator needs a nonempty ground set");
  return {"max", n, ValueKind::scalar, 1, [n](const GroundFunction& f) {
            if (f.size() != n) throw GroundMismatch("max: wrong ground size");
            return OrderedValue::scalar(max_over(f, full_mask(n)));
          }};
}

// I(f) = sum_i f(i) * w_i.  Mixed-sign weights are allowed; this is the
// plain linear test subject for the decomposition machinery.
inline OperatorHandle weighted_sum_operator(std::vector<OrderedValue> weights,
                                            std::string name = "weighted_sum") {
  if (weights.empty()) throw InputError("weighted_sum_operator needs at least one weight");
  for (const OrderedValue& w : weights) detail::require_same_shape(w, weights[0], "weighted_sum");
  auto held = std::make_shared<const std::vector<OrderedValue>>(std::move(weights));
  const int n = static_cast<int>(held->size());
  return {std::move(name), n, (*held)[0].kind(), (*held)[0].dim(),
          [held, n](const GroundFunction& f) {
            if (f.size() != n) throw GroundMismatch("weighted_sum: wrong ground size");
            OrderedValue acc = OrderedValue::zero_like((*held)[0]);
            for (int i = 0; i < n; ++i) acc = add(acc, scale(f[i], (*held)[static_cast<std::size_t>(i)]));
            return acc;
          }};
}

// Discretization of T_{phi,U}(f) = U(int_{-1}^{1} f+(t x) phi(x) dx): the
// ground set is the uniform grid on [-1, 1], f+ is evaluated at t*x by
// piecewise-linear interpolation, the x-integral uses the trapezoid rule and
// U is a nonnegative-weighted sum over the same t-grid.  Monotone and
// positively homogeneous; comonotonic additivity of the discretization is a
// probe subject, not a guarantee.
inline OperatorHandle tphi_operator(std::vector<double> phi, std::vector<OrderedValue> u_weights) {
  const int n = static_cast<int>(phi.size());
  if (n < 2) throw InputError("tphi_operator needs a grid of at least 2 points");
  if (u_weights.size() != phi.size())
    throw InputError("tphi_operator: phi and U weights must share the grid");
  for (double p : phi) {
    if (!std::isfinite(p)) throw InputError("tphi_operator: phi must be finite");
    if (p < 0.0) throw InputError("tphi_operator: phi must be nonnegative");
  }
  const OrderedValue zero = OrderedValue::zero_like(u_weights[0]);
  for (const OrderedValue& w : u_weights) {
    detail::require_same_shape(w, u_weights[0], "tphi_operator");
    if (!leq(zero, w, 0.0)) throw NegativeWeight("tphi_operator: U weights must be in the positive cone");
  }

  struct Body {
    std::vector<double> phi;
    std::vector<OrderedValue> u;
  };
  auto held = std::make_shared<const Body>(Body{std::move(phi), std::move(u_weights)});

  return {"tphi", n, (*held).u[0].kind(), (*held).u[0].dim(), [held, n](const GroundFunction& f) {
            if (f.size() != n) throw GroundMismatch("tphi: wrong ground size");
            const double h = 2.0 / static_cast<double>(n - 1);
            auto grid_x = [&](int i) { return -1.0 + h * static_cast<double>(i); };
            auto f_plus_at = [&](double y) {
              y = std::clamp(y, -1.0, 1.0);
              const double pos = (y + 1.0) / h;
              int cell = std::min(static_cast<int>(pos), n - 2);
              const double frac = pos - static_cast<double>(cell);
              const double val = (1.0 - frac) * f[cell] + frac * f[cell + 1];
              return std::max(val, 0.0);
            };
            OrderedValue acc = OrderedValue::zero_like((*held).u[0]);
            for (int j = 0; j < n; ++j) {
              const double t = grid_x(j);
              double inner = 0.0;
              for (int i = 0; i < n; ++i) {
                const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
                inner += w * f_plus_at(t * grid_x(i)) * (*held).phi[static_cast<std::size_t>(i)];
              }
              acc = add(acc, scale(inner, (*held).u[static_cast<std::size_t>(j)]));
            }
            return acc;
          }};
}

struct AxiomCheckOptions {
  long samples = 1000;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  double lo = -1.0;
  double hi = 1.0;
};

namespace detail {

inline GroundFunction random_function(Rng& rng, int n, double lo, double hi) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.uniform(lo, hi);
  return GroundFunction(std::move(v));
}

inline double equality_scale(const OrderedValue& a, const OrderedValue& b) {
  return 1.0 + norm(a) + norm(b);
}

}  // namespace detail

// Randomized certification of (Ch1) subadditivity.  "holds" means held on
// every sampled case, never a proof; a refutation is an exact witness.
inline PropertyReport check_subadditivity(const OperatorHandle& op, const AxiomCheckOptions& opt) {
  PropertyReport rep;
  rep.property = "subadditivity";
  if (opt.samples < 1) throw InputError("axiom checks need samples >= 1");
  rep.tol = opt.tol;
  Rng rng(opt.seed ^ 0x5ab1u);
  for (long k = 0; k < opt.samples; ++k) {
    const GroundFunction f = detail::random_function(rng, op.ground_size, opt.lo, opt.hi);
    const GroundFunction g = detail::random_function(rng, op.ground_size, opt.lo, opt.hi);
    const OrderedValue lhs = op(f + g);
    const OrderedValue rhs = add(op(f), op(g));
    ++rep.cases;
    if (!leq(lhs, rhs, opt.tol * detail::equality_scale(lhs, rhs))) {
      rep.verdict = Verdict::refuted;
      Counterexample ce;
      ce.functions = {{"f", f}, {"g", g}};
      ce.values = {{"I(f+g)", lhs}, {"I(f)+I(g)", rhs}};
      rep.counterexample = std::move(ce);
      return rep;
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

// (Ch2): additivity on comonotone pairs from the generator.
inline PropertyReport check_comonotonic_additivity(const OperatorHandle& op,
                                                   const AxiomCheckOptions& opt) {
  PropertyReport rep;
  rep.property = "comonotonic_additivity";
  if (opt.samples < 1) throw InputError("axiom checks need samples >= 1");
  rep.tol = opt.tol;
  for (long k = 0; k < opt.samples; ++k) {
    const auto [f, g] =
        random_comonotone_pair(opt.seed * 0x9e3779b9u + static_cast<std::uint64_t>(k) + 1,
                               op.ground_size, opt.lo, opt.hi);
    const OrderedValue lhs = op(f + g);
    const OrderedValue rhs = add(op(f), op(g));
    ++rep.cases;
    if (norm(sub(lhs, rhs)) > opt.tol * detail::equality_scale(lhs, rhs)) {
      rep.verdict = Verdict::refuted;
      Counterexample ce;
      ce.functions = {{"f", f}, {"g", g}};
      ce.values = {{"I(f+g)", lhs}, {"I(f)+I(g)", rhs}};
      rep.counterexample = std::move(ce);
      return rep;
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

// (Ch3): f <= g pointwise implies I(f) <= I(g); g is f plus a nonnegative
// perturbation.
inline PropertyReport check_monotonicity(const OperatorHandle& op, const AxiomCheckOptions& opt) {
  PropertyReport rep;
  rep.property = "monotonicity";
  if (opt.samples < 1) throw InputError("axiom checks need samples >= 1");
  rep.tol = opt.tol;
  Rng rng(opt.seed ^ 0xc4e3u);
  for (long k = 0; k < opt.samples; ++k) {
    const GroundFunction f = detail::random_function(rng, op.ground_size, opt.lo, opt.hi);
    const GroundFunction g = f + detail::random_function(rng, op.ground_size, 0.0, opt.hi - opt.lo);
    const OrderedValue vf = op(f);
    const OrderedValue vg = op(g);
    ++rep.cases;
    if (!leq(vf, vg, opt.tol * detail::equality_scale(vf, vg))) {
      rep.verdict = Verdict::refuted;
      Counterexample ce;
      ce.functions = {{"f", f}, {"g", g}};
      ce.values = {{"I(f)", vf}, {"I(g)", vg}};
      rep.counterexample = std::move(ce);
      return rep;
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

// Positive homogeneity, I(a f) = a I(f) for a >= 0; a = 0 is forced in as
// the first case.
inline PropertyReport check_positive_homogeneity(const OperatorHandle& op,
                                                 const AxiomCheckOptions& opt) {
  PropertyReport rep;
  rep.property = "positive_homogeneity";
  if (opt.samples < 1) throw InputError("axiom checks need samples >= 1");
  rep.tol = opt.tol;
  Rng rng(opt.seed ^ 0x40a0u);
  for (long k = 0; k < opt.samples; ++k) {
    const GroundFunction f = detail::random_function(rng, op.ground_size, opt.lo, opt.hi);
    const double a = k == 0 ? 0.0 : rng.uniform(0.0, 2.0);
    const OrderedValue lhs = op(a * f);
    const OrderedValue rhs = scale(a, op(f));
    ++rep.cases;
    if (norm(sub(lhs, rhs)) > opt.tol * detail::equality_scale(lhs, rhs)) {
      rep.verdict = Verdict::refuted;
      Counterexample ce;
      ce.functions = {{"f", f}};
      ce.scalar = a;
      ce.values = {{"I(a f)", lhs}, {"a I(f)", rhs}};
      rep.counterexample = std::move(ce);
      return rep;
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

inline std::vector<PropertyReport> check_axioms(const OperatorHandle& op,
                                                const AxiomCheckOptions& opt = {}) {
  return {check_subadditivity(op, opt), check_comonotonic_additivity(op, opt),
          check_monotonicity(op, opt), check_positive_homogeneity(op, opt)};
}

// The Urysohn levels for K on a finite discrete ground set, built from the
// indicator representation K = {chi_K >= alpha}:
//   level(x) = 1 on K, 1 - min(1, n*alpha) off K,
// which equals the indicator exactly once n*alpha >= 1.
inline GroundFunction urysohn_level(int ground_size, Mask k, double alpha, double n) {
  if (!(alpha > 0.0) || alpha > 1.0) throw InputError("urysohn_level: alpha must be in (0, 1]");
  if (n < 0.0) throw InputError("urysohn_level: n must be nonnegative");
  const double off = 1.0 - std::min(1.0, n * alpha);
  std::vector<double> v(static_cast<std::size_t>(ground_size), off);
  for (int i = 0; i < ground_size; ++i)
    if (mask_contains(k, i)) v[static_cast<std::size_t>(i)] = 1.0;
  return GroundFunction(std::move(v));
}

// mu(K) = I(chi_K) for every subset; the Urysohn sequence on a finite
// discrete ground set reaches the indicator at finite n, so the limit in the
// representation construction is attained.  Throws NotMonotone when the
// extracted table fails validation, the signal that I is not a Choquet
// operator.
inline Capacity extract_capacity(const OperatorHandle& op, double tol = kDefaultTol) {
  const int n = op.ground_size;
  std::vector<OrderedValue> table;
  table.reserve(std::size_t{1} << n);
  for (Mask k = 0; k <= full_mask(n); ++k) table.push_back(op(indicator_function(n, k)));
  const SetFunction sf(n, std::move(table));
  CapacityValidation v = validate_capacity(sf, tol);
  if (!v.ok()) {
    std::string msg = "extract_capacity: table fails validation (";
    if (!v.empty_set_ok) msg += "I(0) != 0";
    if (!v.violations.empty()) {
      if (!v.empty_set_ok) msg += ", ";
      msg += std::to_string(v.violations.size()) + " monotonicity violations";
    }
    msg += ")";
    throw NotMonotone(msg);
  }
  return *std::move(v.capacity);
}

// Demonstration of the extraction limit: evaluates I on the Urysohn levels
// n = 1, 2, 4, ... and records where the value stabilizes at I(chi_K).
struct UrysohnTrace {
  Mask subset = 0;
  double alpha = 0.0;
  std::vector<std::pair<double, OrderedValue>> evaluations;
  double stabilized_at = 0.0;
};

inline UrysohnTrace urysohn_extraction_trace(const OperatorHandle& op, Mask k, double alpha) {
  UrysohnTrace trace;
  trace.subset = k;
  trace.alpha = alpha;
  const OrderedValue target = op(indicator_function(op.ground_size, k));
  double n = 1.0;
  for (int round = 0; round < 64; ++round) {
    const OrderedValue v = op(urysohn_level(op.ground_size, k, alpha, n));
    trace.evaluations.emplace_back(n, v);
    if (exactly_equal(v, target)) {
      trace.stabilized_at = n;
      return trace;
    }
    n *= 2.0;
  }
  throw Error("urysohn_extraction_trace: no stabilization within the doubling budget");
}

// ||I(f) - integral of f against mu|| <= tol * (1 + ||I(f)||) over random
// signed, tie-heavy and indicator-valued inputs.
inline PropertyReport verify_representation(const OperatorHandle& op, const SetFunction& mu,
                                            long samples, std::uint64_t seed,
                                            double tol = kDefaultTol) {
  if (op.ground_size != mu.ground_size())
    throw GroundMismatch("verify_representation: ground sizes differ");
  PropertyReport rep;
  rep.property = "representation";
  if (samples < 1) throw InputError("verify_representation needs samples >= 1");
  rep.tol = tol;
  Rng rng(seed ^ 0x4e94u);
  const int n = op.ground_size;
  const double palette[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (long k = 0; k < samples; ++k) {
    GroundFunction f = constant_function(n, 0.0);
    switch (k % 3) {
      case 0:
        f = detail::random_function(rng, n, -2.0, 2.0);
        break;
      case 1: {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v) x = palette[rng.uniform_int(0, 4)];
        f = GroundFunction(std::move(v));
        break;
      }
      default:
        f = indicator_function(n, static_cast<Mask>(rng.next_u64()) & full_mask(n));
        break;
    }
    const OrderedValue actual = op(f);
    const OrderedValue expected = choquet_sorted(f, mu, mu.full());
    ++rep.cases;
    if (norm(sub(actual, expected)) > tol * (1.0 + norm(actual))) {
      rep.verdict = Verdict::refuted;
      Counterexample ce;
      ce.functions = {{"f", f}};
      ce.values = {{"I(f)", actual}, {"integral", expected}};
      rep.counterexample = std::move(ce);
      return rep;
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

inline PropertyReport verify_representation(const OperatorHandle& op, const Capacity& mu,
                                            long samples, std::uint64_t seed,
                                            double tol = kDefaultTol) {
  return verify_representation(op, mu.set_function(), samples, seed, tol);
}

// Finite sublattice of C(X): all functions with values on the uniform grid
// {lo + k (hi-lo)/m}.  Chain suprema of operator variations are computed
// exactly on it; against all of C(X) this is a lower bound, exact for
// monotone operators.
class GridLattice {
 public:
  GridLattice(int ground_size, int levels, double lo, double hi)
      : n_(ground_size), m_(levels), lo_(lo), hi_(hi) {
    if (n_ < 1 || n_ > kMaxGroundScalar) throw InputError("grid: ground size must be in [1, 20]");
    if (m_ < 1) throw InputError("grid: levels must be >= 1");
    if (!(lo_ < hi_)) throw InputError("grid: lo must be < hi");
    double count = 1.0;
    for (int i = 0; i < n_; ++i) count *= static_cast<double>(m_ + 1);
    if (count > 20000.0) throw InputError("grid: node budget (m+1)^N <= 20000 exceeded");
  }

  int ground_size() const { return n_; }
  int levels() const { return m_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return (hi_ - lo_) / static_cast<double>(m_); }

  long node_count() const {
    long c = 1;
    for (int i = 0; i < n_; ++i) c *= m_ + 1;
    return c;
  }

  int level_of(double v) const {
    const double raw = (v - lo_) / step();
    const long k = std::lround(raw);
    if (k < 0 || k > m_ || std::abs(v - (lo_ + static_cast<double>(k) * step())) > 1e-9 * (1.0 + std::abs(v)))
      throw GridMisaligned("value is not a grid level");
    return static_cast<int>(k);
  }

  bool has_value(double v) const {
    const double raw = (v - lo_) / step();
    const long k = std::lround(raw);
    return k >= 0 && k <= m_ &&
           std::abs(v - (lo_ + static_cast<double>(k) * step())) <= 1e-9 * (1.0 + std::abs(v));
  }

  std::vector<int> levels_of(const GroundFunction& f) const {
    if (f.size() != n_) throw GroundMismatch("grid: wrong ground size");
    std::vector<int> lv(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) lv[static_cast<std::size_t>(i)] = level_of(f[i]);
    return lv;
  }

  GroundFunction node(const std::vector<int>& lv) const {
    if (static_cast<int>(lv.size()) != n_) throw InputError("grid: wrong level vector size");
    std::vector<double> v(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      if (lv[static_cast<std::size_t>(i)] < 0 || lv[static_cast<std::size_t>(i)] > m_)
        throw InputError("grid: level out of range");
      v[static_cast<std::size_t>(i)] = lo_ + static_cast<double>(lv[static_cast<std::size_t>(i)]) * step();
    }
    return GroundFunction(std::move(v));
  }

 private:
  int n_;
  int m_;
  double lo_;
  double hi_;
};

namespace detail {

// Chain supremum over the box of grid functions between two level vectors,
// per component, by longest-path DP in topological (ascending index) order.
// An edge raises one coordinate by one level; maximal chains dominate by the
// triangle inequality of the weights.  value_of maps an absolute level to
// the function value.
struct BoxTable {
  std::vector<int> base;
  std::vector<int> sizes;
  long count = 0;
  std::vector<OrderedValue> op_values;   // operator at each node
  std::vector<OrderedValue> variation;   // chain supremum from the low corner

  long index_of(const std::vector<int>& levels) const {
    long idx = 0;
    long stride = 1;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const int d = levels[i] - base[i];
      if (d < 0 || d >= sizes[i]) throw InputError("box: level vector outside the box");
      idx += stride * d;
      stride *= sizes[i];
    }
    return idx;
  }
};

template <class LevelToValue>
BoxTable box_variation_table(const OperatorHandle& op, const std::vector<int>& lo_levels,
                             const std::vector<int>& hi_levels, LevelToValue&& value_of,
                             ChainWeight weight) {
  const int n = static_cast<int>(lo_levels.size());
  BoxTable box;
  box.base = lo_levels;
  box.sizes.resize(static_cast<std::size_t>(n));
  long count = 1;
  for (int i = 0; i < n; ++i) {
    if (hi_levels[static_cast<std::size_t>(i)] < lo_levels[static_cast<std::size_t>(i)])
      throw NotComparable("box: endpoints are not comparable");
    box.sizes[static_cast<std::size_t>(i)] =
        hi_levels[static_cast<std::size_t>(i)] - lo_levels[static_cast<std::size_t>(i)] + 1;
    count *= box.sizes[static_cast<std::size_t>(i)];
    if (count > 200000) throw InputError("box: node budget exceeded");
  }
  box.count = count;

  std::vector<long> strides(static_cast<std::size_t>(n));
  long stride = 1;
  for (int i = 0; i < n; ++i) {
    strides[static_cast<std::size_t>(i)] = stride;
    stride *= box.sizes[static_cast<std::size_t>(i)];
  }

  box.op_values.reserve(static_cast<std::size_t>(count));
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (long idx = 0; idx < count; ++idx) {
    for (int i = 0; i < n; ++i)
      values[static_cast<std::size_t>(i)] =
          value_of(lo_levels[static_cast<std::size_t>(i)] + digits[static_cast<std::size_t>(i)]);
    box.op_values.push_back(op(GroundFunction(values)));
    for (int i = 0; i < n; ++i) {
      if (++digits[static_cast<std::size_t>(i)] < box.sizes[static_cast<std::size_t>(i)]) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }

  const int components = box.op_values[0].kind() == ValueKind::scalar ? 1 : box.op_values[0].dim();
  if (box.op_values[0].kind() == ValueKind::sym)
    throw LatticeUnsupported("operator variation needs a lattice codomain (scalar/vector)");

  std::vector<std::vector<double>> dp(static_cast<std::size_t>(components),
                                      std::vector<double>(static_cast<std::size_t>(count), 0.0));
  std::fill(digits.begin(), digits.end(), 0);
  for (long idx = 0; idx < count; ++idx) {
    if (idx > 0) {
      for (int c = 0; c < components; ++c) {
        double best = -std::numeric_limits<double>::infinity();
        const double here = box.op_values[static_cast<std::size_t>(idx)].data()[static_cast<std::size_t>(c)];
        for (int i = 0; i < n; ++i) {
          if (digits[static_cast<std::size_t>(i)] == 0) continue;
          const long prev = idx - strides[static_cast<std::size_t>(i)];
          const double inc =
              here - box.op_values[static_cast<std::size_t>(prev)].data()[static_cast<std::size_t>(c)];
          best = std::max(best, dp[static_cast<std::size_t>(c)][static_cast<std::size_t>(prev)] +
                                    chain_weight(weight, inc));
        }
        dp[static_cast<std::size_t>(c)][static_cast<std::size_t>(idx)] = best;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (++digits[static_cast<std::size_t>(i)] < box.sizes[static_cast<std::size_t>(i)]) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }

  box.variation.reserve(static_cast<std::size_t>(count));
  for (long idx = 0; idx < count; ++idx) {
    if (components == 1) {
      box.variation.push_back(OrderedValue::scalar(dp[0][static_cast<std::size_t>(idx)]));
    } else {
      std::vector<double> v(static_cast<std::size_t>(components));
      for (int c = 0; c < components; ++c)
        v[static_cast<std::size_t>(c)] = dp[static_cast<std::size_t>(c)][static_cast<std::size_t>(idx)];
      box.variation.push_back(OrderedValue::vector(std::move(v)));
    }
  }
  return box;
}

}  // namespace detail

// Exact supremum over chains inside the grid from f to g of the summed
// moduli |I(f_k) - I(f_{k-1})|.  For monotone I this telescopes to
// I(g) - I(f).
inline OrderedValue grid_variation(const OperatorHandle& op, const GridLattice& grid,
                                   const GroundFunction& f, const GroundFunction& g) {
  if (op.codomain_kind == ValueKind::sym)
    throw LatticeUnsupported("grid_variation needs a lattice codomain");
  if (op.ground_size != grid.ground_size()) throw GroundMismatch("grid_variation: ground sizes differ");
  const std::vector<int> lf = grid.levels_of(f);
  const std::vector<int> lg = grid.levels_of(g);
  for (std::size_t i = 0; i < lf.size(); ++i)
    if (lf[i] > lg[i]) throw NotComparable("grid_variation: f is not <= g");
  const double lo = grid.lo();
  const double step = grid.step();
  const detail::BoxTable box = detail::box_variation_table(
      op, lf, lg, [lo, step](int level) { return lo + static_cast<double>(level) * step; },
      detail::ChainWeight::modulus);
  return box.variation.back();
}

// Jordan-type splitting of a comonotonic additive operator with bounded
// variation: I1 is the inner upper variation
//   I1(f) = V+(0 -> f + alpha) - alpha * V+(0 -> 1),
// with V+ the chain supremum of positive-part increments and alpha the
// smallest grid-aligned shift making f + alpha >= 0, and I2 = I1 - I.  Both
// are monotone, positively homogeneous and translation invariant, and
// I = I1 - I2 by construction.  For monotone I with I(0) = 0 this reduces to
// I1 = I, I2 = 0.
struct Decomposition {
  OperatorHandle i1;
  OperatorHandle i2;
  OrderedValue unit_upper_variation;  // V+(0 -> 1)

  // I1 evaluated with an explicit admissible shift; used to check that the
  // construction is independent of alpha.
  OrderedValue i1_with_shift(const GroundFunction& f, double alpha) const;

  struct Memo {
    GridLattice grid;
    int zero_level = 0;
    int one_offset = 0;  // grid steps from 0 up to the constant 1
    detail::BoxTable table;
    OperatorHandle base;
  };
  std::shared_ptr<const Memo> memo;
};

namespace detail {

inline std::vector<int> relative_levels(const Decomposition::Memo& m, const GroundFunction& f) {
  const std::vector<int> lv = m.grid.levels_of(f);
  std::vector<int> rel(lv.size());
  for (std::size_t i = 0; i < lv.size(); ++i) rel[i] = lv[i] - m.zero_level;
  return rel;
}

inline OrderedValue i1_at_shift_steps(const Decomposition::Memo& m, std::vector<int> rel,
                                      int shift_steps) {
  int low = rel[0], high = rel[0];
  for (int r : rel) {
    low = std::min(low, r);
    high = std::max(high, r);
  }
  if (low + shift_steps < 0) throw GridMisaligned("decomposition: shift does not reach the cone");
  if (high + shift_steps > m.grid.levels())
    throw GridMisaligned("decomposition: shifted function leaves the working box");
  for (int& r : rel) r += shift_steps;
  const OrderedValue raw = m.table.variation[static_cast<std::size_t>(m.table.index_of(rel))];
  const double alpha = static_cast<double>(shift_steps) * m.grid.step();
  const std::vector<int> one(rel.size(), m.one_offset);
  const OrderedValue unit = m.table.variation[static_cast<std::size_t>(m.table.index_of(one))];
  return sub(raw, scale(alpha, unit));
}

}  // namespace detail

inline OrderedValue Decomposition::i1_with_shift(const GroundFunction& f, double alpha) const {
  const double steps_raw = alpha / memo->grid.step();
  const long steps = std::lround(steps_raw);
  if (steps < 0 || std::abs(steps_raw - static_cast<double>(steps)) > 1e-9)
    throw GridMisaligned("decomposition: shift must be a nonnegative number of grid steps");
  return detail::i1_at_shift_steps(*memo, detail::relative_levels(*memo, f), static_cast<int>(steps));
}

inline Decomposition decompose(const OperatorHandle& op, const GridLattice& grid) {
  if (op.codomain_kind == ValueKind::sym)
    throw LatticeUnsupported("decompose needs a lattice codomain");
  if (op.ground_size != grid.ground_size()) throw GroundMismatch("decompose: ground sizes differ");
  if (!grid.has_value(0.0)) throw GridMisaligned("decompose: grid must contain the constant 0");
  if (!grid.has_value(1.0)) throw GridMisaligned("decompose: grid must contain the constant 1");

  const int z = grid.level_of(0.0);
  const int one_offset = grid.level_of(1.0) - z;
  const double step = grid.step();
  const int n = grid.ground_size();

  // Working box in shifted level space: every grid node moved up by at most
  // -lo lands in [0, m]; one positive-part DP from 0 covers all of them.
  const std::vector<int> lo_levels(static_cast<std::size_t>(n), 0);
  const std::vector<int> hi_levels(static_cast<std::size_t>(n), grid.levels());
  detail::BoxTable table = detail::box_variation_table(
      op, lo_levels, hi_levels, [step](int level) { return static_cast<double>(level) * step; },
      detail::ChainWeight::positive_part);

  auto memo = std::make_shared<const Decomposition::Memo>(
      Decomposition::Memo{grid, z, one_offset, std::move(table), op});

  const std::vector<int> one(static_cast<std::size_t>(n), one_offset);
  const OrderedValue unit = memo->table.variation[static_cast<std::size_t>(memo->table.index_of(one))];

  OperatorHandle i1{op.name + ".upper", n, op.codomain_kind, op.codomain_dim,
                    [memo](const GroundFunction& f) {
                      std::vector<int> rel = detail::relative_levels(*memo, f);
                      int low = 0;
                      for (int r : rel) low = std::min(low, r);
                      return detail::i1_at_shift_steps(*memo, std::move(rel), -low);
                    }};
  OperatorHandle i2{op.name + ".lower", n, op.codomain_kind, op.codomain_dim,
                    [memo, i1eval = i1.evaluate](const GroundFunction& f) {
                      return sub(i1eval(f), memo->base(f));
                    }};

  Decomposition d;
  d.i1 = std::move(i1);
  d.i2 = std::move(i2);
  d.unit_upper_variation = unit;
  d.memo = std::move(memo);
  return d;
}

// Verifies, over every grid node and the scalings/translations that stay in
// the grid: I = I1 - I2, monotonicity of I1 and I2 on covering pairs,
// positive homogeneity, translation invariance against the unit variation,
// and independence of the shift choice.
inline PropertyReport check_decomposition(const OperatorHandle& op, const Decomposition& d,
                                          const GridLattice& grid, double tol = kDefaultTol) {
  PropertyReport rep;
  rep.property = "decomposition";
  rep.tol = tol;

  const int n = grid.ground_size();
  const int m = grid.levels();
  const long count = grid.node_count();
  const double step = grid.step();

  std::vector<GroundFunction> nodes;
  std::vector<OrderedValue> base_vals, i1_vals, i2_vals;
  nodes.reserve(static_cast<std::size_t>(count));

  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  std::vector<long> strides(static_cast<std::size_t>(n));
  long stride = 1;
  for (int i = 0; i < n; ++i) {
    strides[static_cast<std::size_t>(i)] = stride;
    stride *= m + 1;
  }
  for (long idx = 0; idx < count; ++idx) {
    nodes.push_back(grid.node(digits));
    base_vals.push_back(op(nodes.back()));
    i1_vals.push_back(d.i1(nodes.back()));
    i2_vals.push_back(d.i2(nodes.back()));
    for (int i = 0; i < n; ++i) {
      if (++digits[static_cast<std::size_t>(i)] < m + 1) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }

  auto refute = [&](long idx, const char* what, const OrderedValue& lhs, const OrderedValue& rhs) {
    rep.verdict = Verdict::refuted;
    Counterexample ce;
    ce.functions = {{"f", nodes[static_cast<std::size_t>(idx)]}};
    ce.values = {{"lhs", lhs}, {"rhs", rhs}};
    ce.note = what;
    rep.counterexample = std::move(ce);
  };

  std::fill(digits.begin(), digits.end(), 0);
  for (long idx = 0; idx < count; ++idx) {
    const std::size_t u = static_cast<std::size_t>(idx);

    // I = I1 - I2 on every node.
    const OrderedValue recomposed = sub(i1_vals[u], i2_vals[u]);
    ++rep.cases;
    if (norm(sub(recomposed, base_vals[u])) > tol * (1.0 + norm(base_vals[u]))) {
      refute(idx, "I != I1 - I2", recomposed, base_vals[u]);
      return rep;
    }

    // Monotone on covering pairs.
    for (int i = 0; i < n; ++i) {
      if (digits[static_cast<std::size_t>(i)] == m) continue;
      const std::size_t up = static_cast<std::size_t>(idx + strides[static_cast<std::size_t>(i)]);
      ++rep.cases;
      if (!leq(i1_vals[u], i1_vals[up], tol)) {
        refute(idx, "I1 not monotone on a covering pair", i1_vals[u], i1_vals[up]);
        return rep;
      }
      ++rep.cases;
      if (!leq(i2_vals[u], i2_vals[up], tol)) {
        refute(idx, "I2 not monotone on a covering pair", i2_vals[u], i2_vals[up]);
        return rep;
      }
    }

    // Positive homogeneity for scalings that stay on the grid.
    for (const double a : {0.0, 2.0}) {
      bool representable = true;
      std::vector<double> scaled(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        scaled[static_cast<std::size_t>(i)] = a * nodes[u][i];
        if (!grid.has_value(scaled[static_cast<std::size_t>(i)])) representable = false;
      }
      if (!representable) continue;
      const GroundFunction af{std::vector<double>(scaled)};
      const OrderedValue lhs = d.i1(af);
      const OrderedValue rhs = scale(a, i1_vals[u]);
      ++rep.cases;
      if (norm(sub(lhs, rhs)) > tol * (1.0 + norm(rhs))) {
        refute(idx, "I1 not positively homogeneous", lhs, rhs);
        return rep;
      }
    }

    // Translation invariance: I1(f + beta) = I1(f) + beta * V+(0 -> 1).
    for (const int beta_steps : {1, -1}) {
      bool representable = true;
      for (int i = 0; i < n; ++i) {
        const int lv = digits[static_cast<std::size_t>(i)] + beta_steps;
        if (lv < 0 || lv > m) representable = false;
      }
      if (!representable) continue;
      const double beta = static_cast<double>(beta_steps) * step;
      const GroundFunction fb = nodes[u] + beta;
      const OrderedValue lhs = d.i1(fb);
      const OrderedValue rhs = add(i1_vals[u], scale(beta, d.unit_upper_variation));
      ++rep.cases;
      if (norm(sub(lhs, rhs)) > tol * (1.0 + norm(rhs))) {
        refute(idx, "I1 not translation invariant", lhs, rhs);
        return rep;
      }
    }

    // Independence of the shift choice.
    {
      int low = 0, high = 0;
      const std::vector<int> rel = detail::relative_levels(*d.memo, nodes[u]);
      low = high = rel[0];
      for (int r : rel) {
        low = std::min(low, r);
        high = std::max(high, r);
      }
      const int alpha0 = std::max(0, -low);
      if (high + alpha0 + 1 <= m) {
        const OrderedValue with_min = d.i1_with_shift(nodes[u], static_cast<double>(alpha0) * step);
        const OrderedValue with_next =
            d.i1_with_shift(nodes[u], static_cast<double>(alpha0 + 1) * step);
        ++rep.cases;
        if (norm(sub(with_min, with_next)) > tol * (1.0 + norm(with_min))) {
          refute(idx, "I1 depends on the shift choice", with_min, with_next);
          return rep;
        }
      }
    }

    for (int i = 0; i < n; ++i) {
      if (++digits[static_cast<std::size_t>(i)] < m + 1) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }

  rep.verdict = Verdict::holds;
  return rep;
}

}  // namespace choquet
