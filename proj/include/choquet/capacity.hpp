#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "choquet/errors.hpp"
#include "choquet/ground.hpp"
#include "choquet/ordered_value.hpp"
#include "choquet/report.hpp"

namespace choquet {

// Dense 2^N tables; the caps keep exhaustive checkers at desk scale.
inline constexpr int kMaxGroundScalar = 20;
inline constexpr int kMaxGroundNonScalar = 12;

// A set function on the full power set of {0..N-1}, stored densely and
// indexed by bitmask.  mu(empty) = 0 is enforced by the operations that rely
// on it (validation, integration, variations), not at construction, so that
// defective inputs can still be loaded and reported.
class SetFunction {
 public:
  SetFunction(int ground_size, std::vector<OrderedValue> table) : n_(ground_size), table_(std::move(table)) {
    if (n_ < 1 || n_ > kMaxGroundScalar) throw InputError("ground size must be in [1, 20]");
    if (table_.size() != (std::size_t{1} << n_)) throw InputError("set function table must have 2^N entries");
    kind_ = table_[0].kind();
    dim_ = table_[0].dim();
    if (kind_ != ValueKind::scalar && n_ > kMaxGroundNonScalar)
      throw InputError("ground size must be in [1, 12] for vector/sym tables");
    for (const OrderedValue& v : table_)
      if (!v.same_shape(table_[0])) throw KindMismatch("set function table must hold values of one kind");
  }

  int ground_size() const { return n_; }
  Mask full() const { return full_mask(n_); }
  ValueKind kind() const { return kind_; }
  int dim() const { return dim_; }

  const OrderedValue& at(Mask a) const {
    if (a > full()) throw InputError("subset mask out of range");
    return table_[a];
  }

  const std::vector<OrderedValue>& table() const { return table_; }

  bool vanishes_at_empty() const { return is_zero(table_[0]); }

 private:
  int n_;
  ValueKind kind_;
  int dim_;
  std::vector<OrderedValue> table_;
};

inline SetFunction operator+(const SetFunction& a, const SetFunction& b) {
  if (a.ground_size() != b.ground_size()) throw GroundMismatch("set functions live on different grounds");
  std::vector<OrderedValue> t;
  t.reserve(a.table().size());
  for (std::size_t i = 0; i < a.table().size(); ++i) t.push_back(add(a.table()[i], b.table()[i]));
  return SetFunction(a.ground_size(), std::move(t));
}

inline SetFunction operator-(const SetFunction& a, const SetFunction& b) {
  if (a.ground_size() != b.ground_size()) throw GroundMismatch("set functions live on different grounds");
  std::vector<OrderedValue> t;
  t.reserve(a.table().size());
  for (std::size_t i = 0; i < a.table().size(); ++i) t.push_back(sub(a.table()[i], b.table()[i]));
  return SetFunction(a.ground_size(), std::move(t));
}

inline SetFunction scale(double c, const SetFunction& a) {
  std::vector<OrderedValue> t;
  t.reserve(a.table().size());
  for (const OrderedValue& v : a.table()) t.push_back(scale(c, v));
  return SetFunction(a.ground_size(), std::move(t));
}

struct MonotonicityViolation {
  Mask subset = 0;
  Mask superset = 0;  // subset plus one point
  OrderedValue subset_value;
  OrderedValue superset_value;
};

struct CapacityValidation;

// A set function certified monotone with mu(empty) = 0; constructed only
// through validate_capacity or the builders that preserve monotonicity
// exactly in floating point (additive_measure, dual).
class Capacity {
 public:
  const SetFunction& set_function() const { return sf_; }
  int ground_size() const { return sf_.ground_size(); }
  Mask full() const { return sf_.full(); }
  ValueKind kind() const { return sf_.kind(); }
  int dim() const { return sf_.dim(); }
  const OrderedValue& at(Mask a) const { return sf_.at(a); }
  const OrderedValue& total() const { return sf_.at(sf_.full()); }

 private:
  explicit Capacity(SetFunction sf) : sf_(std::move(sf)) {}
  SetFunction sf_;

  friend CapacityValidation validate_capacity(const SetFunction&, double);
  friend Capacity additive_measure(const std::vector<OrderedValue>&);
  friend Capacity dual(const Capacity&);
};

// Outcome of validate_capacity: either a Capacity or the list of witnesses.
struct CapacityValidation {
  bool empty_set_ok = false;                      // (C1), exact
  std::vector<MonotonicityViolation> violations;  // (C2) witnesses over covering pairs
  std::optional<Capacity> capacity;

  bool ok() const { return capacity.has_value(); }
};

// (C1) exactly at the empty set, (C2) at tol over all N * 2^(N-1) covering
// pairs (A, A + {i}); covering pairs suffice since general inclusions chain
// through them.
inline CapacityValidation validate_capacity(const SetFunction& sf, double tol = kDefaultTol) {
  CapacityValidation out;
  out.empty_set_ok = sf.vanishes_at_empty();
  const int n = sf.ground_size();
  const Mask all = sf.full();
  for (Mask a = 0; a <= all; ++a) {
    for (int i = 0; i < n; ++i) {
      if (mask_contains(a, i)) continue;
      const Mask b = a | (Mask{1} << i);
      if (!leq(sf.at(a), sf.at(b), tol)) {
        out.violations.push_back({a, b, sf.at(a), sf.at(b)});
      }
    }
  }
  if (out.empty_set_ok && out.violations.empty()) out.capacity = Capacity(sf);
  return out;
}

// mu(A) = sum of the weights in A.  Weights must lie in the positive cone;
// floating-point sums of nonnegative values are monotone under set inclusion,
// so no revalidation is needed.
inline Capacity additive_measure(const std::vector<OrderedValue>& weights) {
  if (weights.empty()) throw InputError("additive_measure needs at least one weight");
  const int n = static_cast<int>(weights.size());
  const OrderedValue zero = OrderedValue::zero_like(weights[0]);
  for (const OrderedValue& w : weights) {
    detail::require_same_shape(w, weights[0], "additive_measure");
    if (!leq(zero, w, 0.0)) throw NegativeWeight("additive_measure: weight outside the positive cone");
  }
  std::vector<OrderedValue> table(std::size_t{1} << n, zero);
  for (Mask a = 1; a <= full_mask(n); ++a) {
    const int low = std::countr_zero(a);
    table[a] = add(table[a & (a - 1)], weights[static_cast<std::size_t>(low)]);
  }
  return Capacity(SetFunction(n, std::move(table)));
}

// Dual capacity: mu~(A) = mu(X) - mu(X \ A).  An involution that swaps sub-
// and supermodularity.  fl(a - b) is monotone in b, so the dual table is
// monotone whenever mu is.
inline Capacity dual(const Capacity& mu) {
  const Mask all = mu.full();
  std::vector<OrderedValue> table;
  table.reserve(std::size_t{1} << mu.ground_size());
  for (Mask a = 0; a <= all; ++a) table.push_back(sub(mu.total(), mu.at(all & ~a)));
  return Capacity(SetFunction(mu.ground_size(), std::move(table)));
}

enum class DistortionKind { square, sqrt, power };

struct Distortion {
  DistortionKind kind = DistortionKind::square;
  double exponent = 1.0;  // for power

  static Distortion square() { return {DistortionKind::square, 2.0}; }
  static Distortion sqrt() { return {DistortionKind::sqrt, 0.5}; }
  static Distortion power(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InputError("distortion power must be > 0");
    return {DistortionKind::power, p};
  }
};

struct DistortionResult {
  SetFunction values;
  // scalar/vector only: mu(X) had a zero entry, so the distortion was applied
  // to raw values instead of values normalized to [0, mu(X)].
  bool raw_values = false;
};

namespace detail {

inline double apply_distortion(const Distortion& t, double x) {
  x = std::max(x, 0.0);  // clamp validation-tolerance noise below the cone
  switch (t.kind) {
    case DistortionKind::square: return x * x;
    case DistortionKind::sqrt: return std::sqrt(x);
    case DistortionKind::power: return std::pow(x, t.exponent);
  }
  throw InputError("unknown distortion");
}

}  // namespace detail

// nu(A) = T(mu(A)).  scalar/vector: entrywise on values normalized to
// [0, mu(X)] (raw with a flag when mu(X) has a zero entry).  sym: square is
// the matrix product, sqrt/power go through the eigendecomposition and
// require PSD values.  The result is a plain set function; for nondecreasing
// T it revalidates as a capacity.
inline DistortionResult distort(const Capacity& mu, const Distortion& t) {
  const std::size_t count = std::size_t{1} << mu.ground_size();
  std::vector<OrderedValue> table;
  table.reserve(count);

  if (mu.kind() == ValueKind::sym) {
    const int n = mu.dim();
    for (Mask a = 0; a < count; ++a) {
      const std::vector<double>& m = mu.at(a).data();
      std::vector<double> out;
      if (t.kind == DistortionKind::square) {
        out = mat_mul(n, m, m);
      } else {
        if (sym_min_eigenvalue(n, m) < -kDefaultTol * (1.0 + norm(mu.at(a))))
          throw NotPsd("distort: sym value is not positive semidefinite");
        const double p = t.kind == DistortionKind::sqrt ? 0.5 : t.exponent;
        out = sym_spectral_apply(n, m, [p](double x) { return std::pow(std::max(x, 0.0), p); });
      }
      table.push_back(OrderedValue::sym(n, std::move(out)));
    }
    table[0] = OrderedValue::zero(mu.kind(), mu.dim());
    return {SetFunction(mu.ground_size(), std::move(table)), false};
  }

  const std::vector<double>& total = mu.total().data();
  bool normalized = true;
  for (double x : total)
    if (!(x > 0.0)) normalized = false;

  for (Mask a = 0; a < count; ++a) {
    std::vector<double> out(mu.at(a).data());
    for (std::size_t c = 0; c < out.size(); ++c) {
      if (normalized)
        out[c] = total[c] * detail::apply_distortion(t, out[c] / total[c]);
      else
        out[c] = detail::apply_distortion(t, out[c]);
    }
    table.push_back(mu.kind() == ValueKind::scalar ? OrderedValue::scalar(out[0])
                                                   : OrderedValue::vector(std::move(out)));
  }
  table[0] = OrderedValue::zero(mu.kind(), mu.dim());
  return {SetFunction(mu.ground_size(), std::move(table)), !normalized};
}

namespace detail {

// Local characterization over covering squares: mu(A+{i,j}) + mu(A) vs
// mu(A+{i}) + mu(A+{j}) for all A and i != j outside A.  On a finite power
// set this is equivalent to the pairwise condition over all (A, B); for
// vector and sym kinds the cone order reduces the statement to scalar
// capacities through positive functionals, componentwise / via the
// eigenvalue test.
inline PropertyReport modularity_local(const SetFunction& sf, double tol, bool submodular) {
  PropertyReport rep;
  rep.property = submodular ? "submodular" : "supermodular";
  rep.tol = tol;
  const int n = sf.ground_size();
  const Mask all = sf.full();
  for (Mask a = 0; a <= all; ++a) {
    for (int i = 0; i < n; ++i) {
      if (mask_contains(a, i)) continue;
      for (int j = i + 1; j < n; ++j) {
        if (mask_contains(a, j)) continue;
        const Mask ai = a | (Mask{1} << i);
        const Mask aj = a | (Mask{1} << j);
        const Mask aij = ai | aj;
        const OrderedValue lhs = add(sf.at(aij), sf.at(a));
        const OrderedValue rhs = add(sf.at(ai), sf.at(aj));
        ++rep.cases;
        const bool ok = submodular ? leq(lhs, rhs, tol) : leq(rhs, lhs, tol);
        if (!ok) {
          rep.verdict = Verdict::refuted;
          Counterexample ce;
          ce.subsets = {{"A", a}, {"A+i", ai}, {"A+j", aj}, {"A+i+j", aij}};
          ce.values = {{"mu(A+i+j) + mu(A)", lhs}, {"mu(A+i) + mu(A+j)", rhs}};
          ce.note = submodular ? "local submodularity fails" : "local supermodularity fails";
          rep.counterexample = std::move(ce);
          return rep;
        }
      }
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

// Slow oracle: the defining inequality over all subset pairs.
inline PropertyReport modularity_exhaustive(const SetFunction& sf, double tol, bool submodular) {
  PropertyReport rep;
  rep.property = submodular ? "submodular (exhaustive)" : "supermodular (exhaustive)";
  rep.tol = tol;
  const Mask all = sf.full();
  for (Mask a = 0; a <= all; ++a) {
    for (Mask b = a; b <= all; ++b) {
      const OrderedValue lhs = add(sf.at(a | b), sf.at(a & b));
      const OrderedValue rhs = add(sf.at(a), sf.at(b));
      ++rep.cases;
      const bool ok = submodular ? leq(lhs, rhs, tol) : leq(rhs, lhs, tol);
      if (!ok) {
        rep.verdict = Verdict::refuted;
        Counterexample ce;
        ce.subsets = {{"A", a}, {"B", b}};
        ce.values = {{"mu(AuB) + mu(AnB)", lhs}, {"mu(A) + mu(B)", rhs}};
        rep.counterexample = std::move(ce);
        return rep;
      }
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

}  // namespace detail

inline PropertyReport is_submodular(const Capacity& mu, double tol = kDefaultTol) {
  return detail::modularity_local(mu.set_function(), tol, true);
}

inline PropertyReport is_supermodular(const Capacity& mu, double tol = kDefaultTol) {
  return detail::modularity_local(mu.set_function(), tol, false);
}

inline PropertyReport is_submodular_exhaustive(const Capacity& mu, double tol = kDefaultTol) {
  return detail::modularity_exhaustive(mu.set_function(), tol, true);
}

inline PropertyReport is_supermodular_exhaustive(const Capacity& mu, double tol = kDefaultTol) {
  return detail::modularity_exhaustive(mu.set_function(), tol, false);
}

namespace detail {

enum class ChainWeight { modulus, positive_part, negative_part };

inline double chain_weight(ChainWeight w, double increment) {
  switch (w) {
    case ChainWeight::modulus: return std::abs(increment);
    case ChainWeight::positive_part: return std::max(increment, 0.0);
    case ChainWeight::negative_part: return std::max(-increment, 0.0);
  }
  return 0.0;
}

// Supremum over chains empty = A_0 c A_1 c ... c A_n = A of the summed
// increment weights, computed per component by longest-path DP over the
// subset lattice below A.  Maximal chains dominate (the weights satisfy the
// triangle inequality under refinement) and the vector supremum decomposes
// componentwise, so dp[A] is the exact supremum.
inline OrderedValue chain_supremum(const SetFunction& sf, Mask a, ChainWeight w) {
  if (sf.kind() == ValueKind::sym)
    throw LatticeUnsupported("set-function variations need a lattice kind (scalar/vector)");
  if (a > sf.full()) throw InputError("subset mask out of range");
  if (!sf.vanishes_at_empty()) throw InputError("variation requires mu(empty) = 0");

  const int components = sf.kind() == ValueKind::scalar ? 1 : sf.dim();
  std::vector<double> result(static_cast<std::size_t>(components), 0.0);
  std::vector<double> dp(std::size_t{1} << sf.ground_size());

  for (int c = 0; c < components; ++c) {
    dp[0] = 0.0;
    for (Mask s = 1; s <= a; ++s) {
      if (s & ~a) continue;
      double best = -std::numeric_limits<double>::infinity();
      const double vs = sf.at(s).data()[static_cast<std::size_t>(c)];
      for (Mask bits = s; bits != 0; bits &= bits - 1) {
        const Mask prev = s & ~(bits & (0u - bits));
        const double cand =
            dp[prev] + chain_weight(w, vs - sf.at(prev).data()[static_cast<std::size_t>(c)]);
        best = std::max(best, cand);
      }
      dp[s] = best;
    }
    result[static_cast<std::size_t>(c)] = dp[a];
  }

  if (sf.kind() == ValueKind::scalar) return OrderedValue::scalar(result[0]);
  return OrderedValue::vector(std::move(result));
}

}  // namespace detail

// |mu|(A): supremum over chains of summed moduli of increments.
inline OrderedValue variation(const SetFunction& sf, Mask a) {
  return detail::chain_supremum(sf, a, detail::ChainWeight::modulus);
}

// mu+(A) and mu-(A): same chains with positive / negative parts of the
// increments.  Together they give the Jordan decomposition mu = mu+ - mu-
// and |mu| = mu+ + mu-.
inline OrderedValue inner_upper_variation(const SetFunction& sf, Mask a) {
  return detail::chain_supremum(sf, a, detail::ChainWeight::positive_part);
}

inline OrderedValue inner_lower_variation(const SetFunction& sf, Mask a) {
  return detail::chain_supremum(sf, a, detail::ChainWeight::negative_part);
}

// Whole-table variants, handy for revalidating mu+ / mu- as capacities.
inline SetFunction variation_table(const SetFunction& sf, detail::ChainWeight w) {
  std::vector<OrderedValue> table;
  table.reserve(std::size_t{1} << sf.ground_size());
  for (Mask a = 0; a <= sf.full(); ++a) table.push_back(detail::chain_supremum(sf, a, w));
  return SetFunction(sf.ground_size(), std::move(table));
}

inline SetFunction upper_variation_table(const SetFunction& sf) {
  return variation_table(sf, detail::ChainWeight::positive_part);
}

inline SetFunction lower_variation_table(const SetFunction& sf) {
  return variation_table(sf, detail::ChainWeight::negative_part);
}

}  // namespace choquet
