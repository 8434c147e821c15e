#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "choquet/capacity.hpp"
#include "choquet/errors.hpp"
#include "choquet/ground.hpp"
#include "choquet/ordered_value.hpp"
#include "choquet/rng.hpp"

namespace choquet {

namespace detail {

inline void check_integrand(const GroundFunction& f, const SetFunction& mu, Mask a) {
  if (f.size() != mu.ground_size())
    throw GroundMismatch("integral: function and set function live on different grounds");
  if (a > mu.full()) throw InputError("integral: subset mask out of range");
  if (a == 0) throw EmptySubset("integral over the empty subset");
  if (!mu.vanishes_at_empty()) throw InputError("integral requires mu(empty) = 0");
}

inline Mask upper_contour(const GroundFunction& f, Mask a, double t) {
  Mask s = 0;
  for (int i = 0; i < f.size(); ++i)
    if (mask_contains(a, i) && f[i] >= t) s |= Mask{1} << i;
  return s;
}

}  // namespace detail

// Closed form of the Choquet integral of f over A.  Negative integrands are
// handled by shifting with min(f, 0) and translation invariance; on the
// shifted function the survival set {f >= t} is a step function of t whose
// plateaus are the suffix sets U_i of the sorted points, so the integral is
// the finite sum of increment * mu(U_i).  Zero increments are skipped, which
// makes calibration (f == 1) and indicator integrals exact and the result
// independent of the order among ties.
inline OrderedValue choquet_sorted(const GroundFunction& f, const SetFunction& mu, Mask a) {
  detail::check_integrand(f, mu, a);

  const std::vector<int> points = mask_to_indices(a);
  const double lowest = min_over(f, a);
  const double shift = std::min(lowest, 0.0);

  std::vector<std::pair<double, int>> order;
  order.reserve(points.size());
  for (int p : points) order.emplace_back(f[p] - shift, p);
  std::stable_sort(order.begin(), order.end());

  OrderedValue result = OrderedValue::zero(mu.kind(), mu.dim());
  if (shift != 0.0) result = scale(shift, mu.at(a));

  Mask upper = a;
  double prev = 0.0;
  for (const auto& [g, p] : order) {
    const double increment = g - prev;
    if (increment != 0.0) result = add(result, scale(increment, mu.at(upper)));
    prev = g;
    upper &= ~(Mask{1} << p);
  }
  return result;
}

inline OrderedValue choquet_sorted(const GroundFunction& f, const Capacity& mu, Mask a) {
  return choquet_sorted(f, mu.set_function(), a);
}

inline OrderedValue choquet_sorted(const GroundFunction& f, const Capacity& mu) {
  return choquet_sorted(f, mu.set_function(), mu.full());
}

// Independent route: the literal two-improper-integral definition
//   int_0^inf mu({f >= t}) dt + int_-inf^0 [mu({f >= t}) - mu(A)] dt
// by left-endpoint Riemann sums over uniform partitions of [0, max f+] and
// [min -f-, 0] with `steps` cells each.  For monotone mu the error against
// choquet_sorted is at most 2 * ||f||_inf * ||mu(A)|| / steps and shrinks
// under refinement (the integrands are nonincreasing in t).
inline OrderedValue choquet_quadrature(const GroundFunction& f, const SetFunction& mu, Mask a,
                                       long steps) {
  detail::check_integrand(f, mu, a);
  if (steps < 1) throw InputError("quadrature needs steps >= 1");

  const double upper_limit = std::max(max_over(f, a), 0.0);
  const double lower_limit = std::min(min_over(f, a), 0.0);

  OrderedValue total = OrderedValue::zero(mu.kind(), mu.dim());
  if (upper_limit > 0.0) {
    const double h = upper_limit / static_cast<double>(steps);
    for (long j = 0; j < steps; ++j) {
      const double t = static_cast<double>(j) * h;
      total = add(total, scale(h, mu.at(detail::upper_contour(f, a, t))));
    }
  }
  if (lower_limit < 0.0) {
    const double h = -lower_limit / static_cast<double>(steps);
    for (long j = 0; j < steps; ++j) {
      const double t = lower_limit + static_cast<double>(j) * h;
      total = add(total, scale(h, sub(mu.at(detail::upper_contour(f, a, t)), mu.at(a))));
    }
  }
  return total;
}

inline OrderedValue choquet_quadrature(const GroundFunction& f, const Capacity& mu, Mask a,
                                       long steps) {
  return choquet_quadrature(f, mu.set_function(), a, steps);
}

// Guaranteed bound on ||quadrature - sorted||: 2 ||f||_inf ||mu(A)|| / steps
// for capacities.  For signed set functions of lattice kind the survival
// function is no longer monotone in t and the right scale is the chain
// variation |mu|(A), which coincides with mu(A) when mu is monotone.
inline double quadrature_error_bound(const GroundFunction& f, const SetFunction& mu, Mask a,
                                     long steps) {
  double fmax = 0.0;
  for (int i = 0; i < f.size(); ++i)
    if (mask_contains(a, i)) fmax = std::max(fmax, std::abs(f[i]));
  const double scale =
      mu.kind() == ValueKind::sym ? norm(mu.at(a)) : norm(variation(mu, a));
  return 2.0 * fmax * scale / static_cast<double>(steps);
}

// No pair of points is ranked oppositely by f and g.
inline bool is_comonotone(const GroundFunction& f, const GroundFunction& g) {
  detail::require_same_ground(f, g, "is_comonotone");
  const int n = f.size();
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t)
      if ((f[s] - f[t]) * (g[s] - g[t]) < 0.0) return false;
  return true;
}

// Two sorted value arrays laid out along one random permutation share a
// common ordering of the ground set, hence are comonotone by construction.
// Deterministic for a fixed seed.
inline std::pair<GroundFunction, GroundFunction> random_comonotone_pair(std::uint64_t seed, int n,
                                                                        double lo, double hi) {
  if (n < 1) throw InputError("random_comonotone_pair needs n >= 1");
  if (!(lo <= hi)) throw InputError("random_comonotone_pair: empty value range");
  Rng rng(seed);
  std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (double& x : a) x = rng.uniform(lo, hi);
  for (double& x : b) x = rng.uniform(lo, hi);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::vector<int> sigma = rng.permutation(n);
  std::vector<double> fv(static_cast<std::size_t>(n)), gv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    fv[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] = a[static_cast<std::size_t>(i)];
    gv[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] = b[static_cast<std::size_t>(i)];
  }
  return {GroundFunction(std::move(fv)), GroundFunction(std::move(gv))};
}

}  // namespace choquet
