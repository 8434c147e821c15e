#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "choquet/errors.hpp"

namespace choquet {

// Points of a finite ground set are indexed 0..size-1; subsets are bitmasks.
using Mask = std::uint32_t;

struct GroundSet {
  int size = 0;
  std::vector<std::string> labels;  // optional display names
};

inline Mask full_mask(int n) {
  if (n < 1 || n > 20) throw InputError("ground size must be in [1, 20]");
  return (Mask{1} << n) - 1;
}

inline int mask_size(Mask a) { return std::popcount(a); }

inline bool mask_contains(Mask a, int i) { return (a >> i) & 1u; }

inline std::vector<int> mask_to_indices(Mask a) {
  std::vector<int> out;
  for (int i = 0; a != 0; ++i, a >>= 1)
    if (a & 1u) out.push_back(i);
  return out;
}

inline Mask mask_from_indices(const std::vector<int>& indices, int ground_size) {
  Mask m = 0;
  for (int i : indices) {
    if (i < 0 || i >= ground_size) throw InputError("subset index out of range");
    const Mask bit = Mask{1} << i;
    if (m & bit) throw InputError("duplicate subset index");
    m |= bit;
  }
  return m;
}

// A real-valued function on the ground set; for finite X this is just a
// point of R^N with the pointwise order.
class GroundFunction {
 public:
  GroundFunction() = default;

  explicit GroundFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InputError("ground function needs at least one value");
    for (double x : values_)
      if (!std::isfinite(x)) throw InputError("ground function values must be finite");
  }

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

inline GroundFunction constant_function(int n, double c) {
  return GroundFunction(std::vector<double>(static_cast<std::size_t>(n), c));
}

inline GroundFunction indicator_function(int n, Mask k) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    if (mask_contains(k, i)) v[static_cast<std::size_t>(i)] = 1.0;
  return GroundFunction(std::move(v));
}

namespace detail {

inline void require_same_ground(const GroundFunction& f, const GroundFunction& g, const char* op) {
  if (f.size() != g.size())
    throw GroundMismatch(std::string(op) + ": functions live on different ground sets");
}

template <class F>
GroundFunction zip(const GroundFunction& f, const GroundFunction& g, const char* op, F&& fn) {
  require_same_ground(f, g, op);
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(f.values()[i], g.values()[i]);
  return GroundFunction(std::move(out));
}

template <class F>
GroundFunction map(const GroundFunction& f, F&& fn) {
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(f.values()[i]);
  return GroundFunction(std::move(out));
}

}  // namespace detail

inline GroundFunction operator+(const GroundFunction& f, const GroundFunction& g) {
  return detail::zip(f, g, "add", [](double a, double b) { return a + b; });
}

inline GroundFunction operator-(const GroundFunction& f, const GroundFunction& g) {
  return detail::zip(f, g, "sub", [](double a, double b) { return a - b; });
}

inline GroundFunction operator*(double a, const GroundFunction& f) {
  return detail::map(f, [a](double x) { return a * x; });
}

inline GroundFunction operator+(const GroundFunction& f, double c) {
  return detail::map(f, [c](double x) { return x + c; });
}

inline GroundFunction pointwise_max(const GroundFunction& f, const GroundFunction& g) {
  return detail::zip(f, g, "pointwise_max", [](double a, double b) { return std::max(a, b); });
}

inline GroundFunction pointwise_min(const GroundFunction& f, const GroundFunction& g) {
  return detail::zip(f, g, "pointwise_min", [](double a, double b) { return std::min(a, b); });
}

inline GroundFunction abs_function(const GroundFunction& f) {
  return detail::map(f, [](double x) { return std::abs(x); });
}

inline bool pointwise_leq(const GroundFunction& f, const GroundFunction& g) {
  detail::require_same_ground(f, g, "pointwise_leq");
  for (std::size_t i = 0; i < f.values().size(); ++i)
    if (f.values()[i] > g.values()[i]) return false;
  return true;
}

inline double min_over(const GroundFunction& f, Mask a) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i)
    if (mask_contains(a, i)) m = std::min(m, f[i]);
  return m;
}

inline double max_over(const GroundFunction& f, Mask a) {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i)
    if (mask_contains(a, i)) m = std::max(m, f[i]);
  return m;
}

inline double sup_norm(const GroundFunction& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace choquet
