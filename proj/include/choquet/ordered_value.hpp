#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "choquet/errors.hpp"
#include "choquet/jacobi.hpp"

namespace choquet {

// Default tolerance for order comparisons.  Every order-sensitive operation
// takes its tolerance explicitly so callers and tests can force 0.
inline constexpr double kDefaultTol = 1e-9;

enum class ValueKind { scalar, vector, sym };

inline const char* kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::scalar: return "scalar";
    case ValueKind::vector: return "vector";
    case ValueKind::sym: return "sym";
  }
  return "?";
}

// A value in one of three concrete ordered Banach spaces:
//   scalar — R with the usual order and |.|,
//   vector — R^n with the coordinatewise order and the sup norm,
//   sym    — n x n real symmetric matrices with the Loewner order and the
//            spectral norm.
// Values are immutable after construction.  scalar and vector are lattice
// kinds; sym is ordered but not a lattice.
class OrderedValue {
 public:
  OrderedValue() : kind_(ValueKind::scalar), dim_(1), data_(1, 0.0) {}

  static OrderedValue scalar(double x) {
    require_finite_entry(x);
    return OrderedValue(ValueKind::scalar, 1, {x});
  }

  static OrderedValue vector(std::vector<double> entries) {
    if (entries.empty()) throw InputError("vector value needs at least one entry");
    for (double x : entries) require_finite_entry(x);
    const int n = static_cast<int>(entries.size());
    return OrderedValue(ValueKind::vector, n, std::move(entries));
  }

  // Symmetrizes (M + M^T)/2 to absorb serialization noise; asymmetry beyond
  // 1e-9 relative to the largest entry is an error.
  static OrderedValue sym(int n, std::vector<double> row_major) {
    if (n < 1 || n > 16) throw InputError("sym dimension must be in [1, 16]");
    if (static_cast<int>(row_major.size()) != n * n)
      throw InputError("sym value needs n*n entries");
    double amax = 0.0;
    for (double x : row_major) {
      require_finite_entry(x);
      amax = std::max(amax, std::abs(x));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = std::abs(row_major[idx(i, j, n)] - row_major[idx(j, i, n)]);
        if (d > 1e-9 * (1.0 + amax)) throw InputError("sym payload is not symmetric");
      }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double m = 0.5 * (row_major[idx(i, j, n)] + row_major[idx(j, i, n)]);
        row_major[idx(i, j, n)] = m;
        row_major[idx(j, i, n)] = m;
      }
    return OrderedValue(ValueKind::sym, n, std::move(row_major));
  }

  static OrderedValue zero(ValueKind kind, int dim) {
    switch (kind) {
      case ValueKind::scalar: return scalar(0.0);
      case ValueKind::vector: return vector(std::vector<double>(static_cast<std::size_t>(dim), 0.0));
      case ValueKind::sym:
        return sym(dim, std::vector<double>(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0));
    }
    throw InputError("unknown value kind");
  }

  static OrderedValue zero_like(const OrderedValue& v) { return zero(v.kind_, v.dim_); }

  ValueKind kind() const { return kind_; }

  // 1 for scalar, n for vector and sym.
  int dim() const { return dim_; }

  bool lattice_kind() const { return kind_ != ValueKind::sym; }

  bool same_shape(const OrderedValue& o) const { return kind_ == o.kind_ && dim_ == o.dim_; }

  double as_scalar() const {
    if (kind_ != ValueKind::scalar) throw KindMismatch("as_scalar on a non-scalar value");
    return data_[0];
  }

  const std::vector<double>& data() const { return data_; }

 private:
  OrderedValue(ValueKind kind, int dim, std::vector<double> data)
      : kind_(kind), dim_(dim), data_(std::move(data)) {}

  static std::size_t idx(int i, int j, int n) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
  }

  static void require_finite_entry(double x) {
    if (!std::isfinite(x)) throw InputError("value entries must be finite");
  }

  ValueKind kind_;
  int dim_;
  std::vector<double> data_;
};

namespace detail {

inline void require_same_shape(const OrderedValue& u, const OrderedValue& v, const char* op) {
  if (!u.same_shape(v))
    throw KindMismatch(std::string(op) + ": values of kind/dim " + kind_name(u.kind()) + "/" +
                       std::to_string(u.dim()) + " and " + kind_name(v.kind()) + "/" +
                       std::to_string(v.dim()) + " cannot be combined");
}

template <class F>
OrderedValue combine(const OrderedValue& u, const OrderedValue& v, const char* op, F&& f) {
  require_same_shape(u, v, op);
  std::vector<double> out(u.data().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(u.data()[i], v.data()[i]);
  switch (u.kind()) {
    case ValueKind::scalar: return OrderedValue::scalar(out[0]);
    case ValueKind::vector: return OrderedValue::vector(std::move(out));
    case ValueKind::sym: return OrderedValue::sym(u.dim(), std::move(out));
  }
  throw InputError("unknown value kind");
}

template <class F>
OrderedValue map(const OrderedValue& u, F&& f) {
  std::vector<double> out(u.data().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(u.data()[i]);
  switch (u.kind()) {
    case ValueKind::scalar: return OrderedValue::scalar(out[0]);
    case ValueKind::vector: return OrderedValue::vector(std::move(out));
    case ValueKind::sym: return OrderedValue::sym(u.dim(), std::move(out));
  }
  throw InputError("unknown value kind");
}

inline void require_lattice(const OrderedValue& u, const char* op) {
  if (!u.lattice_kind())
    throw LatticeUnsupported(std::string(op) + ": sym values are ordered but form no lattice");
}

}  // namespace detail

inline OrderedValue add(const OrderedValue& u, const OrderedValue& v) {
  return detail::combine(u, v, "add", [](double a, double b) { return a + b; });
}

inline OrderedValue sub(const OrderedValue& u, const OrderedValue& v) {
  return detail::combine(u, v, "sub", [](double a, double b) { return a - b; });
}

inline OrderedValue scale(double a, const OrderedValue& u) {
  if (!std::isfinite(a)) throw InputError("scale factor must be finite");
  return detail::map(u, [a](double x) { return a * x; });
}

inline OrderedValue operator+(const OrderedValue& u, const OrderedValue& v) { return add(u, v); }
inline OrderedValue operator-(const OrderedValue& u, const OrderedValue& v) { return sub(u, v); }
inline OrderedValue operator-(const OrderedValue& u) { return scale(-1.0, u); }
inline OrderedValue operator*(double a, const OrderedValue& u) { return scale(a, u); }

inline bool exactly_equal(const OrderedValue& u, const OrderedValue& v) {
  if (!u.same_shape(v)) return false;
  for (std::size_t i = 0; i < u.data().size(); ++i)
    if (u.data()[i] != v.data()[i]) return false;
  return true;
}

inline bool is_zero(const OrderedValue& u) {
  for (double x : u.data())
    if (x != 0.0) return false;
  return true;
}

// Cone-order comparison u <= v up to tolerance: componentwise for scalar and
// vector, smallest eigenvalue of v - u for sym (Loewner order).
inline bool leq(const OrderedValue& u, const OrderedValue& v, double tol) {
  if (tol < 0.0 || !std::isfinite(tol)) throw InputError("leq: tolerance must be finite and >= 0");
  detail::require_same_shape(u, v, "leq");
  if (u.kind() == ValueKind::sym) {
    const OrderedValue d = sub(v, u);
    return sym_min_eigenvalue(u.dim(), d.data()) >= -tol;
  }
  for (std::size_t i = 0; i < u.data().size(); ++i)
    if (v.data()[i] - u.data()[i] < -tol) return false;
  return true;
}

// |x| for scalar, sup norm for vector, spectral norm for sym.
inline double norm(const OrderedValue& u) {
  if (u.kind() == ValueKind::sym) return sym_spectral_norm(u.dim(), u.data());
  double m = 0.0;
  for (double x : u.data()) m = std::max(m, std::abs(x));
  return m;
}

inline OrderedValue sup(const OrderedValue& u, const OrderedValue& v) {
  detail::require_lattice(u, "sup");
  return detail::combine(u, v, "sup", [](double a, double b) { return std::max(a, b); });
}

inline OrderedValue inf(const OrderedValue& u, const OrderedValue& v) {
  detail::require_lattice(u, "inf");
  return detail::combine(u, v, "inf", [](double a, double b) { return std::min(a, b); });
}

inline OrderedValue pos_part(const OrderedValue& u) {
  detail::require_lattice(u, "pos_part");
  return detail::map(u, [](double x) { return std::max(x, 0.0); });
}

inline OrderedValue neg_part(const OrderedValue& u) {
  detail::require_lattice(u, "neg_part");
  return detail::map(u, [](double x) { return std::max(-x, 0.0); });
}

// pos_part + neg_part; entrywise this is |x|, so u = pos - neg and
// modulus = pos + neg hold exactly.
inline OrderedValue modulus(const OrderedValue& u) {
  detail::require_lattice(u, "modulus");
  return detail::map(u, [](double x) { return std::abs(x); });
}

inline double min_eigenvalue(const OrderedValue& m) {
  if (m.kind() != ValueKind::sym) throw KindMismatch("min_eigenvalue expects a sym value");
  return sym_min_eigenvalue(m.dim(), m.data());
}

inline std::string to_string(const OrderedValue& u, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  switch (u.kind()) {
    case ValueKind::scalar:
      os << u.data()[0];
      break;
    case ValueKind::vector: {
      os << "(";
      for (int i = 0; i < u.dim(); ++i) os << (i ? ", " : "") << u.data()[static_cast<std::size_t>(i)];
      os << ")";
      break;
    }
    case ValueKind::sym: {
      os << "[";
      for (int i = 0; i < u.dim(); ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < u.dim(); ++j)
          os << (j ? " " : "") << u.data()[static_cast<std::size_t>(i * u.dim() + j)];
      }
      os << "]";
      break;
    }
  }
  return os.str();
}

}  // namespace choquet
