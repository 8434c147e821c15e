#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "choquet/errors.hpp"

namespace choquet {

// Eigendecomposition of a small dense symmetric matrix (row-major, n <= 16)
// by cyclic Jacobi rotations.  Stops once the off-diagonal Frobenius norm
// drops below 1e-12 * ||M||_F; throws NoConvergence after max_sweeps sweeps.
struct SymEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major; column k is the eigenvector of values[k]
};

namespace detail {

inline double frobenius(int n, const std::vector<double>& a) {
  double s = 0.0;
  for (int i = 0; i < n * n; ++i) s += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

inline double off_diagonal_frobenius(int n, const std::vector<double>& a) {
  double s = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const double e = a[static_cast<std::size_t>(p * n + q)];
      s += 2.0 * e * e;
    }
  return std::sqrt(s);
}

}  // namespace detail

inline SymEigen jacobi_eigen(int n, std::vector<double> a, int max_sweeps = 100) {
  if (n < 1 || n > 16) throw InputError("jacobi_eigen: order must be in [1, 16]");
  if (static_cast<int>(a.size()) != n * n) throw InputError("jacobi_eigen: matrix size does not match order");

  std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i * n + i)] = 1.0;

  const double threshold = 1e-12 * detail::frobenius(n, a);

  int sweeps = 0;
  while (detail::off_diagonal_frobenius(n, a) > threshold) {
    if (sweeps++ >= max_sweeps) throw NoConvergence("jacobi_eigen: sweep budget exhausted");
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[static_cast<std::size_t>(p * n + q)];
        if (apq == 0.0) continue;
        const double app = a[static_cast<std::size_t>(p * n + p)];
        const double aqq = a[static_cast<std::size_t>(q * n + q)];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[static_cast<std::size_t>(p * n + p)] = app - t * apq;
        a[static_cast<std::size_t>(q * n + q)] = aqq + t * apq;
        a[static_cast<std::size_t>(p * n + q)] = 0.0;
        a[static_cast<std::size_t>(q * n + p)] = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[static_cast<std::size_t>(k * n + p)];
          const double akq = a[static_cast<std::size_t>(k * n + q)];
          const double np = akp - s * (akq + tau * akp);
          const double nq = akq + s * (akp - tau * akq);
          a[static_cast<std::size_t>(k * n + p)] = np;
          a[static_cast<std::size_t>(p * n + k)] = np;
          a[static_cast<std::size_t>(k * n + q)] = nq;
          a[static_cast<std::size_t>(q * n + k)] = nq;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[static_cast<std::size_t>(k * n + p)];
          const double vkq = v[static_cast<std::size_t>(k * n + q)];
          v[static_cast<std::size_t>(k * n + p)] = vkp - s * (vkq + tau * vkp);
          v[static_cast<std::size_t>(k * n + q)] = vkq + s * (vkp - tau * vkq);
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return a[static_cast<std::size_t>(x * n + x)] < a[static_cast<std::size_t>(y * n + y)];
  });

  SymEigen out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    out.values[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(src * n + src)];
    for (int i = 0; i < n; ++i)
      out.vectors[static_cast<std::size_t>(i * n + k)] = v[static_cast<std::size_t>(i * n + src)];
  }
  return out;
}

// Smallest eigenvalue; used for the Loewner-order test.
inline double sym_min_eigenvalue(int n, const std::vector<double>& a) {
  return jacobi_eigen(n, a).values.front();
}

// Spectral norm of a symmetric matrix, i.e. max |eigenvalue|.
inline double sym_spectral_norm(int n, const std::vector<double>& a) {
  const SymEigen e = jacobi_eigen(n, a);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

// V f(Lambda) V^T for a spectral function f applied to the eigenvalues.
template <class F>
std::vector<double> sym_spectral_apply(int n, const std::vector<double>& a, F&& f) {
  const SymEigen e = jacobi_eigen(n, a);
  std::vector<double> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const double fk = f(e.values[static_cast<std::size_t>(k)]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i * n + j)] += fk * e.vectors[static_cast<std::size_t>(i * n + k)] *
                                                    e.vectors[static_cast<std::size_t>(j * n + k)];
  }
  return out;
}

inline std::vector<double> mat_mul(int n, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[static_cast<std::size_t>(i * n + k)];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i * n + j)] += aik * b[static_cast<std::size_t>(k * n + j)];
    }
  return out;
}

}  // namespace choquet
