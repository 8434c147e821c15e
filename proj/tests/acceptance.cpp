// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure.  Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace choquet;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << idx << ". " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

struct KindSpec {
  ValueKind kind;
  int dim;
  int max_n;
};

const KindSpec kKinds[3] = {{ValueKind::scalar, 1, 8}, {ValueKind::vector, 4, 6},
                            {ValueKind::sym, 3, 6}};

// 1. Integral axioms: >= 1000 randomized instances per value kind.
//    Calibration exact; positivity, monotonicity, positive homogeneity,
//    translation invariance and comonotonic additivity within 1e-9.
void criterion_integral_axioms() {
  const double tol = 1e-9;
  long cases = 0;
  long bad = 0;
  std::ostringstream detail;
  for (const KindSpec& ks : kKinds) {
    Rng rng(0xA1 + static_cast<std::uint64_t>(ks.dim));
    for (int rep = 0; rep < 1000; ++rep) {
      const int n = rng.uniform_int(1, ks.max_n);
      const Capacity mu = ts::random_capacity(rng, ks.kind, ks.dim, n);
      const SetFunction& sf = mu.set_function();
      const Mask a = 1u + static_cast<Mask>(rng.next_u64() % mu.full());
      ++cases;

      bool ok = true;
      // calibration, exact
      ok = ok && exactly_equal(choquet_sorted(constant_function(n, 1.0), sf, a), mu.at(a));

      // positivity
      const GroundFunction fpos = ts::random_function(rng, n, 0.0, 2.0);
      ok = ok && leq(OrderedValue::zero(ks.kind, mu.dim()), choquet_sorted(fpos, sf, a), tol);

      // monotonicity
      const GroundFunction f = ts::random_function(rng, n, -1.0, 1.0);
      const GroundFunction g = f + ts::random_function(rng, n, 0.0, 1.0);
      ok = ok && leq(choquet_sorted(f, sf, a), choquet_sorted(g, sf, a), tol);

      // positive homogeneity
      const double alpha = rng.uniform(0.0, 2.0);
      ok = ok && norm(sub(choquet_sorted(alpha * f, sf, a),
                          scale(alpha, choquet_sorted(f, sf, a)))) <= tol;

      // translation invariance
      const double c = rng.uniform(-2.0, 2.0);
      ok = ok && norm(sub(choquet_sorted(f + c, sf, a),
                          add(choquet_sorted(f, sf, a), scale(c, mu.at(a))))) <= tol;

      // comonotonic additivity on generated pairs
      const auto [u, v] = random_comonotone_pair(rng.next_u64(), n, -2.0, 2.0);
      ok = ok && norm(sub(choquet_sorted(u + v, sf, a),
                          add(choquet_sorted(u, sf, a), choquet_sorted(v, sf, a)))) <= tol;

      if (!ok) ++bad;
    }
  }
  detail << cases << " instances across 3 kinds, tol 1e-9, " << bad << " violations";
  report(1, "integral axioms", bad == 0, detail.str());
}

// 2. Oracle equivalence: quadrature vs sorted within 2 ||f||inf ||mu(A)|| / steps
//    for steps in {100, 10000} on 200 random instances; the error never grows
//    under refinement.
void criterion_oracle_equivalence() {
  long bad = 0;
  Rng rng(0xB2);
  for (int rep = 0; rep < 200; ++rep) {
    const KindSpec& ks = kKinds[rep % 3];
    const int n = rng.uniform_int(1, std::min(ks.max_n, 6));
    const Capacity mu = ts::random_capacity(rng, ks.kind, ks.dim, n);
    const Mask a = 1u + static_cast<Mask>(rng.next_u64() % mu.full());
    const GroundFunction f = ts::random_function(rng, n, -2.0, 2.0);
    const OrderedValue exact = choquet_sorted(f, mu.set_function(), a);

    // the stated bound, with the literal mu(A) scale (mu is a capacity here)
    double fmax = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask_contains(a, i)) fmax = std::max(fmax, std::abs(f[i]));
    const double scale = fmax * norm(mu.at(a));

    double previous = 0.0;
    bool ok = true;
    for (const long steps : {100L, 10000L}) {
      const OrderedValue approx = choquet_quadrature(f, mu.set_function(), a, steps);
      const double err = norm(sub(approx, exact));
      ok = ok && err <= 2.0 * scale / static_cast<double>(steps);
      // refinement never increases the error beyond summation noise
      if (steps == 10000L) ok = ok && err <= previous + 1e-12 * (1.0 + scale);
      previous = err;
    }
    if (!ok) ++bad;
  }
  report(2, "oracle equivalence of the two integral routes", bad == 0,
         "200 instances, steps 100 and 10000, " + std::to_string(bad) + " violations");
}

// 3. Subadditivity and submodularity transfer for >= 50 certified-submodular
//    capacities over 500 pairs each, and a found violation for a certified
//    non-submodular capacity.
void criterion_submodular_transfer() {
  const double tol = 1e-9;
  long bad = 0;
  int capacities = 0;
  Rng rng(0xC3);
  for (int rep = 0; rep < 51; ++rep) {
    const KindSpec& ks = kKinds[rep % 3];
    const int n = rng.uniform_int(2, std::min(ks.max_n, 5));
    const Capacity mu = ts::random_submodular(rng, ks.kind, ks.dim, n);
    if (!is_submodular(mu, kDefaultTol).holds()) {
      ++bad;
      continue;
    }
    ++capacities;
    const Mask a = mu.full();
    for (int pair = 0; pair < 500; ++pair) {
      const GroundFunction f = ts::random_function(rng, n, -2.0, 2.0);
      const GroundFunction g = ts::random_function(rng, n, -2.0, 2.0);
      const OrderedValue int_f = choquet_sorted(f, mu.set_function(), a);
      const OrderedValue int_g = choquet_sorted(g, mu.set_function(), a);
      const OrderedValue rhs = add(int_f, int_g);
      if (!leq(choquet_sorted(f + g, mu.set_function(), a), rhs, tol)) ++bad;
      const OrderedValue transfer = add(choquet_sorted(pointwise_max(f, g), mu.set_function(), a),
                                        choquet_sorted(pointwise_min(f, g), mu.set_function(), a));
      if (!leq(transfer, rhs, tol)) ++bad;
    }
  }

  // certified non-submodular capacity with a found subadditivity violation
  const Capacity u = ts::unanimity(2, 3);
  bool found_violation = false;
  if (is_submodular(u, kDefaultTol).refuted()) {
    AxiomCheckOptions opt;
    opt.samples = 500;
    opt.seed = 0xC3;
    found_violation = check_subadditivity(cb_operator(u), opt).refuted();
  }

  report(3, "subadditivity and submodularity transfer", bad == 0 && found_violation,
         std::to_string(capacities) + " certified-submodular capacities, 500 pairs each, tol 1e-9; "
                                      "non-submodular violation " +
             (found_violation ? "found" : "NOT found"));
}

// 4. Modulus inequality on lattice kinds (under the submodularity hypothesis
//    of the subadditivity theorem): |I(f) - I(g)| <= I(|f-g|) at 1e-9 over
//    500 pairs.
void criterion_modulus_inequality() {
  const double tol = 1e-9;
  long bad = 0;
  Rng rng(0xD4);
  for (int rep = 0; rep < 10; ++rep) {
    const ValueKind kind = rep % 2 == 0 ? ValueKind::scalar : ValueKind::vector;
    const int dim = kind == ValueKind::scalar ? 1 : 4;
    const int n = rng.uniform_int(2, 5);
    const Capacity mu = ts::random_submodular(rng, kind, dim, n);
    for (int pair = 0; pair < 50; ++pair) {
      const GroundFunction f = ts::random_function(rng, n, -2.0, 2.0);
      const GroundFunction g = ts::random_function(rng, n, -2.0, 2.0);
      const OrderedValue diff = sub(choquet_sorted(f, mu.set_function(), mu.full()),
                                    choquet_sorted(g, mu.set_function(), mu.full()));
      const OrderedValue bound = choquet_sorted(abs_function(f - g), mu.set_function(), mu.full());
      if (!leq(modulus(diff), bound, tol)) ++bad;
    }
  }
  report(4, "modulus inequality for lattice kinds", bad == 0,
         "500 pairs over submodular capacities, tol 1e-9, " + std::to_string(bad) + " violations");
}

// 5. Capacity algebra: exact dual involution over the corpus (N <= 6), the
//    dual swaps the modularity verdicts, the local submodularity verdict
//    matches the exhaustive one for N <= 6, and additive measures certify
//    both submodular and supermodular.
void criterion_capacity_algebra() {
  long bad = 0;
  long checked = 0;
  for (const KindSpec& ks : kKinds) {
    const std::vector<Capacity> corpus = ts::corpus(ks.kind, std::min(ks.dim, 2), std::min(ks.max_n, 6));
    for (const Capacity& mu : corpus) {
      ++checked;
      const Capacity dd = dual(dual(mu));
      for (Mask a = 0; a <= mu.full(); ++a)
        if (!exactly_equal(dd.at(a), mu.at(a))) ++bad;

      const double tol = ks.kind == ValueKind::sym ? 1e-12 : 0.0;
      const bool sub_local = is_submodular(mu, tol).holds();
      const bool super_local = is_supermodular(mu, tol).holds();
      if (sub_local != is_submodular_exhaustive(mu, tol).holds()) ++bad;
      if (super_local != is_supermodular_exhaustive(mu, tol).holds()) ++bad;

      const Capacity d = dual(mu);
      if (sub_local != is_supermodular(d, tol).holds()) ++bad;
      if (super_local != is_submodular(d, tol).holds()) ++bad;
    }
  }

  Rng rng(0xE5);
  for (int rep = 0; rep < 20; ++rep) {
    const KindSpec& ks = kKinds[rep % 3];
    const Capacity add_mu = ts::random_additive(rng, ks.kind, ks.dim, rng.uniform_int(1, 5));
    const double tol = ks.kind == ValueKind::sym ? 1e-12 : 0.0;
    if (!is_submodular(add_mu, tol).holds() || !is_supermodular(add_mu, tol).holds()) ++bad;
  }

  report(5, "capacity algebra: duality and modularity verdicts", bad == 0,
         std::to_string(checked) + " corpus capacities + 20 additive, " + std::to_string(bad) +
             " violations");
}

// 6. Representation roundtrip at finite scale: extraction from the integral
//    operator reproduces every corpus capacity exactly on all 2^N subsets,
//    verify_representation holds at 1e-9 over 500 samples, and min/max
//    extract the unanimity / all-but-empty capacities exactly.
void criterion_representation_roundtrip() {
  long bad = 0;
  long checked = 0;
  for (const KindSpec& ks : kKinds) {
    const std::vector<Capacity> corpus = ts::corpus(ks.kind, std::min(ks.dim, 2), 5, 11);
    for (const Capacity& mu : corpus) {
      ++checked;
      const OperatorHandle op = cb_operator(mu);
      const Capacity back = extract_capacity(op);
      for (Mask a = 0; a <= mu.full(); ++a)
        if (!exactly_equal(back.at(a), mu.at(a))) ++bad;
      if (!verify_representation(op, mu, 500, 0x6F + checked, 1e-9).holds()) ++bad;
    }
  }

  const Capacity from_min = extract_capacity(min_operator(4));
  const Capacity from_max = extract_capacity(max_operator(4));
  for (Mask a = 0; a <= 15u; ++a) {
    if (from_min.at(a).as_scalar() != (a == 15u ? 1.0 : 0.0)) ++bad;
    if (from_max.at(a).as_scalar() != (a == 0u ? 0.0 : 1.0)) ++bad;
  }

  report(6, "representation roundtrip", bad == 0,
         std::to_string(checked) + " corpus capacities, 500 samples each at 1e-9, " +
             std::to_string(bad) + " violations");
}

// 7. Variation and decomposition: Jordan identities exhaustively for N <= 5;
//    grid variation of monotone operators telescopes on grids up to 5000
//    nodes; decomposition recomposes exactly on every node with monotone
//    parts; a mixed-sign linear functional splits into its positive and
//    negative weight parts.
void criterion_variation_decomposition() {
  const double tol = 1e-9;
  long bad = 0;
  Rng rng(0xF6);

  // Jordan identities, exhaustive over subsets
  for (int rep = 0; rep < 30; ++rep) {
    const ValueKind kind = rep % 2 == 0 ? ValueKind::scalar : ValueKind::vector;
    const int dim = kind == ValueKind::scalar ? 1 : 2;
    const int n = rng.uniform_int(1, 5);
    const SetFunction sf = ts::random_signed(rng, kind, dim, n);
    const SetFunction up = upper_variation_table(sf);
    const SetFunction low = lower_variation_table(sf);
    for (Mask a = 0; a <= sf.full(); ++a) {
      if (norm(sub(sf.at(a), sub(up.at(a), low.at(a)))) > tol) ++bad;
      if (norm(sub(variation(sf, a), add(up.at(a), low.at(a)))) > tol) ++bad;
    }
    if (!validate_capacity(up, 1e-12).ok() || !validate_capacity(low, 1e-12).ok()) ++bad;
  }

  // grid variation telescoping for monotone operators: every comparable pair
  // on a small grid, sampled pairs on grids up to ~5000 nodes
  {
    const GridLattice small(2, 4, -1.0, 1.0);  // 25 nodes, 224 strictly comparable pairs
    const Capacity mu = ts::random_capacity(rng, ValueKind::scalar, 1, 2);
    for (const OperatorHandle& op : {cb_operator(mu), min_operator(2), max_operator(2)}) {
      for (int a0 = 0; a0 <= 4; ++a0)
        for (int a1 = 0; a1 <= 4; ++a1)
          for (int b0 = a0; b0 <= 4; ++b0)
            for (int b1 = a1; b1 <= 4; ++b1) {
              const GroundFunction f = small.node({a0, a1});
              const GroundFunction g = small.node({b0, b1});
              if (norm(sub(grid_variation(op, small, f, g), sub(op(g), op(f)))) > tol) ++bad;
            }
    }
  }
  const std::vector<GridLattice> grids = {GridLattice(5, 4, 0.0, 1.0),    // 3125 nodes
                                          GridLattice(3, 16, -1.0, 1.0),  // 4913 nodes
                                          GridLattice(2, 10, -0.5, 2.0)};
  for (const GridLattice& grid : grids) {
    const int n = grid.ground_size();
    const Capacity mu = ts::random_capacity(rng, ValueKind::scalar, 1, n);
    for (const OperatorHandle& op : {cb_operator(mu), min_operator(n), max_operator(n)}) {
      for (int pair = 0; pair < 20; ++pair) {
        std::vector<int> lf(static_cast<std::size_t>(n)), lg(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          lf[static_cast<std::size_t>(i)] = rng.uniform_int(0, grid.levels());
          lg[static_cast<std::size_t>(i)] =
              rng.uniform_int(lf[static_cast<std::size_t>(i)], grid.levels());
        }
        const GroundFunction f = grid.node(lf);
        const GroundFunction g = grid.node(lg);
        const OrderedValue var = grid_variation(op, grid, f, g);
        if (norm(sub(var, sub(op(g), op(f)))) > tol) ++bad;
      }
    }
  }

  // decomposition: exact recomposition on a dyadic grid, monotone parts
  const GridLattice grid(2, 4, -1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const SetFunction nu = ts::random_signed(rng, ValueKind::scalar, 1, 2);
    const OperatorHandle op = cb_operator(nu, "cb_signed");
    const Decomposition d = decompose(op, grid);
    std::vector<int> lv(2, 0);
    for (long idx = 0; idx < grid.node_count(); ++idx) {
      const GroundFunction f = grid.node(lv);
      if (norm(sub(sub(d.i1(f), d.i2(f)), op(f))) != 0.0) ++bad;  // exact on dyadic data
      for (int i = 0; i < 2; ++i) {
        if (++lv[static_cast<std::size_t>(i)] <= 4) break;
        lv[static_cast<std::size_t>(i)] = 0;
      }
    }
    if (!check_decomposition(op, d, grid, tol).holds()) ++bad;
  }

  // mixed-sign linear functional splits into positive / negative weights
  const OperatorHandle linear = weighted_sum_operator(
      {OrderedValue::scalar(0.75), OrderedValue::scalar(-0.5)});
  const Decomposition d = decompose(linear, grid);
  std::vector<int> lv(2, 0);
  for (long idx = 0; idx < grid.node_count(); ++idx) {
    const GroundFunction f = grid.node(lv);
    if (std::abs(d.i1(f).as_scalar() - 0.75 * f[0]) > tol) ++bad;
    if (std::abs(d.i2(f).as_scalar() - 0.5 * f[1]) > tol) ++bad;
    for (int i = 0; i < 2; ++i) {
      if (++lv[static_cast<std::size_t>(i)] <= 4) break;
      lv[static_cast<std::size_t>(i)] = 0;
    }
  }

  report(7, "variation and decomposition", bad == 0,
         "Jordan N<=5, grids up to 4913 nodes, exact recomposition, " + std::to_string(bad) +
             " violations");
}

// 8. Eigensolver: reconstruction within 1e-9 ||M||_F for random symmetric
//    matrices up to n = 8, and the Loewner order test agrees with the 2x2
//    closed form.
void criterion_eigensolver() {
  long bad = 0;
  Rng rng(0x88);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = rng.uniform_int(1, 8);
    std::vector<double> m(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double x = rng.uniform(-3.0, 3.0);
        m[static_cast<std::size_t>(i * n + j)] = x;
        m[static_cast<std::size_t>(j * n + i)] = x;
      }
    const SymEigen e = jacobi_eigen(n, m);
    std::vector<double> ql(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        ql[static_cast<std::size_t>(i * n + k)] =
            e.vectors[static_cast<std::size_t>(i * n + k)] * e.values[static_cast<std::size_t>(k)];
    std::vector<double> qt(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        qt[static_cast<std::size_t>(i * n + j)] = e.vectors[static_cast<std::size_t>(j * n + i)];
    const std::vector<double> rec = mat_mul(n, ql, qt);
    double err = 0.0, scale_f = 0.0;
    for (int i = 0; i < n * n; ++i) {
      const double d = rec[static_cast<std::size_t>(i)] - m[static_cast<std::size_t>(i)];
      err += d * d;
      scale_f += m[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i)];
    }
    if (std::sqrt(err) > 1e-9 * std::sqrt(scale_f)) ++bad;
  }

  for (int rep = 0; rep < 1000; ++rep) {
    const double ua = rng.uniform(-2, 2), ub = rng.uniform(-2, 2), uc = rng.uniform(-2, 2);
    const double va = rng.uniform(-2, 2), vb = rng.uniform(-2, 2), vc = rng.uniform(-2, 2);
    const OrderedValue u = OrderedValue::sym(2, {ua, ub, ub, uc});
    const OrderedValue v = OrderedValue::sym(2, {va, vb, vb, vc});
    const std::vector<double>& a = u.data();
    const std::vector<double>& b = v.data();
    const auto [lo, hi] = ts::eig2(b[0] - a[0], b[1] - a[1], b[3] - a[3]);
    (void)hi;
    const bool brute = lo >= -1e-9;
    if (leq(u, v, 1e-9) != brute) ++bad;
  }

  report(8, "eigensolver reconstruction and Loewner order", bad == 0,
         "200 reconstructions n<=8, 1000 closed-form order checks, " + std::to_string(bad) +
             " violations");
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion_integral_axioms();
  criterion_oracle_equivalence();
  criterion_submodular_transfer();
  criterion_modulus_inequality();
  criterion_capacity_algebra();
  criterion_representation_roundtrip();
  criterion_variation_decomposition();
  criterion_eigensolver();
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  std::cout << (g_failures == 0 ? "acceptance: all criteria passed" : "acceptance: FAILURES")
            << " in " << elapsed.count() << " ms" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
