#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "choquet/ground.hpp"
#include "choquet/ordered_value.hpp"

namespace choquet {

enum class Verdict { holds, refuted, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// Labeled inputs and outputs of a refuting instance.  A refuted report always
// carries one, and re-evaluating the witness reproduces the violation.
struct Counterexample {
  std::vector<std::pair<std::string, GroundFunction>> functions;
  std::vector<std::pair<std::string, Mask>> subsets;
  std::vector<std::pair<std::string, OrderedValue>> values;
  std::optional<double> scalar;
  std::string note;
};

struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::inconclusive;
  std::uint64_t cases = 0;
  double tol = 0.0;
  std::optional<Counterexample> counterexample;

  bool holds() const { return verdict == Verdict::holds; }
  bool refuted() const { return verdict == Verdict::refuted; }
};

}  // namespace choquet
