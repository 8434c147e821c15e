#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "choquet/capacity.hpp"
#include "choquet/errors.hpp"
#include "choquet/ground.hpp"
#include "choquet/integral.hpp"
#include "choquet/io.hpp"
#include "choquet/operators.hpp"
#include "choquet/ordered_value.hpp"

namespace choquet::cli {

// Exit codes: 0 success / property holds, 1 property refuted or capacity
// invalid (witness printed), 2 usage or input error.

struct Options {
  std::string capacity_path;
  std::string function_path;
  std::string subset;  // comma-separated point indices; empty selects X
  double tol = kDefaultTol;
  long steps = 10000;
  long samples = 1000;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string method = "sorted";
  std::string op_name;
  std::string op_params;  // inline JSON, or @path to a JSON file
  std::string distortion = "square";
  int grid_levels = 4;
  std::string grid_bounds = "-1,1";
  int ground = 0;
  bool trace = false;
};

namespace detail {

inline Mask parse_subset(const std::string& text, int ground_size) {
  if (text.empty()) return full_mask(ground_size);
  std::vector<int> indices;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(token, &used);
      if (used != token.size()) throw InputError("bad subset index: " + token);
      indices.push_back(v);
    } catch (const std::logic_error&) {
      throw InputError("bad subset index: " + token);
    }
  }
  return mask_from_indices(indices, ground_size);
}

inline std::string subset_to_text(Mask a) {
  std::string s = "{";
  bool first = true;
  for (int i : mask_to_indices(a)) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

inline Distortion parse_distortion(const std::string& text) {
  if (text == "square") return Distortion::square();
  if (text == "sqrt") return Distortion::sqrt();
  if (text.rfind("power:", 0) == 0) {
    try {
      return Distortion::power(std::stod(text.substr(6)));
    } catch (const std::logic_error&) {
      throw InputError("bad distortion power: " + text);
    }
  }
  throw InputError("distortion must be square, sqrt or power:P");
}

inline std::pair<double, double> parse_bounds(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError("--grid-bounds needs the form lo,hi");
  try {
    const double lo = std::stod(text.substr(0, comma));
    const double hi = std::stod(text.substr(comma + 1));
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InputError("bad --grid-bounds: " + text);
  }
}

inline Json parse_params(const std::string& text) {
  if (text.empty()) throw InputError("this operator needs --operator-params");
  if (!text.empty() && text[0] == '@') return load_json_file(text.substr(1));
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed --operator-params: ") + e.what());
  }
}

inline Capacity load_capacity(const std::string& path, double tol) {
  if (path.empty()) throw InputError("a --capacity file is required");
  const SetFunction sf = set_function_from_json(load_json_file(path));
  CapacityValidation v = validate_capacity(sf, tol);
  if (!v.ok()) throw InputError("capacity file does not validate (run check-capacity): " + path);
  return *std::move(v.capacity);
}

inline OperatorHandle make_subject(const Options& o, bool validated_capacity) {
  if (o.op_name.empty()) {
    if (o.capacity_path.empty())
      throw InputError("select an operator with --operator or a capacity file with --capacity");
    if (validated_capacity) return cb_operator(load_capacity(o.capacity_path, o.tol));
    return cb_operator(set_function_from_json(load_json_file(o.capacity_path)));
  }
  Json params = o.op_params.empty() ? Json::object() : parse_params(o.op_params);
  if ((o.op_name == "min" || o.op_name == "max") && !params.contains("ground")) {
    if (o.ground < 1) throw InputError("--ground is required for the min/max builtins");
    params["ground"] = o.ground;
  }
  return builtin_operator(o.op_name, params);
}

inline void print_report(const PropertyReport& rep, const Options& o, std::ostream& out) {
  if (o.format == "json") {
    out << report_to_json(rep).dump(2) << "\n";
    return;
  }
  out << "[" << verdict_name(rep.verdict) << "] " << rep.property << ": " << rep.cases
      << " cases, tol " << rep.tol << "\n";
  if (rep.counterexample) {
    const Counterexample& ce = *rep.counterexample;
    if (!ce.note.empty()) out << "  note: " << ce.note << "\n";
    for (const auto& [label, f] : ce.functions) {
      out << "  " << label << " =";
      for (double x : f.values()) out << " " << x;
      out << "\n";
    }
    for (const auto& [label, mask] : ce.subsets) out << "  " << label << " = " << subset_to_text(mask) << "\n";
    if (ce.scalar) out << "  scalar = " << *ce.scalar << "\n";
    for (const auto& [label, v] : ce.values) out << "  " << label << " = " << to_string(v) << "\n";
  }
}

inline int cmd_integrate(const Options& o, std::ostream& out) {
  if (o.function_path.empty()) throw InputError("integrate needs --function");
  if (o.capacity_path.empty()) throw InputError("integrate needs --capacity");
  const SetFunction mu = set_function_from_json(load_json_file(o.capacity_path));
  const GroundFunction f = function_from_json(load_json_file(o.function_path));
  const Mask a = parse_subset(o.subset, mu.ground_size());
  if (o.method != "sorted" && o.method != "quadrature")
    throw InputError("--method must be sorted or quadrature");

  OrderedValue v = OrderedValue::zero(mu.kind(), mu.dim());
  double bound = 0.0;
  if (o.method == "sorted") {
    v = choquet_sorted(f, mu, a);
  } else {
    v = choquet_quadrature(f, mu, a, o.steps);
    bound = quadrature_error_bound(f, mu, a, o.steps);
  }

  if (o.format == "json") {
    Json j;
    j["command"] = "integrate";
    j["method"] = o.method;
    j["subset"] = mask_to_indices(a);
    j["integral"] = value_to_json(v);
    if (o.method == "quadrature") {
      j["steps"] = o.steps;
      j["bound"] = bound;
    }
    out << j.dump(2) << "\n";
  } else {
    out << "integral over " << subset_to_text(a) << " = " << to_string(v) << "\n";
    if (o.method == "quadrature")
      out << "quadrature with " << o.steps << " steps, error bound " << bound << "\n";
  }
  return 0;
}

inline int cmd_check_capacity(const Options& o, std::ostream& out) {
  const SetFunction sf = set_function_from_json(load_json_file(o.capacity_path));
  const CapacityValidation v = validate_capacity(sf, o.tol);
  if (o.format == "json") {
    Json j;
    j["command"] = "check-capacity";
    j["valid"] = v.ok();
    j["empty_set_ok"] = v.empty_set_ok;
    Json violations = Json::array();
    for (const MonotonicityViolation& viol : v.violations) {
      Json entry;
      entry["subset"] = mask_to_indices(viol.subset);
      entry["superset"] = mask_to_indices(viol.superset);
      entry["subset_value"] = value_to_json(viol.subset_value);
      entry["superset_value"] = value_to_json(viol.superset_value);
      violations.push_back(std::move(entry));
    }
    j["violations"] = std::move(violations);
    j["tol"] = o.tol;
    out << j.dump(2) << "\n";
  } else {
    if (v.ok()) {
      out << "valid capacity: N = " << sf.ground_size() << ", kind = " << kind_name(sf.kind())
          << ", " << sf.ground_size() * (1 << (sf.ground_size() - 1)) << " covering pairs checked\n";
    } else {
      if (!v.empty_set_ok)
        out << "C1 violation: mu(empty) = " << to_string(sf.at(0)) << " must be 0\n";
      for (const MonotonicityViolation& viol : v.violations)
        out << "C2 violation: mu(" << subset_to_text(viol.subset) << ") = " << to_string(viol.subset_value)
            << " is not <= mu(" << subset_to_text(viol.superset)
            << ") = " << to_string(viol.superset_value) << "\n";
    }
  }
  return v.ok() ? 0 : 1;
}

inline int cmd_dual(const Options& o, std::ostream& out) {
  const Capacity mu = load_capacity(o.capacity_path, o.tol);
  out << set_function_to_json(dual(mu).set_function()).dump(2) << "\n";
  return 0;
}

inline int cmd_distort(const Options& o, std::ostream& out, std::ostream& err) {
  const Capacity mu = load_capacity(o.capacity_path, o.tol);
  const DistortionResult r = distort(mu, parse_distortion(o.distortion));
  if (r.raw_values) err << "note: raw-value mode (mu(X) has a zero entry, no normalization)\n";
  err << "revalidates as capacity: " << (validate_capacity(r.values, o.tol).ok() ? "yes" : "no")
      << "\n";
  out << set_function_to_json(r.values).dump(2) << "\n";
  return 0;
}

inline int cmd_variation(const Options& o, std::ostream& out) {
  const SetFunction sf = set_function_from_json(load_json_file(o.capacity_path));
  const Mask a = parse_subset(o.subset, sf.ground_size());
  const OrderedValue mod = variation(sf, a);
  const OrderedValue up = inner_upper_variation(sf, a);
  const OrderedValue low = inner_lower_variation(sf, a);
  if (o.format == "json") {
    Json j;
    j["command"] = "variation";
    j["subset"] = mask_to_indices(a);
    j["modulus"] = value_to_json(mod);
    j["upper"] = value_to_json(up);
    j["lower"] = value_to_json(low);
    out << j.dump(2) << "\n";
  } else {
    out << "|mu|" << subset_to_text(a) << " = " << to_string(mod) << "\n";
    out << "mu+" << subset_to_text(a) << "  = " << to_string(up) << "\n";
    out << "mu-" << subset_to_text(a) << "  = " << to_string(low) << "\n";
  }
  return 0;
}

inline int cmd_check_operator(const Options& o, std::ostream& out) {
  const OperatorHandle subject = make_subject(o, true);
  AxiomCheckOptions axopt;
  axopt.samples = o.samples;
  axopt.seed = o.seed;
  axopt.tol = o.tol;
  const std::vector<PropertyReport> reports = check_axioms(subject, axopt);
  bool any_refuted = false;
  if (o.format == "json") {
    Json j = Json::array();
    for (const PropertyReport& rep : reports) j.push_back(report_to_json(rep));
    out << j.dump(2) << "\n";
  }
  for (const PropertyReport& rep : reports) {
    if (o.format != "json") print_report(rep, o, out);
    any_refuted = any_refuted || rep.refuted();
  }
  return any_refuted ? 1 : 0;
}

inline int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  const OperatorHandle subject = make_subject(o, true);
  const Capacity extracted = extract_capacity(subject, o.tol);
  if (o.trace) {
    for (Mask k = 1; k <= full_mask(subject.ground_size); ++k) {
      const UrysohnTrace t = urysohn_extraction_trace(subject, k, 0.25);
      err << "subset " << subset_to_text(k) << ": I(f_n) stabilizes at n = " << t.stabilized_at
          << " (" << t.evaluations.size() << " evaluations)\n";
    }
  }
  out << set_function_to_json(extracted.set_function()).dump(2) << "\n";
  return 0;
}

inline int cmd_verify_representation(const Options& o, std::ostream& out) {
  const Capacity mu = load_capacity(o.capacity_path, o.tol);
  const OperatorHandle subject = o.op_name.empty() ? cb_operator(mu) : make_subject(o, true);
  const PropertyReport rep = verify_representation(subject, mu, o.samples, o.seed, o.tol);
  print_report(rep, o, out);
  return rep.holds() ? 0 : 1;
}

inline int cmd_decompose(const Options& o, std::ostream& out) {
  // The subject may be the integral of a signed set function; no validation.
  const OperatorHandle subject = make_subject(o, false);
  const auto [lo, hi] = parse_bounds(o.grid_bounds);
  const GridLattice grid(subject.ground_size, o.grid_levels, lo, hi);
  const Decomposition d = decompose(subject, grid);
  const PropertyReport rep = check_decomposition(subject, d, grid, o.tol);
  if (o.format != "json")
    out << "unit upper variation V+(0 -> 1) = " << to_string(d.unit_upper_variation) << "\n";
  print_report(rep, o, out);
  return rep.holds() ? 0 : 1;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Choquet integration with vector-valued capacities"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", o.tol, "order tolerance (default 1e-9)");
    cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_subject = [&](CLI::App* cmd) {
    cmd->add_option("--operator", o.op_name, "builtin operator: min, max, weighted_sum, tphi");
    cmd->add_option("--operator-params", o.op_params, "builtin parameters, inline JSON or @file");
    cmd->add_option("--ground", o.ground, "ground size for min/max builtins");
    cmd->add_option("--capacity", o.capacity_path, "capacity file; selects the integral operator");
  };

  CLI::App* integrate = app.add_subcommand("integrate", "integrate a function against a capacity");
  integrate->add_option("--capacity", o.capacity_path)->required();
  integrate->add_option("--function", o.function_path)->required();
  integrate->add_option("--subset", o.subset, "comma-separated point indices (default: X)");
  integrate->add_option("--method", o.method, "sorted (closed form) or quadrature");
  integrate->add_option("--steps", o.steps, "quadrature steps (default 10000)");
  add_common(integrate);

  CLI::App* check_cap = app.add_subcommand("check-capacity", "validate a capacity file");
  check_cap->add_option("--capacity", o.capacity_path)->required();
  add_common(check_cap);

  CLI::App* dual_cmd = app.add_subcommand("dual", "dual capacity mu(X) - mu(X \\ A)");
  dual_cmd->add_option("--capacity", o.capacity_path)->required();
  add_common(dual_cmd);

  CLI::App* distort_cmd = app.add_subcommand("distort", "apply a distortion to a capacity");
  distort_cmd->add_option("--capacity", o.capacity_path)->required();
  distort_cmd->add_option("--distortion", o.distortion, "square, sqrt or power:P");
  add_common(distort_cmd);

  CLI::App* variation_cmd = app.add_subcommand("variation", "|mu|, mu+ and mu- of a set function");
  variation_cmd->add_option("--capacity", o.capacity_path)->required();
  variation_cmd->add_option("--subset", o.subset);
  add_common(variation_cmd);

  CLI::App* check_op = app.add_subcommand("check-operator", "randomized Choquet-axiom checks");
  add_subject(check_op);
  check_op->add_option("--samples", o.samples);
  check_op->add_option("--seed", o.seed);
  add_common(check_op);

  CLI::App* extract_cmd = app.add_subcommand("extract", "extract the capacity of an operator");
  add_subject(extract_cmd);
  extract_cmd->add_flag("--trace", o.trace, "trace the Urysohn stabilization per subset");
  add_common(extract_cmd);

  CLI::App* verify_cmd =
      app.add_subcommand("verify-representation", "compare an operator with an integral");
  add_subject(verify_cmd);
  verify_cmd->add_option("--samples", o.samples);
  verify_cmd->add_option("--seed", o.seed);
  add_common(verify_cmd);

  CLI::App* decompose_cmd =
      app.add_subcommand("decompose", "split an operator into monotone parts on a grid");
  add_subject(decompose_cmd);
  decompose_cmd->add_option("--grid-levels", o.grid_levels, "grid levels m (default 4)");
  decompose_cmd->add_option("--grid-bounds", o.grid_bounds, "lo,hi (default -1,1)");
  add_common(decompose_cmd);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(integrate)) return detail::cmd_integrate(o, out);
    if (app.got_subcommand(check_cap)) return detail::cmd_check_capacity(o, out);
    if (app.got_subcommand(dual_cmd)) return detail::cmd_dual(o, out);
    if (app.got_subcommand(distort_cmd)) return detail::cmd_distort(o, out, err);
    if (app.got_subcommand(variation_cmd)) return detail::cmd_variation(o, out);
    if (app.got_subcommand(check_op)) return detail::cmd_check_operator(o, out);
    if (app.got_subcommand(extract_cmd)) return detail::cmd_extract(o, out, err);
    if (app.got_subcommand(verify_cmd)) return detail::cmd_verify_representation(o, out);
    if (app.got_subcommand(decompose_cmd)) return detail::cmd_decompose(o, out);
  } catch (const NotMonotone& e) {
    err << "refuted: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand selected\n";
  return 2;
}

}  // namespace choquet::cli
