#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "choquet/capacity.hpp"
#include "choquet/errors.hpp"
#include "choquet/ground.hpp"
#include "choquet/operators.hpp"
#include "choquet/ordered_value.hpp"
#include "choquet/report.hpp"

namespace choquet {

// Stable key order for byte-reproducible output.
using Json = nlohmann::ordered_json;

// Value encoding: scalar -> number, vector -> array, sym -> array of rows.
inline Json value_to_json(const OrderedValue& v) {
  switch (v.kind()) {
    case ValueKind::scalar:
      return Json(v.data()[0]);
    case ValueKind::vector:
      return Json(v.data());
    case ValueKind::sym: {
      Json rows = Json::array();
      for (int i = 0; i < v.dim(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < v.dim(); ++j)
          row.push_back(v.data()[static_cast<std::size_t>(i * v.dim() + j)]);
        rows.push_back(std::move(row));
      }
      return rows;
    }
  }
  throw InputError("unknown value kind");
}

inline OrderedValue value_from_json(const Json& j, ValueKind kind, int dim) {
  switch (kind) {
    case ValueKind::scalar:
      if (!j.is_number()) throw InputError("scalar value must be a number");
      return OrderedValue::scalar(j.get<double>());
    case ValueKind::vector: {
      if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw InputError("vector value must be an array of " + std::to_string(dim) + " numbers");
      std::vector<double> entries;
      entries.reserve(j.size());
      for (const Json& x : j) {
        if (!x.is_number()) throw InputError("vector entries must be numbers");
        entries.push_back(x.get<double>());
      }
      return OrderedValue::vector(std::move(entries));
    }
    case ValueKind::sym: {
      if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw InputError("sym value must be an array of " + std::to_string(dim) + " rows");
      std::vector<double> entries;
      entries.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
      for (const Json& row : j) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
          throw InputError("sym rows must be arrays of " + std::to_string(dim) + " numbers");
        for (const Json& x : row) {
          if (!x.is_number()) throw InputError("sym entries must be numbers");
          entries.push_back(x.get<double>());
        }
      }
      return OrderedValue::sym(dim, std::move(entries));
    }
  }
  throw InputError("unknown value kind");
}

// "scalar" | {"vector": n} | {"sym": n}
inline Json kind_to_json(ValueKind kind, int dim) {
  switch (kind) {
    case ValueKind::scalar:
      return Json("scalar");
    case ValueKind::vector:
      return Json{{"vector", dim}};
    case ValueKind::sym:
      return Json{{"sym", dim}};
  }
  throw InputError("unknown value kind");
}

inline std::pair<ValueKind, int> kind_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "scalar") return {ValueKind::scalar, 1};
    throw InputError("unknown value_kind string: " + j.get<std::string>());
  }
  if (j.is_object() && j.size() == 1) {
    if (j.contains("vector") && j["vector"].is_number_integer()) {
      const int dim = j["vector"].get<int>();
      if (dim < 1 || dim > 64) throw InputError("vector dimension must be in [1, 64]");
      return {ValueKind::vector, dim};
    }
    if (j.contains("sym") && j["sym"].is_number_integer()) {
      const int dim = j["sym"].get<int>();
      if (dim < 1 || dim > 16) throw InputError("sym dimension must be in [1, 16]");
      return {ValueKind::sym, dim};
    }
  }
  throw InputError("value_kind must be \"scalar\", {\"vector\": n} or {\"sym\": n}");
}

// Capacity / set-function file:
//   { "ground_size": N, "value_kind": ..., "values": [ {"subset": [...], "value": ...}, ... ] }
// The empty-set entry may be omitted (implied 0); all other 2^N - 1 subsets
// are required.  Subsets are sorted index arrays, never raw masks.
inline Json set_function_to_json(const SetFunction& sf) {
  Json j;
  j["ground_size"] = sf.ground_size();
  j["value_kind"] = kind_to_json(sf.kind(), sf.dim());
  Json values = Json::array();
  for (Mask a = 1; a <= sf.full(); ++a) {
    Json entry;
    entry["subset"] = mask_to_indices(a);
    entry["value"] = value_to_json(sf.at(a));
    values.push_back(std::move(entry));
  }
  j["values"] = std::move(values);
  return j;
}

inline SetFunction set_function_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("capacity file must hold a JSON object");
  if (!j.contains("ground_size") || !j["ground_size"].is_number_integer())
    throw InputError("capacity file needs an integer ground_size");
  const int n = j["ground_size"].get<int>();
  if (n < 1 || n > kMaxGroundScalar) throw InputError("ground_size must be in [1, 20]");
  if (!j.contains("value_kind")) throw InputError("capacity file needs value_kind");
  const auto [kind, dim] = kind_from_json(j["value_kind"]);
  if (!j.contains("values") || !j["values"].is_array())
    throw InputError("capacity file needs a values array");

  const std::size_t count = std::size_t{1} << n;
  std::vector<OrderedValue> table(count, OrderedValue::zero(kind, dim));
  std::vector<bool> seen(count, false);
  for (const Json& entry : j["values"]) {
    if (!entry.is_object() || !entry.contains("subset") || !entry.contains("value"))
      throw InputError("each values entry needs subset and value");
    const Json& sub = entry["subset"];
    if (!sub.is_array()) throw InputError("subset must be an array of point indices");
    std::vector<int> indices;
    for (const Json& x : sub) {
      if (!x.is_number_integer()) throw InputError("subset indices must be integers");
      indices.push_back(x.get<int>());
      if (indices.size() >= 2 && indices[indices.size() - 2] >= indices.back())
        throw InputError("subset indices must be sorted and distinct");
    }
    const Mask mask = mask_from_indices(indices, n);
    if (seen[mask]) throw InputError("duplicate subset entry");
    seen[mask] = true;
    table[mask] = value_from_json(entry["value"], kind, dim);
  }
  for (Mask a = 1; a < count; ++a)
    if (!seen[a]) {
      std::string names;
      for (int i : mask_to_indices(a)) names += (names.empty() ? "" : ",") + std::to_string(i);
      throw InputError("missing subset {" + names + "}");
    }
  return SetFunction(n, std::move(table));
}

// Function file: { "ground_size": N, "values": [f_0, ..., f_{N-1}] }
inline Json function_to_json(const GroundFunction& f) {
  Json j;
  j["ground_size"] = f.size();
  j["values"] = f.values();
  return j;
}

inline GroundFunction function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("ground_size") || !j.contains("values"))
    throw InputError("function file needs ground_size and values");
  if (!j["ground_size"].is_number_integer()) throw InputError("ground_size must be an integer");
  const int n = j["ground_size"].get<int>();
  if (!j["values"].is_array() || static_cast<int>(j["values"].size()) != n)
    throw InputError("function values must be an array of ground_size numbers");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n));
  for (const Json& x : j["values"]) {
    if (!x.is_number()) throw InputError("function values must be numbers");
    v.push_back(x.get<double>());
  }
  return GroundFunction(std::move(v));
}

inline Json counterexample_to_json(const Counterexample& ce) {
  Json inputs;
  for (const auto& [label, f] : ce.functions) inputs[label] = f.values();
  for (const auto& [label, mask] : ce.subsets) inputs[label] = mask_to_indices(mask);
  if (ce.scalar) inputs["scalar"] = *ce.scalar;
  Json outputs;
  for (const auto& [label, v] : ce.values) outputs[label] = value_to_json(v);
  Json j;
  j["inputs"] = std::move(inputs);
  j["outputs"] = std::move(outputs);
  if (!ce.note.empty()) j["note"] = ce.note;
  return j;
}

// { "property": str, "holds": bool|null, "cases": int, "counterexample": ...|null, "tol": real }
inline Json report_to_json(const PropertyReport& rep) {
  Json j;
  j["property"] = rep.property;
  if (rep.verdict == Verdict::inconclusive)
    j["holds"] = nullptr;
  else
    j["holds"] = rep.holds();
  j["cases"] = rep.cases;
  j["counterexample"] = rep.counterexample ? counterexample_to_json(*rep.counterexample) : Json(nullptr);
  j["tol"] = rep.tol;
  return j;
}

namespace detail {

inline std::vector<OrderedValue> value_array_from_params(const Json& params, const char* field) {
  if (!params.contains("value_kind")) throw InputError("operator params need value_kind");
  const auto [kind, dim] = kind_from_json(params["value_kind"]);
  if (!params.contains(field) || !params[field].is_array())
    throw InputError(std::string("operator params need an array field ") + field);
  std::vector<OrderedValue> out;
  for (const Json& x : params[field]) out.push_back(value_from_json(x, kind, dim));
  return out;
}

}  // namespace detail

// Builtin operator dispatch by name and parameter JSON:
//   min / max      {"ground": N}
//   weighted_sum   {"value_kind": ..., "weights": [...]}
//   tphi           {"value_kind": ..., "phi": [...], "u_weights": [...]}
inline OperatorHandle builtin_operator(const std::string& name, const Json& params) {
  if (name == "min" || name == "max") {
    if (!params.contains("ground") || !params["ground"].is_number_integer())
      throw InputError(name + " needs an integer ground size");
    const int n = params["ground"].get<int>();
    return name == "min" ? min_operator(n) : max_operator(n);
  }
  if (name == "weighted_sum")
    return weighted_sum_operator(detail::value_array_from_params(params, "weights"));
  if (name == "tphi") {
    if (!params.contains("phi") || !params["phi"].is_array())
      throw InputError("tphi params need a phi array");
    std::vector<double> phi;
    for (const Json& x : params["phi"]) {
      if (!x.is_number()) throw InputError("phi entries must be numbers");
      phi.push_back(x.get<double>());
    }
    return tphi_operator(std::move(phi), detail::value_array_from_params(params, "u_weights"));
  }
  throw UnknownBuiltin("unknown operator: " + name + " (builtins: min, max, weighted_sum, tphi)");
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace choquet
