#pragma once

// JSON input formats and flat report output.
//
// Complex numbers are always [re, im] pairs.
//   Ensemble:  {"dims": [dA, dB], "states": [{"prob": p, "label": "x",
//               "vector": [[re,im], ...]} | {..., "matrix": [[[re,im], ...], ...]}]}
//   Protocol:  {"party": "A"|"B"|"global", "kraus": [matrix, ...],
//               "children": {"<outcome>": <protocol>, ...}}
//   Family:    {"family": "partial4", "params": {"a1": 0.9, "d": 2, "priors": [...]}}

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "locc/bounds.hpp"
#include "locc/states.hpp"

namespace locc::io {

using nlohmann::json;

CMatrix matrix_from_json(const json& j, const std::string& field);
CVector vector_from_json(const json& j, const std::string& field);
json to_json(const CMatrix& m);
json to_json(const CVector& v);

Ensemble ensemble_from_json(const json& j, const std::string& field = "");
json ensemble_to_json(const Ensemble& e);

ProtocolTree protocol_from_json(const json& j, const std::string& field = "");
json protocol_to_json(const ProtocolTree& t);

EnsembleSpec spec_from_json(const json& j);

/// Parses a file, reporting syntax errors with line and column.
json load_json_file(const std::string& path);

/// %.17g, with "Infinity", "-Infinity" and "NaN" as JSON strings.
std::string format_double(double x);

/// Ordered key/value report serialised as a flat JSON object. Identical inputs
/// give byte-identical output.
class FlatReport {
 public:
  using Value = std::variant<double, long long, bool, std::string>;

  FlatReport& add(const std::string& key, double v);
  FlatReport& add(const std::string& key, int v);
  FlatReport& add(const std::string& key, long long v);
  FlatReport& add(const std::string& key, std::size_t v);
  FlatReport& add(const std::string& key, bool v);
  FlatReport& add(const std::string& key, const std::string& v);
  FlatReport& add(const std::string& key, const char* v);
  FlatReport& merge(const std::string& prefix, const FlatReport& other);

  const std::vector<std::pair<std::string, Value>>& entries() const noexcept { return entries_; }
  const Value* find(const std::string& key) const;
  std::string to_json() const;

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

FlatReport flatten(const BoundReport& r);
FlatReport flatten(const ProtocolResult& r);
FlatReport flatten(const EntanglementReport& r);
FlatReport flatten(const DeltaEReport& r);
FlatReport flatten(const DetectorInfoReport& r);

}  // namespace locc::io
