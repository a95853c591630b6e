#include "locc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "locc/error.hpp"

namespace locc::io {

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

double number_from_json(const json& j, const std::string& field) {
  if (!j.is_number()) throw InputError(field, "expected a number");
  return j.get<double>();
}

int int_from_json(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError(field, "expected an integer");
  return j.get<int>();
}

const json& require(const json& j, const std::string& key, const std::string& base) {
  if (!j.is_object()) throw InputError(base, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(join(base, key), "missing required field");
  return *it;
}

Complex complex_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw InputError(field, "expected a [re, im] pair");
  return {number_from_json(j[0], index(field, 0)), number_from_json(j[1], index(field, 1))};
}

std::vector<double> doubles_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw InputError(field, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from_json(j[i], index(field, i)));
  return out;
}

}  // namespace

CMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InputError(field, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw InputError(index(field, 0), "expected a row array");
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row_field = index(field, r);
    if (!j[r].is_array() || j[r].size() != cols) {
      throw InputError(row_field, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c], index(row_field, c));
  }
  return m;
}

CVector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InputError(field, "expected a nonempty array of [re, im] pairs");
  CVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j[i], index(field, i));
  return v;
}

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

Ensemble ensemble_from_json(const json& j, const std::string& field) {
  const json& dims_j = require(j, "dims", field);
  if (!dims_j.is_array() || dims_j.empty()) throw InputError(join(field, "dims"), "expected an array of dimensions");
  Dims dims;
  for (std::size_t i = 0; i < dims_j.size(); ++i) {
    const int d = int_from_json(dims_j[i], index(join(field, "dims"), i));
    if (d < 1) throw InputError(index(join(field, "dims"), i), "dimension must be positive");
    dims.push_back(d);
  }
  const json& states = require(j, "states", field);
  const std::string states_field = join(field, "states");
  if (!states.is_array() || states.empty()) throw InputError(states_field, "expected a nonempty array");
  std::vector<EnsembleItem> items;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto f = index(states_field, i);
    const json& s = states[i];
    const double prob = number_from_json(require(s, "prob", f), join(f, "prob"));
    std::string label;
    if (auto it = s.find("label"); it != s.end()) {
      if (!it->is_string()) throw InputError(join(f, "label"), "expected a string");
      label = it->get<std::string>();
    }
    const bool has_vector = s.contains("vector"), has_matrix = s.contains("matrix");
    if (has_vector == has_matrix) throw InputError(f, "give exactly one of \"vector\" or \"matrix\"");
    try {
      if (has_vector) {
        CVector psi = vector_from_json(s["vector"], join(f, "vector"));
        items.push_back({prob, DensityMatrix::from_vector(psi, dims), label, true});
      } else {
        CMatrix m = matrix_from_json(s["matrix"], join(f, "matrix"));
        items.push_back({prob, DensityMatrix(std::move(m), dims), label, false});
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(f, e.what());
    }
  }
  try {
    return Ensemble(std::move(items), std::move(dims));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(states_field, e.what());
  }
}

json ensemble_to_json(const Ensemble& e) {
  json states = json::array();
  for (const auto& it : e.items()) {
    states.push_back({{"prob", it.prob}, {"label", it.label}, {"matrix", to_json(it.state.mat())}});
  }
  return {{"dims", e.dims()}, {"states", std::move(states)}};
}

ProtocolTree protocol_from_json(const json& j, const std::string& field) {
  const json& party_j = require(j, "party", field);
  if (!party_j.is_string()) throw InputError(join(field, "party"), "expected a string");
  Party party;
  try {
    party = party_from_string(party_j.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(join(field, "party"), e.what());
  }
  const json& kraus_j = require(j, "kraus", field);
  const std::string kraus_field = join(field, "kraus");
  if (!kraus_j.is_array() || kraus_j.empty()) throw InputError(kraus_field, "expected a nonempty array of matrices");
  std::vector<CMatrix> kraus;
  for (std::size_t i = 0; i < kraus_j.size(); ++i) kraus.push_back(matrix_from_json(kraus_j[i], index(kraus_field, i)));
  ProtocolTree tree = [&] {
    try {
      return ProtocolTree(Instrument(std::move(kraus), party));
    } catch (const Error& e) {
      throw InputError(kraus_field, e.what());
    }
  }();
  if (auto it = j.find("children"); it != j.end()) {
    const std::string children_field = join(field, "children");
    if (!it->is_object()) throw InputError(children_field, "expected an object keyed by outcome index");
    for (const auto& [key, sub] : it->items()) {
      const std::string child_field = join(children_field, key);
      std::size_t pos = 0;
      unsigned long outcome = 0;
      try {
        outcome = std::stoul(key, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != key.size() || key.empty()) throw InputError(child_field, "outcome keys must be decimal integers");
      try {
        tree.add_child(outcome, protocol_from_json(sub, child_field));
      } catch (const InputError& e) {
        if (e.field() == "children") throw InputError(child_field, e.what());
        throw;
      }
    }
  }
  return tree;
}

json protocol_to_json(const ProtocolTree& t) {
  json kraus = json::array();
  for (const auto& k : t.instrument().kraus()) kraus.push_back(to_json(k));
  json out = {{"party", to_string(t.instrument().party())}, {"kraus", std::move(kraus)}};
  if (!t.is_leaf()) {
    json children = json::object();
    for (const auto& [outcome, sub] : t.children()) children[std::to_string(outcome)] = protocol_to_json(*sub);
    out["children"] = std::move(children);
  }
  return out;
}

EnsembleSpec spec_from_json(const json& j) {
  const json& fam = require(j, "family", "");
  if (!fam.is_string()) throw InputError("family", "expected a string");
  EnsembleSpec spec;
  spec.family = family_from_string(fam.get<std::string>());
  if (auto it = j.find("params"); it != j.end()) {
    const json& p = *it;
    if (!p.is_object()) throw InputError("params", "expected an object");
    if (auto d = p.find("d"); d != p.end()) spec.d = int_from_json(*d, "params.d");
    if (auto a = p.find("a1"); a != p.end()) spec.a1 = doubles_from_json(*a, "params.a1");
    if (auto pr = p.find("priors"); pr != p.end()) spec.priors = doubles_from_json(*pr, "params.priors");
    if (auto e = p.find("ensemble"); e != p.end()) spec.custom = ensemble_from_json(*e, "params.ensemble");
  }
  return spec;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col), "JSON syntax error");
  }
}

// Reports

std::string format_double(double x) {
  if (std::isnan(x)) return "\"NaN\"";
  if (std::isinf(x)) return x > 0 ? "\"Infinity\"" : "\"-Infinity\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

FlatReport& FlatReport::add(const std::string& key, double v) {
  entries_.emplace_back(key, v);
  return *this;
}
FlatReport& FlatReport::add(const std::string& key, int v) { return add(key, static_cast<long long>(v)); }
FlatReport& FlatReport::add(const std::string& key, long long v) {
  entries_.emplace_back(key, v);
  return *this;
}
FlatReport& FlatReport::add(const std::string& key, std::size_t v) { return add(key, static_cast<long long>(v)); }
FlatReport& FlatReport::add(const std::string& key, bool v) {
  entries_.emplace_back(key, v);
  return *this;
}
FlatReport& FlatReport::add(const std::string& key, const std::string& v) {
  entries_.emplace_back(key, v);
  return *this;
}
FlatReport& FlatReport::add(const std::string& key, const char* v) { return add(key, std::string(v)); }

FlatReport& FlatReport::merge(const std::string& prefix, const FlatReport& other) {
  for (const auto& [k, v] : other.entries_) entries_.emplace_back(prefix + k, v);
  return *this;
}

const FlatReport::Value* FlatReport::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string FlatReport::to_json() const {
  std::string out = "{\n";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& [k, v] = entries_[i];
    out += "  " + json(k).dump() + ": ";
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) {
            out += format_double(x);
          } else if constexpr (std::is_same_v<T, long long>) {
            out += std::to_string(x);
          } else if constexpr (std::is_same_v<T, bool>) {
            out += x ? "true" : "false";
          } else {
            out += json(x).dump();
          }
        },
        v);
    out += i + 1 < entries_.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

namespace {

void add_checks(FlatReport& f, const std::vector<InequalityCheck>& checks) {
  for (const auto& c : checks) {
    const std::string p = "check." + c.name + ".";
    f.add(p + "lhs", c.lhs).add(p + "rhs", c.rhs).add(p + "tolerance", c.tolerance);
    f.add(p + "asserted", c.asserted).add(p + "pass", c.pass());
  }
}

}  // namespace

FlatReport flatten(const BoundReport& r) {
  FlatReport f;
  f.add("chi", r.chi).add("s_a", r.s_a).add("s_b", r.s_b).add("sbar_a", r.sbar_a).add("sbar_b", r.sbar_b);
  f.add("theorem_bound", r.theorem_bound).add("n", r.n).add("e_bar", r.e_bar);
  f.add("e_bar_measure", to_string(r.e_bar_measure)).add("n_minus_e", r.n_minus_e);
  f.add("operative_ceiling", r.operative_ceiling);
  if (r.achieved_info) f.add("achieved_info", *r.achieved_info);
  if (r.g_a) f.add("g_a", *r.g_a);
  if (r.g_b) f.add("g_b", *r.g_b);
  if (r.holevo_gain_a) f.add("holevo_gain_a", *r.holevo_gain_a);
  if (r.holevo_gain_b) f.add("holevo_gain_b", *r.holevo_gain_b);
  if (r.multi_step_bound) f.add("multi_step_bound", *r.multi_step_bound);
  if (r.strictly_alternating) f.add("strictly_alternating", *r.strictly_alternating);
  if (r.achieved_info) {
    f.add("saturated_theorem", r.saturated_theorem).add("saturated_n_minus_e", r.saturated_n_minus_e);
    f.add("saturated_chi", r.saturated_chi);
  }
  f.add("saturation_tol", r.saturation_tol);
  add_checks(f, r.checks);
  f.add("all_pass", r.all_pass());
  return f;
}

FlatReport flatten(const ProtocolResult& r) {
  FlatReport f;
  f.add("total_info", r.total_info).add("direct_info", r.direct_info);
  f.add("chain_rule_residual", std::abs(r.total_info - r.direct_info));
  f.add("g_a", r.g_a).add("g_b", r.g_b).add("holevo_gain_a", r.holevo_gain_a).add("holevo_gain_b", r.holevo_gain_b);
  f.add("strictly_alternating", r.strictly_alternating).add("local_only", r.local_only);
  f.add("num_steps", r.steps.size()).add("num_leaves", r.leaf_paths.size());
  for (const auto& s : r.steps) {
    const std::string p = "step." + std::to_string(s.level) + ".";
    f.add(p + "party", s.mixed_party ? std::string("mixed") : std::string(to_string(s.party)));
    f.add(p + "info_gain", s.info_gain).add(p + "lemma_rhs", s.lemma_rhs);
    f.add(p + "sbar_a_before", s.sbar_a_before).add(p + "sbar_a_after", s.sbar_a_after);
    f.add(p + "sbar_b_before", s.sbar_b_before).add(p + "sbar_b_after", s.sbar_b_after);
  }
  for (Eigen::Index x = 0; x < r.joint_dist.rows(); ++x) {
    for (Eigen::Index y = 0; y < r.joint_dist.cols(); ++y) {
      f.add("joint." + r.labels[x] + "|" + r.leaf_paths[y], r.joint_dist(x, y));
    }
  }
  return f;
}

FlatReport flatten(const EntanglementReport& r) {
  FlatReport f;
  f.add("measure", to_string(r.measure)).add("value", r.value).add("method", r.method);
  std::string cut;
  for (std::size_t i = 0; i < r.cut.left.size(); ++i) cut += (i ? "," : "") + std::to_string(r.cut.left[i]);
  f.add("cut_left", cut);
  if (r.convergence) {
    f.add("iterations", r.convergence->iterations).add("gap_bound", r.convergence->gap_bound);
    f.add("converged", r.convergence->converged);
  }
  return f;
}

FlatReport flatten(const DeltaEReport& r) {
  FlatReport f;
  f.add("h_s", r.h_s).add("e_bar_det", r.e_bar_det).add("detector_measure", to_string(r.detector_measure));
  f.add("e_joint", r.e_joint).add("e_joint_method", r.e_joint_method);
  if (r.e_joint_ppt) f.add("e_joint_ppt", *r.e_joint_ppt);
  if (r.reference_negativity) f.add("reference_negativity", *r.reference_negativity);
  f.add("delta_e", r.delta_e).add("i_locc", r.i_locc).add("inequality_slack", r.inequality_slack);
  f.add("asserted", r.asserted).add("tolerance", r.tol).add("pass", r.pass());
  return f;
}

FlatReport flatten(const DetectorInfoReport& r) {
  FlatReport f;
  f.add("info", r.info).add("comparison", r.comparison).add("orthogonal_detectors", r.orthogonal_detectors);
  f.add("holds", r.holds).add("equality", r.equality);
  return f;
}

}  // namespace locc::io
