#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "locc/bounds.hpp"
#include "locc/error.hpp"
#include "locc/io.hpp"
#include "locc/parallel.hpp"
#include "locc/states.hpp"
#include "locc/verify.hpp"

namespace locc::cli {

namespace {

using io::FlatReport;
using io::json;

struct Config {
  std::string family;
  std::string input;
  std::string protocol;
  std::string out;
  std::string format;
  std::string grid = "24x48";
  std::string measure;
  std::string detectors = "conjugate";
  std::string reference = "auto";
  std::optional<int> d;
  std::vector<double> a1;
  std::vector<double> priors;
  std::vector<int> cut;
  std::optional<double> tol;
  std::uint64_t seed = 20030415;
  std::size_t trials = 0;
  std::vector<std::string> suites;
  int points = 21;
  int pairs = 1;
  bool no_optimizer = false;
};

struct Source {
  Ensemble ensemble;
  std::optional<Family> family;
};

Source load_ensemble(const Config& c) {
  if (!c.family.empty() && !c.input.empty()) throw InputError("--input", "give either --family or --input, not both");
  if (!c.family.empty()) {
    EnsembleSpec spec;
    try {
      spec.family = family_from_string(c.family);
    } catch (const InputError& e) {
      throw InputError("--family", e.message());
    }
    if (spec.family == Family::Custom) throw InputError("--family", "custom ensembles are read with --input");
    spec.d = c.d;
    spec.a1 = c.a1;
    spec.priors = c.priors;
    try {
      return {build_ensemble(spec), spec.family};
    } catch (const InputError& e) {
      throw InputError("--" + e.field(), e.message());
    } catch (const Error& e) {
      throw InputError("--family", e.what());
    }
  }
  if (!c.input.empty()) {
    const json j = io::load_json_file(c.input);
    try {
      if (j.is_object() && j.contains("family")) {
        const EnsembleSpec spec = io::spec_from_json(j);
        return {build_ensemble(spec), spec.family};
      }
      return {io::ensemble_from_json(j), std::nullopt};
    } catch (const InputError& e) {
      throw InputError(c.input + ": " + e.field(), e.message());
    } catch (const Error& e) {
      throw InputError(c.input, e.what());
    }
  }
  throw InputError("--family", "an ensemble is required (--family or --input)");
}

GridSpec parse_grid(const std::string& s) {
  const auto x = s.find('x');
  GridSpec g;
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t p1 = 0, p2 = 0;
    g.polar = std::stoi(s.substr(0, x), &p1);
    g.azimuthal = std::stoi(s.substr(x + 1), &p2);
    if (p1 != x || p2 != s.size() - x - 1) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw InputError("--grid", "expected POLARxAZIMUTHAL, e.g. 24x48");
  }
  if (g.polar < 2 || g.azimuthal < 1) throw InputError("--grid", "need at least 2 polar and 1 azimuthal points");
  return g;
}

ProtocolTree load_protocol(const Config& c, const Ensemble& e) {
  const std::string& p = c.protocol;
  if (p.empty()) throw InputError("--protocol", "a protocol is required");
  const bool builtin = p.rfind("computational", 0) == 0 || p.rfind("search", 0) == 0 || p == "alice-only" ||
                       p == "bob-only";
  if (builtin && !e.is_bipartite()) throw InputError("--protocol", "built-in protocols need a bipartite ensemble");
  if (p == "computational" || p == "computational-ab") return computational_two_round(e.dims(), Party::A);
  if (p == "computational-ba") return computational_two_round(e.dims(), Party::B);
  if (p == "alice-only") return ProtocolTree(computational_basis(e.dims()[0], Party::A));
  if (p == "bob-only") return ProtocolTree(computational_basis(e.dims()[1], Party::B));
  if (p == "search" || p == "search-ab") return optimize_two_round_local(e, Party::A, parse_grid(c.grid)).protocol;
  if (p == "search-ba") return optimize_two_round_local(e, Party::B, parse_grid(c.grid)).protocol;
  if (builtin) throw InputError("--protocol", "unknown built-in protocol \"" + p + "\"");
  const json j = io::load_json_file(p);
  try {
    ProtocolTree t = io::protocol_from_json(j);
    return t;
  } catch (const InputError& err) {
    throw InputError(p + ": " + err.field(), err.message());
  }
}

std::optional<EntanglementMeasure> parse_measure(const Config& c) {
  if (c.measure.empty()) return std::nullopt;
  try {
    return measure_from_string(c.measure);
  } catch (const InputError& e) {
    throw InputError("--measure", e.message());
  }
}

double positive_tol(const Config& c, double fallback) {
  if (!c.tol) return fallback;
  if (!(*c.tol > 0.0) || !std::isfinite(*c.tol)) throw InputError("--tol", "must be a positive number");
  return *c.tol;
}

std::string report_csv(const FlatReport& f) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : f.entries()) {
    out += k + ",";
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) {
            const std::string s = io::format_double(x);
            out += s.front() == '"' ? s.substr(1, s.size() - 2) : s;
          } else if constexpr (std::is_same_v<T, long long>) {
            out += std::to_string(x);
          } else if constexpr (std::is_same_v<T, bool>) {
            out += x ? "true" : "false";
          } else {
            out += x;
          }
        },
        v);
    out += "\n";
  }
  return out;
}

std::string render(const Config& c, const FlatReport& f) {
  if (c.format.empty() || c.format == "json") return f.to_json();
  if (c.format == "csv") return report_csv(f);
  throw InputError("--format", "expected json or csv");
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw InputError("--out", "cannot write " + c.out);
  file << text;
}

BoundOptions bound_options(const Config& c) {
  BoundOptions o;
  o.measure = parse_measure(c);
  o.saturation_tol = positive_tol(c, o.saturation_tol);
  return o;
}

int cmd_bounds(const Config& c, std::ostream& out) {
  const auto src = load_ensemble(c);
  if (!src.ensemble.is_bipartite()) throw InputError("dims", "bounds need a bipartite ensemble");
  const auto opts = bound_options(c);
  const BoundReport r = c.protocol.empty()
                            ? theorem_bound(src.ensemble, opts)
                            : verify_protocol_against_bounds(src.ensemble, load_protocol(c, src.ensemble), opts);
  FlatReport f;
  f.add("command", "bounds").add("num_states", src.ensemble.size());
  f.merge("", io::flatten(r));
  emit(c, render(c, f), out);
  return r.all_pass() ? kOk : kInvariantViolation;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const auto src = load_ensemble(c);
  if (!src.ensemble.is_bipartite()) throw InputError("dims", "simulate needs a bipartite ensemble");
  const ProtocolTree t = load_protocol(c, src.ensemble);
  ProtocolResult p = [&] {
    try {
      return run_protocol(src.ensemble, t);
    } catch (const DimensionError& e) {
      throw InputError("--protocol", e.what());
    }
  }();
  const BoundReport r = verify_protocol_against_bounds(src.ensemble, t, bound_options(c));
  FlatReport f;
  f.add("command", "simulate").add("num_states", src.ensemble.size());
  f.merge("", io::flatten(p));
  f.merge("bounds.", io::flatten(r));
  emit(c, render(c, f), out);
  return r.all_pass() ? kOk : kInvariantViolation;
}

int cmd_sweep(const Config& c, std::ostream& out) {
  Family family;
  try {
    family = family_from_string(c.family);
  } catch (const InputError& e) {
    throw InputError("--family", e.message());
  }
  if (family != Family::Partial4 && family != Family::TensorPower) {
    throw InputError("--family", "sweep supports partial4 and tensor_power");
  }
  if (c.points < 2) throw InputError("--points", "need at least 2 points");
  if (c.pairs < 1 || c.pairs > 3) throw InputError("--pairs", "must be 1, 2 or 3");
  if (family == Family::Partial4 && c.pairs != 1) throw InputError("--pairs", "partial4 has a single pair");
  if (!c.a1.empty()) throw InputError("--a1", "sweep generates its own a1 grid; use --points");
  const double tol = positive_tol(c, 1e-9);

  struct Row {
    double a1, e_bar, n_minus_e, achieved, gap;
  };
  const auto rows = parallel_map(static_cast<std::size_t>(c.points), [&](std::size_t i) {
    const double a1 = static_cast<double>(i) / (c.points - 1);
    const Ensemble e = family == Family::Partial4 ? partial4_ensemble(a1)
                                                  : tensor_power_ensemble(std::vector<double>(c.pairs, a1));
    const auto b = theorem_bound(e);
    const double achieved = run_protocol(e, computational_two_round(e.dims())).total_info;
    return Row{a1, b.e_bar, b.n_minus_e, achieved, achieved - b.n_minus_e};
  });
  bool ok = true;
  for (const auto& r : rows) ok = ok && std::abs(r.gap) <= tol;

  std::string text;
  if (c.format.empty() || c.format == "csv") {
    text = "a1,e_bar,n_minus_e,achieved,gap\n";
    for (const auto& r : rows) {
      text += io::format_double(r.a1) + "," + io::format_double(r.e_bar) + "," + io::format_double(r.n_minus_e) +
              "," + io::format_double(r.achieved) + "," + io::format_double(r.gap) + "\n";
    }
  } else if (c.format == "json") {
    FlatReport f;
    f.add("command", "sweep").add("family", to_string(family)).add("pairs", c.pairs).add("tolerance", tol);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string p = "row." + std::to_string(i) + ".";
      f.add(p + "a1", rows[i].a1).add(p + "e_bar", rows[i].e_bar).add(p + "n_minus_e", rows[i].n_minus_e);
      f.add(p + "achieved", rows[i].achieved).add(p + "gap", rows[i].gap);
    }
    f.add("all_pass", ok);
    text = f.to_json();
  } else {
    throw InputError("--format", "expected json or csv");
  }
  emit(c, text, out);
  return ok ? kOk : kInvariantViolation;
}

Bipartition parse_cut(const Config& c) {
  Bipartition cut;
  if (!c.cut.empty()) cut.left = c.cut;
  return cut;
}

int cmd_ree(const Config& c, std::ostream& out) {
  ReeOptions opts;
  opts.rel_tol = positive_tol(c, opts.rel_tol);
  const auto measure = parse_measure(c).value_or(EntanglementMeasure::Ree);
  const Bipartition cut = parse_cut(c);

  std::vector<DensityMatrix> states;
  std::vector<double> probs;
  std::vector<std::string> labels;
  json single;
  if (!c.input.empty()) single = io::load_json_file(c.input);
  if (single.is_object() && !single.contains("states") && !single.contains("family")) {
    // A single state: {"dims": [...], "vector" | "matrix": ...}
    json wrapped = {{"dims", single.value("dims", json())}, {"states", json::array()}};
    json item = single;
    item.erase("dims");
    item["prob"] = 1.0;
    wrapped["states"].push_back(item);
    Ensemble e = [&] {
      try {
        return io::ensemble_from_json(wrapped);
      } catch (const InputError& err) {
        std::string field = err.field();
        if (field.rfind("states[0].", 0) == 0) field = field.substr(10);
        throw InputError(c.input + ": " + field, err.message());
      }
    }();
    states.push_back(e.items()[0].state);
    probs.push_back(1.0);
    labels.push_back("state");
  } else {
    const auto src = load_ensemble(c);
    for (const auto& it : src.ensemble.items()) {
      states.push_back(it.state);
      probs.push_back(it.prob);
      labels.push_back(it.label);
    }
  }

  const auto evals = parallel_map(states.size(), [&](std::size_t i) -> EntanglementReport {
    try {
      if (measure == EntanglementMeasure::Ree) return ree(states[i], cut, opts);
      return EntanglementReport{measure, entanglement(states[i], measure, cut, opts), cut, to_string(measure),
                                std::nullopt, std::nullopt};
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError("--cut", e.what());
    }
  });
  FlatReport f;
  f.add("command", "ree");
  double average = 0.0;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    average += probs[i] * evals[i].value;
    if (states.size() == 1) {
      f.merge("", io::flatten(evals[i]));
    } else {
      f.merge("state." + labels[i] + ".", io::flatten(evals[i]));
    }
  }
  if (states.size() > 1) f.add("average", average);
  emit(c, render(c, f), out);
  return kOk;
}

std::vector<DensityMatrix> load_detectors(const Config& c, const Ensemble& signal) {
  if (c.detectors == "conjugate") {
    try {
      return conjugate_detectors(signal);
    } catch (const Error& e) {
      throw InputError("--detectors", e.what());
    }
  }
  const json j = io::load_json_file(c.detectors);
  const std::string base = c.detectors + ": ";
  if (!j.is_object() || !j.contains("dims") || !j.contains("detectors")) {
    throw InputError(base + "detectors", "expected {\"dims\": [dC, dD], \"detectors\": [...]}");
  }
  json as_ensemble = {{"dims", j["dims"]}, {"states", json::array()}};
  const json& list = j["detectors"];
  if (!list.is_array() || list.size() != signal.size()) {
    throw InputError(base + "detectors", "need one detector state per signal state (" +
                                             std::to_string(signal.size()) + ")");
  }
  for (const auto& d : list) {
    json item = d;
    item["prob"] = 1.0 / static_cast<double>(list.size());
    as_ensemble["states"].push_back(item);
  }
  try {
    const Ensemble e = io::ensemble_from_json(as_ensemble);
    std::vector<DensityMatrix> out;
    for (const auto& it : e.items()) out.push_back(it.state);
    return out;
  } catch (const InputError& err) {
    std::string field = err.field();
    if (field.rfind("states", 0) == 0) field = "detectors" + field.substr(6);
    throw InputError(base + field, err.message());
  }
}

int cmd_delta_e(const Config& c, std::ostream& out) {
  const auto src = load_ensemble(c);
  if (!src.ensemble.is_bipartite()) throw InputError("dims", "delta-e needs a bipartite signal ensemble");
  const auto detectors = load_detectors(c, src.ensemble);
  const DetectorSetup setup = [&] {
    try {
      return build_detector_setup(src.ensemble, detectors);
    } catch (const Error& e) {
      throw InputError("--detectors", e.what());
    }
  }();
  DeltaEOptions opts;
  opts.detector_measure = parse_measure(c);
  opts.tol = positive_tol(c, opts.tol);
  opts.run_optimizer = !c.no_optimizer;
  const bool canonical = src.family && (*src.family == Family::Bell4 || *src.family == Family::CanonicalDxD);
  if (c.reference == "uniform" || (c.reference == "auto" && canonical && c.detectors == "conjugate")) {
    opts.separable_reference = uniform_prior_joint(setup);
  } else if (c.reference != "none" && c.reference != "auto") {
    throw InputError("--reference", "expected auto, uniform or none");
  }
  const DeltaEReport r = [&] {
    try {
      return delta_e(setup, load_protocol(c, src.ensemble), opts);
    } catch (const InputError& e) {
      if (e.field() == "separable_reference") throw InputError("--reference", e.message());
      throw;
    } catch (const DimensionError& e) {
      throw InputError("--reference", e.what());
    }
  }();
  FlatReport f;
  f.add("command", "delta-e");
  f.merge("", io::flatten(r));
  emit(c, render(c, f), out);
  return r.pass() ? kOk : kInvariantViolation;
}

int cmd_verify(const Config& c, std::ostream& out) {
  const auto known = suite_names();
  for (const auto& s : c.suites) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw InputError("--suite", "unknown suite \"" + s + "\"");
    }
  }
  VerifyConfig vc;
  vc.seed = c.seed;
  vc.trials = c.trials;
  vc.suites = c.suites;
  const auto results = run_verification(vc);
  FlatReport f;
  f.add("command", "verify").add("seed", static_cast<long long>(c.seed));
  bool ok = true;
  for (const auto& r : results) {
    const std::string p = "suite." + r.name + ".";
    std::string failing;
    for (std::size_t i = 0; i < r.failing_trials.size(); ++i) {
      failing += (i ? "," : "") + std::to_string(r.failing_trials[i]);
    }
    f.add(p + "trials", r.trials).add(p + "failures", r.failures).add(p + "max_excess", r.max_excess);
    f.add(p + "failing_trials", failing).add(p + "pass", r.pass());
    ok = ok && r.pass();
  }
  f.add("all_pass", ok);
  emit(c, render(c, f), out);
  return ok ? kOk : kInvariantViolation;
}

void add_ensemble_flags(CLI::App* sub, Config& c) {
  sub->add_option("--family", c.family, "Ensemble family: bell4, canonical_dxd, partial4, tensor_power, "
                                        "copy_classical, product_basis");
  sub->add_option("--input", c.input, "Ensemble JSON or family spec JSON");
  sub->add_option("--d", c.d, "Local dimension for canonical_dxd, copy_classical, product_basis");
  sub->add_option("--a1", c.a1, "a1 value(s); tensor_power takes one per pair")->delimiter(',');
  sub->add_option("--priors", c.priors, "Comma-separated priors (default uniform)")->delimiter(',');
}

void add_output_flags(CLI::App* sub, Config& c) {
  sub->add_option("--out", c.out, "Write the report here instead of stdout");
  sub->add_option("--format", c.format, "json or csv");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Locally accessible information bounds for bipartite ensembles", "locc-info"};
  app.require_subcommand(1);

  auto* bounds = app.add_subcommand("bounds", "Holevo, entropy and n - E bounds, optionally against a protocol");
  add_ensemble_flags(bounds, c);
  bounds->add_option("--protocol", c.protocol, "Protocol JSON or built-in name");
  bounds->add_option("--measure", c.measure, "Entanglement measure for E-bar");
  bounds->add_option("--tol", c.tol, "Saturation tolerance in bits (default 1e-6)");
  bounds->add_option("--grid", c.grid, "Grid for search protocols, POLARxAZIMUTHAL");
  add_output_flags(bounds, c);

  auto* simulate = app.add_subcommand("simulate", "Run an LOCC protocol tree and account for every step");
  add_ensemble_flags(simulate, c);
  simulate->add_option("--protocol", c.protocol,
                       "Protocol JSON, or computational[-ab|-ba], alice-only, bob-only, search[-ab|-ba]")
      ->required();
  simulate->add_option("--grid", c.grid, "Grid for search protocols, POLARxAZIMUTHAL");
  simulate->add_option("--measure", c.measure, "Entanglement measure for E-bar");
  simulate->add_option("--tol", c.tol, "Saturation tolerance in bits (default 1e-6)");
  add_output_flags(simulate, c);

  auto* sweep = app.add_subcommand("sweep", "Sweep a1 over [0, 1] for a saturating family");
  sweep->add_option("--family", c.family, "partial4 or tensor_power")->required();
  sweep->add_option("--points", c.points, "Number of a1 values (default 21)");
  sweep->add_option("--pairs", c.pairs, "tensor_power pairs, all sharing a1 (default 1)");
  sweep->add_option("--a1", c.a1, "Not accepted; the grid comes from --points")->delimiter(',');
  sweep->add_option("--tol", c.tol, "Allowed |achieved - (n - E)| (default 1e-9)");
  add_output_flags(sweep, c);

  auto* ree_cmd = app.add_subcommand("ree", "Relative entropy of entanglement of a state or ensemble");
  add_ensemble_flags(ree_cmd, c);
  ree_cmd->add_option("--cut", c.cut, "Subsystems on the left of the cut (default 0)")->delimiter(',');
  ree_cmd->add_option("--measure", c.measure, "ree (default), negativity, eof_2q, pure_entropy");
  ree_cmd->add_option("--tol", c.tol, "Relative optimality tolerance (default 1e-8)");
  add_output_flags(ree_cmd, c);

  auto* de = app.add_subcommand("delta-e", "Entanglement-production experiment with detector states");
  add_ensemble_flags(de, c);
  de->add_option("--protocol", c.protocol, "LOCC protocol on the signal (JSON or built-in name)")->required();
  de->add_option("--detectors", c.detectors, "conjugate (default) or a detector JSON file");
  de->add_option("--reference", c.reference, "Separable reference for the joint state: auto, uniform, none");
  de->add_option("--measure", c.measure, "Detector entanglement measure");
  de->add_option("--grid", c.grid, "Grid for search protocols, POLARxAZIMUTHAL");
  de->add_option("--tol", c.tol, "Slack tolerance (default 1e-6)");
  de->add_flag("--no-optimizer", c.no_optimizer, "Skip the PPT optimizer on the joint state");
  add_output_flags(de, c);

  auto* verify = app.add_subcommand("verify", "Randomised property suites");
  verify->add_option("--suite", c.suites, "Suite name (repeatable; default all)");
  verify->add_option("--trials", c.trials, "Trials per suite (default: per-suite count)");
  verify->add_option("--seed", c.seed, "64-bit seed");
  add_output_flags(verify, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    parse_grid(c.grid);
    if (bounds->parsed()) return cmd_bounds(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (sweep->parsed()) return cmd_sweep(c, out);
    if (ree_cmd->parsed()) return cmd_ree(c, out);
    if (de->parsed()) return cmd_delta_e(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace locc::cli
