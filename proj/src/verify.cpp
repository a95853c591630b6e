#include "locc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "locc/bounds.hpp"
#include "locc/error.hpp"
#include "locc/parallel.hpp"
#include "locc/random.hpp"
#include "locc/states.hpp"

namespace locc {

namespace {

struct TrialOutcome {
  bool pass = true;
  double excess = -std::numeric_limits<double>::infinity();

  // lhs <= rhs + tol
  void le(double lhs, double rhs, double tol) {
    excess = std::max(excess, lhs - rhs);
    if (!(lhs <= rhs + tol)) pass = false;
  }
  // |a - b| <= tol
  void near(double a, double b, double tol) {
    excess = std::max(excess, std::abs(a - b));
    if (!(std::abs(a - b) <= tol)) pass = false;
  }
  void require(bool ok) {
    if (!ok) pass = false;
  }
};

using TrialFn = std::function<TrialOutcome(CounterRng&, std::size_t)>;

struct Suite {
  const char* name;
  std::size_t default_trials;
  TrialFn run;
};

Dims pick_dims(CounterRng& rng, std::initializer_list<Dims> options) {
  const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(options.size()) - 1));
  return *(options.begin() + i);
}

DensityMatrix cq_state(const Ensemble& e) {
  const int nx = static_cast<int>(e.size());
  const int d = e.dim();
  CMatrix m = CMatrix::Zero(nx * d, nx * d);
  for (int x = 0; x < nx; ++x) m.block(x * d, x * d, d, d) = e.items()[x].prob * e.items()[x].state.mat();
  return DensityMatrix::unchecked(std::move(m), Dims{nx, d});
}

TrialOutcome qmat_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const int da = rng.uniform_int(2, 3), db = rng.uniform_int(2, 3);
  const DensityMatrix rho(random_density(da, rng.uniform_int(1, da), rng));
  const DensityMatrix sigma(random_density(db, rng.uniform_int(1, db), rng));
  const DensityMatrix prod = tensor(rho, sigma);
  t.near(von_neumann_entropy(prod), von_neumann_entropy(rho) + von_neumann_entropy(sigma), 1e-9);

  const auto mix = random_ensemble({da}, 3, rng);
  double avg = 0.0;
  for (const auto& it : mix.items()) avg += it.prob * von_neumann_entropy(it.state);
  t.le(avg, von_neumann_entropy(average_state(mix)), 1e-9);

  const DensityMatrix full(random_density(da, da, rng));
  t.le(0.0, relative_entropy(rho, full), 1e-9);
  t.near(von_neumann_entropy(conjugate(rho)), von_neumann_entropy(rho), 1e-9);

  const DensityMatrix joint(random_density(da * db, rng.uniform_int(1, da * db), rng), {da, db});
  const auto ra = partial_trace(joint, {0});
  t.near(ra.mat().trace().real(), 1.0, 1e-10);
  t.le(max_hermitian_deviation(ra.mat()), 0.0, 1e-12);
  t.near(partial_trace(joint, {1}).mat().trace().real(), joint.mat().trace().real(), 1e-10);
  return t;
}

TrialOutcome ensemble_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const Dims dims = pick_dims(rng, {{2, 2}, {2, 3}, {3, 2}});
  const auto e = random_ensemble(dims, rng.uniform_int(2, 4), rng);
  const double chi = holevo_chi(e);
  t.le(chi, von_neumann_entropy(average_state(e)), 1e-9);
  t.le(holevo_chi(reduced_ensemble(e, Party::A)), chi, 1e-9);
  t.le(holevo_chi(reduced_ensemble(e, Party::B)), chi, 1e-9);

  const CMatrix u = tensor(random_unitary(dims[0], rng), random_unitary(dims[1], rng));
  std::vector<EnsembleItem> rotated;
  for (const auto& it : e.items()) {
    rotated.push_back({it.prob, DensityMatrix::unchecked(u * it.state.mat() * u.adjoint(), dims), it.label, it.pure});
  }
  const Ensemble r(std::move(rotated), dims);
  t.near(average_reduced_entropy(r, Party::A), average_reduced_entropy(e, Party::A), 1e-9);
  t.near(average_reduced_entropy(r, Party::B), average_reduced_entropy(e, Party::B), 1e-9);

  // Commuting diagonal states: chi equals the classical mutual information.
  const int nx = 3, d = 3;
  const auto flat = random_probabilities(nx * d, rng);
  Eigen::MatrixXd joint(nx, d);
  std::vector<EnsembleItem> diag;
  for (int x = 0; x < nx; ++x) {
    for (int k = 0; k < d; ++k) joint(x, k) = flat[x * d + k];
    const double px = joint.row(x).sum();
    CMatrix m = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) m(k, k) = joint(x, k) / px;
    diag.push_back({px, DensityMatrix::unchecked(std::move(m), {d}), "", false});
  }
  t.near(holevo_chi(Ensemble(std::move(diag), {d})), classical_mutual_information(joint), 1e-9);
  return t;
}

TrialOutcome lemma1_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const Dims dims = pick_dims(rng, {{2}, {3}, {4}, {2, 2}});
  const auto e = random_ensemble(dims, rng.uniform_int(2, 4), rng);
  const auto m = random_instrument(total_dim(dims), rng.uniform_int(2, 4), Party::Global, rng);
  const auto s = step_info_gain(e, m);
  t.le(-s.info, 0.0, 1e-9);
  t.le(s.info, s.lemma_rhs, 1e-9);
  return t;
}

ProtocolTree random_two_level_tree(const Dims& dims, CounterRng& rng) {
  const Party first = rng.uniform() < 0.5 ? Party::A : Party::B;
  const auto dim_of = [&](Party p) { return dims[p == Party::A ? 0 : 1]; };
  ProtocolTree root(random_instrument(dim_of(first), rng.uniform_int(2, 3), first, rng));
  for (std::size_t y = 0; y < root.instrument().num_outcomes(); ++y) {
    if (rng.uniform() < 0.2) continue;  // leaf at depth one
    const Party p = rng.uniform() < 0.75 ? (first == Party::A ? Party::B : Party::A) : first;
    root.add_child(y, ProtocolTree(random_instrument(dim_of(p), rng.uniform_int(2, 3), p, rng)));
  }
  return root;
}

TrialOutcome chainrule_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const Dims dims = pick_dims(rng, {{2, 2}, {2, 3}});
  const auto e = random_ensemble(dims, rng.uniform_int(2, 4), rng);
  const auto r = run_protocol(e, random_two_level_tree(dims, rng));
  t.near(r.total_info, r.direct_info, 1e-10);
  return t;
}

TrialOutcome monotonicity_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const int d = rng.uniform_int(2, 3);
  const auto e = random_ensemble({d}, rng.uniform_int(2, 4), rng);
  const auto m = random_instrument(d, rng.uniform_int(2, 3), Party::Global, rng);
  const DensityMatrix before = cq_state(e);
  const int x_only = 0;
  const double i_before = quantum_mutual_information(before, std::span<const int>(&x_only, 1));
  t.near(i_before, holevo_chi(e), 1e-9);

  const int nx = static_cast<int>(e.size());
  const int ny = static_cast<int>(m.num_outcomes());
  const int n = nx * d * ny;
  CMatrix after = CMatrix::Zero(n, n);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const CMatrix s = m.kraus()[y] * e.items()[x].state.mat() * m.kraus()[y].adjoint();
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          after((x * d + i) * ny + y, (x * d + j) * ny + y) = e.items()[x].prob * s(i, j);
        }
      }
    }
  }
  const DensityMatrix rho_after = DensityMatrix::unchecked(std::move(after), {nx, d, ny});
  t.le(quantum_mutual_information(rho_after, std::span<const int>(&x_only, 1)), i_before, 1e-9);
  return t;
}

TrialOutcome facts_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const Dims dims = pick_dims(rng, {{2, 2}, {2, 3}, {3, 2}});
  const auto e = random_ensemble(dims, rng.uniform_int(2, 4), rng);
  const auto m = random_instrument(dims[0], rng.uniform_int(2, 3), Party::A, rng);
  const auto st = stats(e);
  double s_b_after = 0.0, sbar_a_after = 0.0, sbar_b_after = 0.0;
  for (const auto& o : apply_instrument(e, m)) {
    s_b_after += o.prob * von_neumann_entropy(partial_trace(average_state(o.posterior), {1}));
    sbar_a_after += o.prob * average_reduced_entropy(o.posterior, Party::A);
    sbar_b_after += o.prob * average_reduced_entropy(o.posterior, Party::B);
  }
  t.le(s_b_after, st.s_b, 1e-9);
  const double d_sbar_b = st.sbar_b - sbar_b_after;
  const double d_sbar_a = st.sbar_a - sbar_a_after;
  t.le(d_sbar_b, d_sbar_a, 1e-9);
  t.le(d_sbar_b, st.sbar_b, 1e-9);
  t.le(d_sbar_b, st.sbar_a, 1e-9);
  return t;
}

ProtocolTree random_local_tree(const Dims& dims, CounterRng& rng, int depth) {
  const Party p = rng.uniform() < 0.5 ? Party::A : Party::B;
  ProtocolTree node(random_instrument(dims[p == Party::A ? 0 : 1], rng.uniform_int(2, 3), p, rng));
  if (depth > 1) {
    for (std::size_t y = 0; y < node.instrument().num_outcomes(); ++y) {
      if (rng.uniform() < 0.8) node.add_child(y, random_local_tree(dims, rng, depth - 1));
    }
  }
  return node;
}

TrialOutcome theorem_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const Dims dims{2, 2};
  const auto e = random_ensemble(dims, rng.uniform_int(2, 4), rng);
  const auto r = verify_protocol_against_bounds(e, random_local_tree(dims, rng, rng.uniform_int(1, 3)));
  for (const auto& c : r.checks) {
    if (c.asserted && c.name != "chain_rule_residual") t.le(c.lhs, c.rhs, c.tolerance);
  }
  t.require(r.all_pass());
  return t;
}

TrialOutcome corollary_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const CMatrix u = random_unitary(4, rng);
  std::vector<CVector> basis;
  for (int k = 0; k < 4; ++k) basis.push_back(u.col(k));
  const auto e = Ensemble::from_vectors(basis, std::vector<double>(4, 0.25), {2, 2});
  const auto r = theorem_bound(e);
  t.require(r.e_bar > 1e-9);
  t.le(r.theorem_bound, r.n_minus_e, 1e-9);
  // Any entangled member keeps the ceiling below n.
  t.le(r.n - r.n_minus_e, r.n - r.theorem_bound, 1e-9);
  t.require(std::min(r.operative_ceiling, r.n_minus_e) < r.n - 1e-9);
  return t;
}

TrialOutcome entanglement_trial(CounterRng& rng, std::size_t trial) {
  TrialOutcome t;
  const CVector psi = random_pure_state(4, rng);
  const auto pure = DensityMatrix::from_vector(psi, {2, 2});
  t.near(eof_2q(pure), pure_entanglement_entropy(psi, {2, 2}), 1e-8);

  const DensityMatrix mixed(random_density(4, rng.uniform_int(1, 4), rng), {2, 2});
  const CMatrix u = tensor(random_unitary(2, rng), random_unitary(2, rng));
  const auto rotated = DensityMatrix::unchecked(u * mixed.mat() * u.adjoint(), {2, 2});
  t.near(eof_2q(rotated), eof_2q(mixed), 1e-8);
  t.near(negativity(rotated), negativity(mixed), 1e-8);
  t.le(0.0, negativity(mixed), 1e-12);

  if (trial % 10 == 0) {
    const auto r = ree(mixed);
    t.le(r.value, eof_2q(mixed), 1e-4);
    const bool separable = negativity(mixed) < 1e-9;
    if (separable) t.le(r.value, 0.0, 1e-4);
    if (!separable && negativity(mixed) > 1e-3) t.require(r.value > 1e-6);
  }
  return t;
}

TrialOutcome detector_info_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  const auto signal = random_ensemble({2, 2}, 2, rng);
  std::vector<DensityMatrix> detectors;
  const bool orthogonal = rng.uniform() < 0.5;
  if (orthogonal) {
    const CMatrix u = random_unitary(4, rng);
    for (int x = 0; x < 2; ++x) detectors.push_back(DensityMatrix::from_vector(u.col(x), {2, 2}));
  } else {
    for (int x = 0; x < 2; ++x) detectors.push_back(DensityMatrix(random_density(4, rng.uniform_int(1, 4), rng), {2, 2}));
  }
  const auto setup = build_detector_setup(signal, detectors);
  const auto m = random_instrument(4, rng.uniform_int(2, 4), Party::Global, rng);
  const auto r = detector_measurement_info_bound(setup, m);
  t.le(r.info, r.comparison, 1e-9);
  if (orthogonal) t.near(r.info, r.comparison, 1e-9);
  return t;
}

TrialOutcome delta_e_trial(CounterRng& rng, std::size_t) {
  TrialOutcome t;
  // Orthogonal maximally entangled detectors, rotated locally on C and D.
  const auto signal = random_ensemble({2, 2}, 4, rng);
  const CMatrix u = tensor(random_unitary(2, rng), random_unitary(2, rng));
  std::vector<DensityMatrix> detectors;
  for (const auto& b : bell_states()) detectors.push_back(DensityMatrix::from_vector(u * b, {2, 2}));
  const auto setup = build_detector_setup(signal, detectors);
  const auto r = delta_e(setup, random_local_tree({2, 2}, rng, 2));
  t.le(-r.inequality_slack, 0.0, 1e-6);
  return t;
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"qmat", 200, qmat_trial},
      {"ensemble", 200, ensemble_trial},
      {"lemma1", 500, lemma1_trial},
      {"chainrule", 100, chainrule_trial},
      {"monotonicity", 200, monotonicity_trial},
      {"facts", 500, facts_trial},
      {"theorem", 200, theorem_trial},
      {"corollary", 100, corollary_trial},
      {"entanglement", 200, entanglement_trial},
      {"detector_info", 200, detector_info_trial},
      {"delta_e", 5, delta_e_trial},
  };
  return all;
}

const Suite& find_suite(const std::string& name) {
  for (const auto& s : suites()) {
    if (name == s.name) return s;
  }
  throw InputError("suite", "unknown suite \"" + name + "\"");
}

std::uint64_t stream_of(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h << 20;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& s : suites()) names.emplace_back(s.name);
  return names;
}

std::size_t default_trials(const std::string& suite) { return find_suite(suite).default_trials; }

SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t trials) {
  const Suite& suite = find_suite(name);
  const std::size_t n = trials ? trials : suite.default_trials;
  const std::uint64_t stream = stream_of(name);
  const auto outcomes = parallel_map(n, [&](std::size_t i) {
    CounterRng rng(seed, stream + i);
    try {
      return suite.run(rng, i);
    } catch (const std::exception&) {
      TrialOutcome failed;
      failed.pass = false;
      return failed;
    }
  });
  SuiteResult r;
  r.name = name;
  r.trials = n;
  r.seed = seed;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    r.max_excess = std::max(r.max_excess, outcomes[i].excess);
    if (!outcomes[i].pass) {
      ++r.failures;
      if (r.failing_trials.size() < 10) r.failing_trials.push_back(i);
    }
  }
  return r;
}

std::vector<SuiteResult> run_verification(const VerifyConfig& config) {
  std::vector<std::string> names = config.suites.empty() ? suite_names() : config.suites;
  std::vector<SuiteResult> out;
  for (const auto& n : names) out.push_back(run_suite(n, config.seed, config.trials));
  return out;
}

}  // namespace locc
