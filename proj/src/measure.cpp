#include "locc/measure.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "locc/error.hpp"
#include "locc/parallel.hpp"

namespace locc {

// Instrument

Instrument::Instrument(std::vector<CMatrix> kraus, Party party) : kraus_(std::move(kraus)), party_(party) {
  if (kraus_.empty()) throw InvalidStateError("instrument has no Kraus operators");
  const auto d = kraus_.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operators must be square with equal size");
    sum += k.adjoint() * k;
  }
  const double dev = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > kCompletenessTol) {
    throw InvalidStateError("instrument is incomplete: |sum V^dagger V - I| = " + std::to_string(dev));
  }
}

void Instrument::check_compatible(const Dims& dims) const {
  switch (party_) {
    case Party::A:
    case Party::B: {
      if (dims.size() != 2) throw DimensionError("local instrument needs a bipartite ensemble");
      const int expected = dims[party_ == Party::A ? 0 : 1];
      if (local_dim() != expected) {
        throw DimensionError(std::string("instrument for party ") + to_string(party_) + " has dimension " +
                             std::to_string(local_dim()) + ", party dimension is " + std::to_string(expected));
      }
      break;
    }
    case Party::Global:
      if (local_dim() != total_dim(dims)) throw DimensionError("global instrument dimension mismatch");
      break;
  }
}

CMatrix Instrument::embedded(std::size_t y, const Dims& dims) const {
  check_compatible(dims);
  const CMatrix& k = kraus_.at(y);
  switch (party_) {
    case Party::A:
      return tensor(k, CMatrix::Identity(dims[1], dims[1]));
    case Party::B:
      return tensor(CMatrix::Identity(dims[0], dims[0]), k);
    case Party::Global:
      break;
  }
  return k;
}

Instrument computational_basis(int dim, Party party) {
  std::vector<CMatrix> kraus;
  for (int i = 0; i < dim; ++i) {
    CMatrix p = CMatrix::Zero(dim, dim);
    p(i, i) = 1.0;
    kraus.push_back(std::move(p));
  }
  return Instrument(std::move(kraus), party);
}

Instrument projective(const CMatrix& basis, Party party) {
  std::vector<CMatrix> kraus;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) kraus.push_back(basis.col(i) * basis.col(i).adjoint());
  return Instrument(std::move(kraus), party);
}

Instrument identity_instrument(int dim, Party party) {
  return Instrument({CMatrix::Identity(dim, dim)}, party);
}

// Single step

namespace {

// States the instrument actually acts on: reductions for local instruments.
std::vector<CMatrix> acted_states(const Ensemble& e, const Instrument& m) {
  m.check_compatible(e.dims());
  std::vector<CMatrix> out;
  out.reserve(e.size());
  for (const auto& it : e.items()) {
    if (m.party() == Party::Global) {
      out.push_back(it.state.mat());
    } else {
      const int keep = m.party() == Party::A ? 0 : 1;
      out.push_back(partial_trace(it.state.mat(), e.dims(), std::span<const int>(&keep, 1)));
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd outcome_joint(const Ensemble& e, const Instrument& m) {
  const auto states = acted_states(e, m);
  std::vector<CMatrix> effects;
  for (const auto& k : m.kraus()) effects.push_back(k.adjoint() * k);
  Eigen::MatrixXd joint(e.size(), m.num_outcomes());
  for (std::size_t x = 0; x < e.size(); ++x) {
    for (std::size_t y = 0; y < effects.size(); ++y) {
      const double p = std::max(0.0, (effects[y].cwiseProduct(states[x].transpose())).sum().real());
      joint(x, y) = e.items()[x].prob * p;
    }
  }
  return joint;
}

double classical_mutual_information(const Eigen::MatrixXd& joint) {
  const double total = joint.sum();
  if (total <= 0.0) return 0.0;
  const Eigen::VectorXd px = joint.rowwise().sum() / total;
  const Eigen::RowVectorXd py = joint.colwise().sum() / total;
  double info = 0.0;
  for (Eigen::Index x = 0; x < joint.rows(); ++x) {
    for (Eigen::Index y = 0; y < joint.cols(); ++y) {
      const double p = joint(x, y) / total;
      if (p > 0.0) info += p * std::log2(p / (px[x] * py[y]));
    }
  }
  return info;
}

std::vector<MeasurementOutcome> apply_instrument(const Ensemble& e, const Instrument& m) {
  m.check_compatible(e.dims());
  std::vector<MeasurementOutcome> out;
  for (std::size_t y = 0; y < m.num_outcomes(); ++y) {
    const CMatrix k = m.embedded(y, e.dims());
    std::vector<CMatrix> updated;
    std::vector<double> likelihood;
    double py = 0.0;
    for (const auto& it : e.items()) {
      CMatrix s = k * it.state.mat() * k.adjoint();
      const double p = std::max(0.0, s.trace().real());
      updated.push_back(std::move(s));
      likelihood.push_back(p);
      py += it.prob * p;
    }
    if (py < kDropProbability) continue;
    std::vector<EnsembleItem> items;
    double kept = 0.0;
    for (std::size_t x = 0; x < e.size(); ++x) {
      const auto& it = e.items()[x];
      const double posterior = it.prob * likelihood[x] / py;
      if (posterior < kDropProbability) continue;
      kept += posterior;
      items.push_back({posterior, DensityMatrix::unchecked(updated[x] / likelihood[x], e.dims()), it.label, it.pure});
    }
    for (auto& it : items) it.prob /= kept;
    out.push_back({y, py, Ensemble(std::move(items), e.dims())});
  }
  return out;
}

StepInfo step_info_gain(const Ensemble& e, const Instrument& m) {
  const double info = classical_mutual_information(outcome_joint(e, m));
  double after = 0.0;
  for (const auto& o : apply_instrument(e, m)) after += o.prob * holevo_chi(o.posterior);
  return {info, holevo_chi(e) - after};
}

// Protocol trees

ProtocolTree::ProtocolTree(Instrument instrument) : instrument_(std::move(instrument)) {}

ProtocolTree& ProtocolTree::add_child(std::size_t outcome, ProtocolTree subtree) {
  if (outcome >= instrument_.num_outcomes()) {
    throw InputError("children", "outcome " + std::to_string(outcome) + " exceeds instrument outcome count " +
                                     std::to_string(instrument_.num_outcomes()));
  }
  children_[outcome] = std::make_shared<const ProtocolTree>(std::move(subtree));
  return *this;
}

std::size_t ProtocolTree::depth() const {
  std::size_t d = 0;
  for (const auto& [_, c] : children_) d = std::max(d, c->depth());
  return d + 1;
}

bool ProtocolTree::strictly_alternating() const {
  for (const auto& [_, c] : children_) {
    if (c->instrument().party() == instrument_.party() || !c->strictly_alternating()) return false;
  }
  return true;
}

bool ProtocolTree::local_only() const {
  if (instrument_.party() == Party::Global) return false;
  for (const auto& [_, c] : children_) {
    if (!c->local_only()) return false;
  }
  return true;
}

ProtocolTree computational_two_round(const Dims& dims, Party first) {
  if (dims.size() != 2) throw DimensionError("computational_two_round needs a bipartite system");
  if (first == Party::Global) throw DimensionError("first party must be A or B");
  const Party second = first == Party::A ? Party::B : Party::A;
  const int d1 = dims[first == Party::A ? 0 : 1];
  const int d2 = dims[second == Party::A ? 0 : 1];
  ProtocolTree root(computational_basis(d1, first));
  const ProtocolTree leaf(computational_basis(d2, second));
  for (int y = 0; y < d1; ++y) root.add_child(y, leaf);
  return root;
}

namespace {

struct LocalSummary {
  double chi = 0.0;
  double sbar_a = 0.0, sbar_b = 0.0;
  double chi_a = 0.0, chi_b = 0.0;
};

LocalSummary summarize(const Ensemble& e) {
  LocalSummary s;
  s.chi = holevo_chi(e);
  if (e.is_bipartite()) {
    const auto st = stats(e);
    s.sbar_a = st.sbar_a;
    s.sbar_b = st.sbar_b;
    s.chi_a = std::max(0.0, st.s_a - st.sbar_a);
    s.chi_b = std::max(0.0, st.s_b - st.sbar_b);
  }
  return s;
}

struct LevelAccumulator {
  bool seen = false;
  Party party = Party::A;
  bool mixed = false;
  double info = 0.0, lemma = 0.0;
  double sbar_a_before = 0.0, sbar_a_after = 0.0;
  double sbar_b_before = 0.0, sbar_b_after = 0.0;
};

class ProtocolRunner {
 public:
  explicit ProtocolRunner(const Ensemble& root) {
    const auto labels = root.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) row_of_[labels[i]] = i;
    labels_ = labels;
  }

  void visit(const ProtocolTree& node, const Ensemble& e, const LocalSummary& here, double weight,
             const std::string& path, std::size_t level) {
    const Instrument& m = node.instrument();
    const auto outcomes = apply_instrument(e, m);
    if (levels_.size() <= level) levels_.resize(level + 1);
    auto& acc = levels_[level];
    if (!acc.seen) {
      acc.seen = true;
      acc.party = m.party();
    } else if (acc.party != m.party()) {
      acc.mixed = true;
    }

    std::vector<LocalSummary> child_summary;
    child_summary.reserve(outcomes.size());
    double h_after = 0.0;
    LocalSummary after;
    for (const auto& o : outcomes) {
      child_summary.push_back(summarize(o.posterior));
      const auto& cs = child_summary.back();
      h_after += o.prob * entropy_bits(std::span<const double>(o.posterior.probabilities()));
      after.chi += o.prob * cs.chi;
      after.sbar_a += o.prob * cs.sbar_a;
      after.sbar_b += o.prob * cs.sbar_b;
      after.chi_a += o.prob * cs.chi_a;
      after.chi_b += o.prob * cs.chi_b;
    }
    // H(X | node) - H(X | node, Y): telescopes exactly across levels.
    const double info = entropy_bits(std::span<const double>(e.probabilities())) - h_after;
    acc.info += weight * info;
    acc.lemma += weight * (here.chi - after.chi);
    acc.sbar_a_before += weight * here.sbar_a;
    acc.sbar_a_after += weight * after.sbar_a;
    acc.sbar_b_before += weight * here.sbar_b;
    acc.sbar_b_after += weight * after.sbar_b;

    if (m.party() == Party::A) {
      g_b_ += weight * (here.sbar_b - after.sbar_b);
      holevo_gain_b_ += weight * (after.chi_b - here.chi_b);
    } else if (m.party() == Party::B) {
      g_a_ += weight * (here.sbar_a - after.sbar_a);
      holevo_gain_a_ += weight * (after.chi_a - here.chi_a);
    }

    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      const std::string child_path = path.empty() ? std::to_string(o.outcome) : path + "." + std::to_string(o.outcome);
      const auto it = node.children().find(o.outcome);
      if (it != node.children().end()) {
        visit(*it->second, o.posterior, child_summary[i], weight * o.prob, child_path, level + 1);
      } else {
        Eigen::VectorXd column = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(labels_.size()));
        for (const auto& item : o.posterior.items()) column[row_of_.at(item.label)] = weight * o.prob * item.prob;
        leaf_columns_.push_back(std::move(column));
        leaf_paths_.push_back(child_path);
      }
    }
  }

  ProtocolResult finish(const ProtocolTree& root) const {
    ProtocolResult r;
    r.total_info = 0.0;
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      const auto& acc = levels_[l];
      if (!acc.seen) continue;
      r.steps.push_back({static_cast<int>(l + 1), acc.party, acc.mixed, acc.info, acc.lemma, acc.sbar_a_before,
                         acc.sbar_a_after, acc.sbar_b_before, acc.sbar_b_after});
      r.total_info += acc.info;
    }
    r.joint_dist.resize(static_cast<Eigen::Index>(labels_.size()), static_cast<Eigen::Index>(leaf_columns_.size()));
    for (std::size_t c = 0; c < leaf_columns_.size(); ++c) r.joint_dist.col(c) = leaf_columns_[c];
    r.direct_info = classical_mutual_information(r.joint_dist);
    r.g_a = g_a_;
    r.g_b = g_b_;
    r.holevo_gain_a = holevo_gain_a_;
    r.holevo_gain_b = holevo_gain_b_;
    r.labels = labels_;
    r.leaf_paths = leaf_paths_;
    r.strictly_alternating = root.strictly_alternating();
    r.local_only = root.local_only();
    return r;
  }

 private:
  std::unordered_map<std::string, std::size_t> row_of_;
  std::vector<std::string> labels_;
  std::vector<LevelAccumulator> levels_;
  std::vector<Eigen::VectorXd> leaf_columns_;
  std::vector<std::string> leaf_paths_;
  double g_a_ = 0.0, g_b_ = 0.0;
  double holevo_gain_a_ = 0.0, holevo_gain_b_ = 0.0;
};

void check_tree(const ProtocolTree& t, const Dims& dims) {
  t.instrument().check_compatible(dims);
  for (const auto& [_, c] : t.children()) check_tree(*c, dims);
}

}  // namespace

ProtocolResult run_protocol(const Ensemble& e, const ProtocolTree& t) {
  check_tree(t, e.dims());
  ProtocolRunner runner(e);
  runner.visit(t, e, summarize(e), 1.0, "", 0);
  return runner.finish(t);
}

double quantum_mutual_information(const DensityMatrix& rho, std::span<const int> left) {
  const int n = static_cast<int>(rho.num_subsystems());
  std::vector<bool> in_left(n, false);
  for (int k : left) {
    if (k < 0 || k >= n) throw DimensionError("cut index " + std::to_string(k) + " out of range");
    in_left[k] = true;
  }
  std::vector<int> l, r;
  for (int k = 0; k < n; ++k) (in_left[k] ? l : r).push_back(k);
  if (l.empty() || r.empty()) throw DimensionError("cut must leave both sides nonempty");
  return von_neumann_entropy(partial_trace(rho, l)) + von_neumann_entropy(partial_trace(rho, r)) -
         von_neumann_entropy(rho);
}

// Grid search

namespace {

struct BlochDirection {
  double theta, phi;
};

std::vector<BlochDirection> hemisphere_grid(const GridSpec& g) {
  if (g.polar < 2 || g.azimuthal < 1) throw InputError("grid", "need at least 2 polar and 1 azimuthal points");
  std::vector<BlochDirection> dirs;
  for (int i = 0; i < g.polar; ++i) {
    const double theta = (std::numbers::pi / 2) * i / (g.polar - 1);
    const int n_phi = i == 0 ? 1 : g.azimuthal;
    for (int j = 0; j < n_phi; ++j) dirs.push_back({theta, 2 * std::numbers::pi * j / g.azimuthal});
  }
  return dirs;
}

CMatrix qubit_basis(const BlochDirection& d) {
  const double c = std::cos(d.theta / 2), s = std::sin(d.theta / 2);
  const Complex phase = std::polar(1.0, d.phi);
  CMatrix u(2, 2);
  u << c, -std::conj(phase) * s, phase * s, c;
  return u;
}

int qubit_count(int dim) {
  int k = 0;
  while ((1 << k) < dim) ++k;
  if ((1 << k) != dim || k == 0) {
    throw DimensionError("local grid search needs a party dimension that is a power of two, got " +
                         std::to_string(dim));
  }
  return k;
}

CMatrix product_basis(const std::vector<BlochDirection>& dirs, const std::vector<std::size_t>& choice) {
  CMatrix u = qubit_basis(dirs[choice[0]]);
  for (std::size_t q = 1; q < choice.size(); ++q) u = tensor(u, qubit_basis(dirs[choice[q]]));
  return u;
}

// Mutual information of a rank-one basis measurement given the reduced states.
double basis_info(const std::vector<CMatrix>& reduced, const std::vector<double>& probs, const CMatrix& basis) {
  Eigen::MatrixXd joint(reduced.size(), basis.cols());
  for (std::size_t x = 0; x < reduced.size(); ++x) {
    for (Eigen::Index y = 0; y < basis.cols(); ++y) {
      const double p = (basis.col(y).adjoint() * reduced[x] * basis.col(y))(0, 0).real();
      joint(x, y) = probs[x] * std::max(0.0, p);
    }
  }
  return classical_mutual_information(joint);
}

LocalSearchResult search_local(const Ensemble& e, Party party, const GridSpec& grid, bool parallel) {
  if (!e.is_bipartite()) throw DimensionError("local search needs a bipartite ensemble");
  if (party == Party::Global) throw DimensionError("local search needs party A or B");
  const int keep = party == Party::A ? 0 : 1;
  const int k = qubit_count(e.dims()[keep]);
  const auto dirs = hemisphere_grid(grid);
  std::vector<CMatrix> reduced;
  for (const auto& it : e.items()) reduced.push_back(partial_trace(it.state.mat(), e.dims(), std::span<const int>(&keep, 1)));
  const auto probs = e.probabilities();

  std::vector<std::size_t> choice(k, 0);
  double best = basis_info(reduced, probs, product_basis(dirs, choice));
  const unsigned workers = parallel ? 0u : 1u;
  for (int sweep = 0; sweep < 20; ++sweep) {
    bool improved = false;
    for (int q = 0; q < k; ++q) {
      const auto values = parallel_map(
          dirs.size(),
          [&](std::size_t i) {
            auto trial = choice;
            trial[q] = i;
            return basis_info(reduced, probs, product_basis(dirs, trial));
          },
          workers);
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > best + 1e-12) {
          best = values[i];
          choice[q] = i;
          improved = true;
        }
      }
    }
    if (!improved || k == 1) break;
  }
  return {projective(product_basis(dirs, choice), party), best};
}

}  // namespace

LocalSearchResult optimize_one_round_local(const Ensemble& e, Party party, GridSpec grid) {
  return search_local(e, party, grid, true);
}

TwoRoundSearchResult optimize_two_round_local(const Ensemble& e, Party first, GridSpec grid) {
  if (!e.is_bipartite()) throw DimensionError("local search needs a bipartite ensemble");
  if (first == Party::Global) throw DimensionError("first party must be A or B");
  const Party second = first == Party::A ? Party::B : Party::A;
  const int k = qubit_count(e.dims()[first == Party::A ? 0 : 1]);
  const auto dirs = hemisphere_grid(grid);

  struct Candidate {
    double info;
    std::vector<std::pair<std::size_t, Instrument>> follow_ups;
  };
  const auto candidates = parallel_map(dirs.size(), [&](std::size_t i) {
    // Several qubits: the same direction on each one.
    const std::vector<std::size_t> choice(k, i);
    const Instrument m = projective(product_basis(dirs, choice), first);
    double info = classical_mutual_information(outcome_joint(e, m));
    Candidate c{info, {}};
    for (const auto& o : apply_instrument(e, m)) {
      auto r = search_local(o.posterior, second, grid, false);
      c.info += o.prob * r.info;
      c.follow_ups.emplace_back(o.outcome, std::move(r.best));
    }
    return c;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].info > candidates[best].info + 1e-12) best = i;
  }
  ProtocolTree tree(projective(product_basis(dirs, std::vector<std::size_t>(k, best)), first));
  for (const auto& [outcome, m] : candidates[best].follow_ups) tree.add_child(outcome, ProtocolTree(m));
  return {std::move(tree), candidates[best].info};
}

}  // namespace locc
