#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locc/ensemble.hpp"

namespace locc {

inline constexpr double kCompletenessTol = 1e-9;

/// Kraus operators for one measurement step. Local instruments act on one
/// party's factor and are embedded as V (x) I or I (x) V.
class Instrument {
 public:
  /// Throws InvalidStateError unless sum_y V_y^dagger V_y = I within
  /// kCompletenessTol.
  Instrument(std::vector<CMatrix> kraus, Party party);

  const std::vector<CMatrix>& kraus() const noexcept { return kraus_; }
  Party party() const noexcept { return party_; }
  int local_dim() const noexcept { return static_cast<int>(kraus_.front().rows()); }
  std::size_t num_outcomes() const noexcept { return kraus_.size(); }

  /// Kraus operator y acting on the full space of a bipartite ensemble.
  CMatrix embedded(std::size_t y, const Dims& dims) const;
  void check_compatible(const Dims& dims) const;

 private:
  std::vector<CMatrix> kraus_;
  Party party_;
};

/// Projective measurement in the computational basis of the party's factor.
Instrument computational_basis(int dim, Party party);

/// Rank-one projective measurement onto the columns of a unitary.
Instrument projective(const CMatrix& basis, Party party);

Instrument identity_instrument(int dim, Party party);

struct MeasurementOutcome {
  std::size_t outcome;
  double prob;
  Ensemble posterior;
};

/// Outcomes with p_y below kDropProbability are omitted. Posterior labels
/// match the prior labels, probabilities are Bayes-updated.
std::vector<MeasurementOutcome> apply_instrument(const Ensemble& e, const Instrument& m);

/// Matrix of p_x * p(y|x), rows in ensemble order, columns per Kraus operator.
Eigen::MatrixXd outcome_joint(const Ensemble& e, const Instrument& m);

/// I(X:Y) of a (possibly unnormalised) joint probability table.
double classical_mutual_information(const Eigen::MatrixXd& joint);

struct StepInfo {
  double info;
  double lemma_rhs;  // chi before minus average chi after
};

StepInfo step_info_gain(const Ensemble& e, const Instrument& m);

/// Measurement tree. Children are keyed by outcome index; subtrees are shared
/// immutable values, so identical branches can be reused.
class ProtocolTree {
 public:
  explicit ProtocolTree(Instrument instrument);

  ProtocolTree& add_child(std::size_t outcome, ProtocolTree subtree);

  const Instrument& instrument() const noexcept { return instrument_; }
  const std::map<std::size_t, std::shared_ptr<const ProtocolTree>>& children() const noexcept { return children_; }
  bool is_leaf() const noexcept { return children_.empty(); }
  std::size_t depth() const;

  /// True if parties strictly alternate between a node and each child.
  bool strictly_alternating() const;
  bool local_only() const;

 private:
  Instrument instrument_;
  std::map<std::size_t, std::shared_ptr<const ProtocolTree>> children_;
};

/// `first` measures in its computational basis, then for every outcome the
/// other party does the same.
ProtocolTree computational_two_round(const Dims& dims, Party first = Party::A);

/// Aggregate over all nodes at one depth. Probabilities are absolute (weighted
/// by the chance of reaching the node), so values sum across levels.
struct StepRecord {
  int level;
  Party party;
  bool mixed_party;
  double info_gain;
  double lemma_rhs;
  double sbar_a_before, sbar_a_after;
  double sbar_b_before, sbar_b_after;
};

struct ProtocolResult {
  double total_info;   // sum of per-level conditional mutual information
  double direct_info;  // I(X:Y) of joint_dist
  std::vector<StepRecord> steps;
  // Accumulated decrease of a party's average reduced entropy caused by the
  // other party's outcomes.
  double g_a, g_b;
  // Accumulated change of a party's reduced Holevo quantity caused by the other
  // party's outcomes. Negative when the other party's measurement destroys
  // information this party could have accessed.
  double holevo_gain_a, holevo_gain_b;
  Eigen::MatrixXd joint_dist;  // rows: signal labels, cols: leaf paths
  std::vector<std::string> labels;
  std::vector<std::string> leaf_paths;
  bool strictly_alternating;
  bool local_only;
};

/// Leaf paths are outcome indices joined by '.', e.g. "0.1".
ProtocolResult run_protocol(const Ensemble& e, const ProtocolTree& t);

/// I_M = S(X) + S(Y) - S(XY) where X is the set of subsystems in `left`.
double quantum_mutual_information(const DensityMatrix& rho, std::span<const int> left);

struct GridSpec {
  int polar = 24;
  int azimuthal = 48;
};

struct LocalSearchResult {
  Instrument best;
  double info;
};

/// Exhaustive search over product projective qubit measurements on one party.
/// Each qubit's basis is taken from a hemisphere grid of Bloch directions that
/// includes the computational and Hadamard bases. With several qubits the
/// search cycles through them coordinate-wise until no improvement.
LocalSearchResult optimize_one_round_local(const Ensemble& e, Party party, GridSpec grid = {});

struct TwoRoundSearchResult {
  ProtocolTree protocol;
  double info;
};

/// First party's measurement from the grid, followed by the other party's
/// best grid measurement for each outcome.
TwoRoundSearchResult optimize_two_round_local(const Ensemble& e, Party first, GridSpec grid = {});

}  // namespace locc
