#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locc/entangle.hpp"
#include "locc/measure.hpp"

namespace locc {

/// One evaluated inequality lhs <= rhs + tolerance. Checks with
/// `asserted == false` are informational and never fail a report.
struct InequalityCheck {
  std::string name;
  double lhs;
  double rhs;
  double tolerance;
  bool asserted = true;
  bool pass() const { return !asserted || lhs <= rhs + tolerance; }
};

struct BoundOptions {
  std::optional<EntanglementMeasure> measure;  // default_measure() when empty
  double saturation_tol = 1e-6;
  double inequality_tol = 1e-9;
  ReeOptions ree;
};

struct BoundReport {
  double chi;
  double s_a, s_b, sbar_a, sbar_b;
  double theorem_bound;  // S(rho_A) + S(rho_B) - max(Sbar_A, Sbar_B)
  double n;              // log2(d_A d_B)
  double e_bar;
  EntanglementMeasure e_bar_measure;
  double n_minus_e;
  double operative_ceiling;  // min(chi, theorem_bound)

  std::optional<double> achieved_info;
  std::optional<double> g_a, g_b;
  std::optional<double> holevo_gain_a, holevo_gain_b;
  std::optional<double> multi_step_bound;  // S_A + S_B - Sbar_A - Sbar_B + g_A + g_B
  std::optional<bool> strictly_alternating;

  bool saturated_theorem = false;
  bool saturated_n_minus_e = false;
  bool saturated_chi = false;
  double saturation_tol;

  std::vector<InequalityCheck> checks;
  bool all_pass() const;
};

BoundReport theorem_bound(const Ensemble& e, const BoundOptions& opts = {});

/// Runs the protocol and checks the achieved information against every bound.
/// Bounds that only hold for LOCC are not asserted for trees with global
/// instruments.
BoundReport verify_protocol_against_bounds(const Ensemble& e, const ProtocolTree& t, const BoundOptions& opts = {});

/// Signals on AB correlated with detector states on CD. `joint` is ordered
/// A, B, C, D; `joint_cut` is the same state reordered to A C B D and grouped as
/// {d_A d_C, d_B d_D}.
struct DetectorSetup {
  Ensemble signal;
  std::vector<DensityMatrix> detectors;
  DensityMatrix joint;
  DensityMatrix joint_cut;
  Bipartition cut;  // {0, 2} on the ABCD ordering
};

DetectorSetup build_detector_setup(const Ensemble& signal, const std::vector<DensityMatrix>& detectors);

/// The same signal states and detectors with uniform priors.
DensityMatrix uniform_prior_joint(const DetectorSetup& setup);

struct DeltaEOptions {
  std::optional<EntanglementMeasure> detector_measure;  // pure_entropy for pure detectors, else ree
  /// Known separable state on ABCD. When present, S(joint | reference) upper
  /// bounds the joint entanglement.
  std::optional<DensityMatrix> separable_reference;
  bool run_optimizer = true;
  double tol = 1e-6;
  ReeOptions ree;
};

struct DeltaEReport {
  double h_s;
  double e_bar_det;
  EntanglementMeasure detector_measure;
  double e_joint;
  /// "ree-exact", "ree-ppt-relaxation" or "relative-entropy-to-reference".
  std::string e_joint_method;
  std::optional<double> e_joint_ppt;  // PPT lower bound when the optimizer ran
  std::optional<double> reference_negativity;
  double delta_e;
  double i_locc;
  double inequality_slack;  // h_s - i_locc - delta_e
  bool asserted;
  double tol;
  bool pass() const { return !asserted || inequality_slack >= -tol; }
};

/// Throws InputError when the protocol is not local to A and B of the signal.
DeltaEReport delta_e(const DetectorSetup& setup, const ProtocolTree& t, const DeltaEOptions& opts = {});

struct DetectorInfoReport {
  double info;        // H_s - sum_j q_j H(p_{x|j})
  double comparison;  // H_s - sum_j q_j S(eta_j) + sum_x p_x S(gamma_x)
  bool orthogonal_detectors;
  bool holds;     // info <= comparison + 1e-9
  bool equality;  // |info - comparison| <= 1e-9
};

/// Measurement on AB (local or global) with the detectors left untouched.
DetectorInfoReport detector_measurement_info_bound(const DetectorSetup& setup, const Instrument& m);

struct DetectorCandidateResult {
  double e_joint;
  std::string method;
  double target;  // S_A + S_B - H_s
  bool meets_target;
};

/// Evaluates candidate detector assignments for a signal ensemble and reports,
/// for each, the joint entanglement against S_A + S_B - H_s.
std::vector<DetectorCandidateResult> search_detectors(const Ensemble& signal,
                                                      const std::vector<std::vector<DensityMatrix>>& candidates,
                                                      const DeltaEOptions& opts = {});

}  // namespace locc
