#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locc/ensemble.hpp"

namespace locc {

enum class EntanglementMeasure { PureEntropy, EoF2q, Negativity, Ree };

const char* to_string(EntanglementMeasure m);
EntanglementMeasure measure_from_string(const std::string& s);

/// Subsystems on the left of a cut; the remaining ones form the right side.
struct Bipartition {
  std::vector<int> left{0};
};

/// Reorders a state so the left subsystems come first and returns it as a
/// two-factor matrix with dims {d_left, d_right}.
DensityMatrix group_cut(const DensityMatrix& rho, const Bipartition& cut);

double pure_entanglement_entropy(const CVector& psi, const Dims& dims, const Bipartition& cut = {});

/// Wootters concurrence of a 2x2 state (dims {2, 2}).
double concurrence_2q(const DensityMatrix& rho);

/// h((1 + sqrt(1 - C^2)) / 2)
double eof_from_concurrence(double c);
double eof_2q(const DensityMatrix& rho);

/// (||rho^{T_right}||_1 - 1) / 2
double negativity(const DensityMatrix& rho, const Bipartition& cut = {});

struct ReeOptions {
  double rel_tol = 1e-8;     // stop once the duality gap bound is below rel_tol * value
  double abs_tol = 1e-10;    // ... or below this many bits
  int max_iterations = 600;  // Newton steps over all barrier stages
  double mu_initial = 0.1;
  double mu_factor = 0.125;  // barrier weight multiplier between stages
  bool record_history = false;
};

struct ReeConvergence {
  int iterations = 0;        // Newton steps
  double gap_bound = 0.0;    // bits; value - REE <= gap_bound at a barrier-stage optimum
  bool converged = false;
  std::vector<double> history;  // objective after every barrier stage, when recorded
};

struct EntanglementReport {
  EntanglementMeasure measure;
  double value;
  Bipartition cut;
  /// "pure-entropy", "eof-2q", "negativity", "ree-exact" or "ree-ppt-relaxation".
  std::string method;
  std::optional<ReeConvergence> convergence;
  std::optional<CMatrix> closest_state;  // REE minimiser, grouped as {d_left, d_right}
};

/// Relative entropy of entanglement minimised over the PPT states of the cut,
/// by a log-barrier Newton method on {sigma > 0, sigma^T_B > 0, tr sigma = 1}.
/// The PPT set equals the separable set when d_left * d_right <= 6; larger
/// cuts are tagged "ree-ppt-relaxation" and give a lower bound. Throws
/// DimensionError above 36 dimensions. Non-convergence is reported in
/// `convergence`, not thrown.
EntanglementReport ree(const DensityMatrix& rho, const Bipartition& cut = {}, const ReeOptions& opts = {});

/// Closed form for Bell-diagonal states: 0 if max lambda <= 1/2, else
/// 1 - h(max lambda).
double ree_bell_diagonal(std::span<const double> lambdas);

/// Measure value of one state, dispatching on `measure`.
double entanglement(const DensityMatrix& rho, EntanglementMeasure measure, const Bipartition& cut = {},
                    const ReeOptions& opts = {});

/// sum_x p_x E(rho_x) across the A:B cut.
double average_entanglement(const Ensemble& e, EntanglementMeasure measure, const ReeOptions& opts = {});

/// Pure ensembles use the pure-state entropy, 2x2 mixed ensembles EoF,
/// anything else REE.
EntanglementMeasure default_measure(const Ensemble& e);

}  // namespace locc
