#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locc/qmat.hpp"

namespace locc {

enum class Party { A, B, Global };

const char* to_string(Party p);
Party party_from_string(const std::string& s);

/// Probabilities below this are dropped (with renormalisation) when an
/// ensemble is built.
inline constexpr double kDropProbability = 1e-12;
inline constexpr double kProbabilitySumTol = 1e-10;

struct EnsembleItem {
  double prob;
  DensityMatrix state;
  std::string label;
  bool pure = false;
};

/// Probability-weighted list of states sharing subsystem dimensions. Labels
/// are unique; empty labels are replaced by the item's position.
class Ensemble {
 public:
  Ensemble(std::vector<EnsembleItem> items, Dims dims);

  /// Pure-state ensemble; `labels` may be empty.
  static Ensemble from_vectors(const std::vector<CVector>& vectors, const std::vector<double>& probs, Dims dims,
                               const std::vector<std::string>& labels = {});

  const std::vector<EnsembleItem>& items() const noexcept { return items_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool is_bipartite() const noexcept { return dims_.size() == 2; }
  bool all_pure() const;
  int dim() const { return total_dim(dims_); }

  std::vector<double> probabilities() const;
  std::vector<std::string> labels() const;

 private:
  std::vector<EnsembleItem> items_;
  Dims dims_;
};

struct EnsembleStats {
  DensityMatrix avg_state;
  double chi;
  double s_a, s_b;        // entropies of the reductions of the average state
  double sbar_a, sbar_b;  // average entropies of the reduced ensemble states
  double h_source;
};

double shannon_entropy(std::span<const double> probs);
inline double shannon_entropy(const std::vector<double>& probs) {
  return shannon_entropy(std::span<const double>(probs));
}

/// h(p) = -p log2 p - (1-p) log2 (1-p)
double binary_entropy(double p);

DensityMatrix average_state(const Ensemble& e);

/// S(avg) - sum_x p_x S(rho_x)
double holevo_chi(const Ensemble& e);

/// Partial trace of every state onto the given party (A or B).
Ensemble reduced_ensemble(const Ensemble& e, Party party);

/// Probability-weighted average entropy of the reductions on `party`.
double average_reduced_entropy(const Ensemble& e, Party party);

EnsembleStats stats(const Ensemble& e);

}  // namespace locc
