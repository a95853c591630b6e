#include "locc/ensemble.hpp"

#include <cmath>
#include <set>

#include "locc/error.hpp"

namespace locc {

const char* to_string(Party p) {
  switch (p) {
    case Party::A:
      return "A";
    case Party::B:
      return "B";
    case Party::Global:
      return "global";
  }
  return "?";
}

Party party_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Party::A;
  if (s == "B" || s == "b") return Party::B;
  if (s == "global") return Party::Global;
  throw InputError("party", "expected \"A\", \"B\" or \"global\", got \"" + s + "\"");
}

Ensemble::Ensemble(std::vector<EnsembleItem> items, Dims dims) : dims_(std::move(dims)) {
  if (items.empty()) throw InvalidStateError("ensemble has no states");
  if (dims_.empty() || dims_.size() > 4) throw DimensionError("ensembles support 1 to 4 subsystem factors");
  double total = 0.0;
  for (const auto& it : items) {
    if (!(it.prob >= 0.0) || !std::isfinite(it.prob)) {
      throw InvalidStateError("ensemble probability " + std::to_string(it.prob) + " is negative");
    }
    if (it.state.dims() != dims_) throw DimensionError("ensemble state dims differ from ensemble dims");
    total += it.prob;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw InvalidStateError("ensemble probabilities sum to " + std::to_string(total));
  }
  double kept = 0.0;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (it.label.empty()) it.label = std::to_string(i);
    if (!seen.insert(it.label).second) throw InvalidStateError("duplicate ensemble label \"" + it.label + "\"");
    if (it.prob < kDropProbability) continue;
    kept += it.prob;
    items_.push_back(std::move(it));
  }
  if (items_.empty()) throw InvalidStateError("every ensemble probability is negligible");
  for (auto& it : items_) it.prob /= kept;
}

Ensemble Ensemble::from_vectors(const std::vector<CVector>& vectors, const std::vector<double>& probs, Dims dims,
                                const std::vector<std::string>& labels) {
  if (vectors.size() != probs.size()) throw DimensionError("vector and probability counts differ");
  if (!labels.empty() && labels.size() != vectors.size()) throw DimensionError("label count differs");
  std::vector<EnsembleItem> items;
  items.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    items.push_back({probs[i], DensityMatrix::from_vector(vectors[i], dims), labels.empty() ? "" : labels[i], true});
  }
  return Ensemble(std::move(items), std::move(dims));
}

bool Ensemble::all_pure() const {
  for (const auto& it : items_) {
    if (!it.pure) return false;
  }
  return true;
}

std::vector<double> Ensemble::probabilities() const {
  std::vector<double> p;
  p.reserve(items_.size());
  for (const auto& it : items_) p.push_back(it.prob);
  return p;
}

std::vector<std::string> Ensemble::labels() const {
  std::vector<std::string> l;
  l.reserve(items_.size());
  for (const auto& it : items_) l.push_back(it.label);
  return l;
}

double shannon_entropy(std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw InvalidStateError("probability " + std::to_string(p) + " is negative");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw InvalidStateError("probabilities sum to " + std::to_string(total));
  }
  return entropy_bits(probs);
}

double binary_entropy(double p) {
  const double q[2] = {p, 1.0 - p};
  return entropy_bits(std::span<const double>(q, 2));
}

DensityMatrix average_state(const Ensemble& e) {
  CMatrix avg = CMatrix::Zero(e.dim(), e.dim());
  for (const auto& it : e.items()) avg += it.prob * it.state.mat();
  return DensityMatrix::unchecked(std::move(avg), e.dims());
}

namespace {

double average_entropy(const Ensemble& e) {
  double s = 0.0;
  for (const auto& it : e.items()) {
    if (!it.pure) s += it.prob * von_neumann_entropy(it.state);
  }
  return s;
}

int party_index(const Ensemble& e, Party party) {
  if (!e.is_bipartite()) throw DimensionError("ensemble is not bipartite");
  if (party == Party::Global) throw DimensionError("reduction requires party A or B");
  return party == Party::A ? 0 : 1;
}

}  // namespace

double holevo_chi(const Ensemble& e) {
  return std::max(0.0, von_neumann_entropy(average_state(e)) - average_entropy(e));
}

Ensemble reduced_ensemble(const Ensemble& e, Party party) {
  const int keep = party_index(e, party);
  std::vector<EnsembleItem> items;
  items.reserve(e.size());
  for (const auto& it : e.items()) {
    items.push_back({it.prob, partial_trace(it.state, {keep}), it.label, false});
  }
  return Ensemble(std::move(items), Dims{e.dims()[keep]});
}

double average_reduced_entropy(const Ensemble& e, Party party) {
  const int keep = party_index(e, party);
  double s = 0.0;
  for (const auto& it : e.items()) s += it.prob * von_neumann_entropy(partial_trace(it.state, {keep}));
  return s;
}

EnsembleStats stats(const Ensemble& e) {
  if (!e.is_bipartite()) throw DimensionError("stats: ensemble is not bipartite");
  DensityMatrix avg = average_state(e);
  const double s_avg = von_neumann_entropy(avg);
  const double s_a = von_neumann_entropy(partial_trace(avg, {0}));
  const double s_b = von_neumann_entropy(partial_trace(avg, {1}));
  const auto probs = e.probabilities();
  return EnsembleStats{
      .avg_state = std::move(avg),
      .chi = std::max(0.0, s_avg - average_entropy(e)),
      .s_a = s_a,
      .s_b = s_b,
      .sbar_a = average_reduced_entropy(e, Party::A),
      .sbar_b = average_reduced_entropy(e, Party::B),
      .h_source = entropy_bits(std::span<const double>(probs)),
  };
}

}  // namespace locc
