#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locc/ensemble.hpp"

namespace locc {

/// Phi+, Phi-, Psi+, Psi- on 2x2.
std::vector<CVector> bell_states();

/// (1/sqrt d) sum_k exp(2 pi i k n / d) |k>|k+m mod d>
CVector canonical_max_entangled(int d, int n, int m);

/// a1|00>+a2|11>, -a2|00>+a1|11>, a1|01>+a2|10>, -a2|01>+a1|10> with
/// a2 = sqrt(1 - a1^2).
std::vector<CVector> partial4(double a1);

/// Equal-prior ensemble of the four Bell states.
Ensemble bell4_ensemble(const std::vector<double>& priors = {});

/// d^2 canonical maximally entangled states, label "psi_<n>_<m>", index n*d+m.
Ensemble canonical_ensemble(int d, const std::vector<double>& priors = {});

Ensemble partial4_ensemble(double a1, const std::vector<double>& priors = {});

/// All 4^n1 tensor products of partial4 states, one a1 per pair, with
/// n1 = a1_list.size() <= 3. The pairs are built as A1B1 A2B2 ... and then
/// reordered to A1..An1 B1..Bn1, so the result has dims {2^n1, 2^n1}.
Ensemble tensor_power_ensemble(const std::vector<double>& a1_list);

/// d equiprobable states |i>|i>.
Ensemble copy_classical(int d);

/// d^2 equiprobable states |i>|j>.
Ensemble product_basis(int d);

/// Entrywise conjugates of the states of a pure ensemble, in ensemble order.
std::vector<DensityMatrix> conjugate_detectors(const Ensemble& e);

enum class Family { Bell4, CanonicalDxD, Partial4, TensorPower, CopyClassical, ProductBasis, Custom };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

struct EnsembleSpec {
  Family family = Family::Bell4;
  std::optional<int> d;
  std::vector<double> a1;      // one value for partial4, n1 values for tensor_power
  std::vector<double> priors;  // empty means uniform
  std::optional<Ensemble> custom;
};

/// Validates the parameters of the family and builds the ensemble.
Ensemble build_ensemble(const EnsembleSpec& spec);

}  // namespace locc
