#include "locc/states.hpp"

#include <cmath>
#include <numbers>

#include "locc/error.hpp"

namespace locc {

namespace {

CVector basis2(int i, int j, int d) {
  CVector v = CVector::Zero(d * d);
  v[i * d + j] = 1.0;
  return v;
}

std::vector<double> resolve_priors(const std::vector<double>& priors, std::size_t n) {
  if (priors.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (priors.size() != n) {
    throw InputError("priors", "expected " + std::to_string(n) + " priors, got " + std::to_string(priors.size()));
  }
  return priors;
}

}  // namespace

std::vector<CVector> bell_states() {
  const double s = 1.0 / std::numbers::sqrt2;
  return {s * (basis2(0, 0, 2) + basis2(1, 1, 2)), s * (basis2(0, 0, 2) - basis2(1, 1, 2)),
          s * (basis2(0, 1, 2) + basis2(1, 0, 2)), s * (basis2(0, 1, 2) - basis2(1, 0, 2))};
}

CVector canonical_max_entangled(int d, int n, int m) {
  if (d < 2) throw InputError("d", "dimension must be at least 2");
  if (n < 0 || n >= d || m < 0 || m >= d) throw InputError("n,m", "indices must lie in [0, d)");
  CVector psi = CVector::Zero(d * d);
  for (int k = 0; k < d; ++k) {
    psi[k * d + (k + m) % d] = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2 * std::numbers::pi * k * n / d);
  }
  return psi;
}

std::vector<CVector> partial4(double a1) {
  if (!(a1 >= 0.0 && a1 <= 1.0)) throw InputError("a1", "must lie in [0, 1], got " + std::to_string(a1));
  const double a2 = std::sqrt(std::max(0.0, 1.0 - a1 * a1));
  return {a1 * basis2(0, 0, 2) + a2 * basis2(1, 1, 2), -a2 * basis2(0, 0, 2) + a1 * basis2(1, 1, 2),
          a1 * basis2(0, 1, 2) + a2 * basis2(1, 0, 2), -a2 * basis2(0, 1, 2) + a1 * basis2(1, 0, 2)};
}

Ensemble bell4_ensemble(const std::vector<double>& priors) {
  return Ensemble::from_vectors(bell_states(), resolve_priors(priors, 4), {2, 2},
                                {"phi+", "phi-", "psi+", "psi-"});
}

Ensemble canonical_ensemble(int d, const std::vector<double>& priors) {
  std::vector<CVector> states;
  std::vector<std::string> labels;
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      states.push_back(canonical_max_entangled(d, n, m));
      labels.push_back("psi_" + std::to_string(n) + "_" + std::to_string(m));
    }
  }
  return Ensemble::from_vectors(states, resolve_priors(priors, states.size()), {d, d}, labels);
}

Ensemble partial4_ensemble(double a1, const std::vector<double>& priors) {
  return Ensemble::from_vectors(partial4(a1), resolve_priors(priors, 4), {2, 2}, {"s0", "s1", "s2", "s3"});
}

Ensemble tensor_power_ensemble(const std::vector<double>& a1_list) {
  const int n1 = static_cast<int>(a1_list.size());
  if (n1 < 1 || n1 > 3) throw InputError("a1", "tensor_power needs 1 to 3 values, got " + std::to_string(n1));
  std::vector<std::vector<CVector>> factors;
  for (double a1 : a1_list) factors.push_back(partial4(a1));

  // Pairwise order A1 B1 A2 B2 ... ; subsystem 2k is A_k, 2k+1 is B_k.
  const Dims pair_dims(2 * n1, 2);
  std::vector<int> perm;
  for (int k = 0; k < n1; ++k) perm.push_back(2 * k);
  for (int k = 0; k < n1; ++k) perm.push_back(2 * k + 1);

  std::vector<CVector> states;
  std::vector<std::string> labels;
  const int count = 1 << (2 * n1);
  for (int idx = 0; idx < count; ++idx) {
    CVector psi = CVector::Ones(1);
    std::string label;
    for (int k = 0; k < n1; ++k) {
      const int which = (idx >> (2 * (n1 - 1 - k))) & 3;
      psi = tensor(psi, factors[k][which]);
      label += (k ? "_s" : "s") + std::to_string(which);
    }
    states.push_back(permute_subsystems(psi, pair_dims, perm));
    labels.push_back(label);
  }
  const int side = 1 << n1;
  return Ensemble::from_vectors(states, std::vector<double>(count, 1.0 / count), {side, side}, labels);
}

Ensemble copy_classical(int d) {
  if (d < 2) throw InputError("d", "copy_classical needs d >= 2");
  std::vector<CVector> states;
  std::vector<std::string> labels;
  for (int i = 0; i < d; ++i) {
    states.push_back(basis2(i, i, d));
    labels.push_back(std::to_string(i) + std::to_string(i));
  }
  return Ensemble::from_vectors(states, std::vector<double>(d, 1.0 / d), {d, d}, labels);
}

Ensemble product_basis(int d) {
  if (d < 1) throw InputError("d", "product_basis needs d >= 1");
  std::vector<CVector> states;
  std::vector<std::string> labels;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      states.push_back(basis2(i, j, d));
      labels.push_back(std::to_string(i) + "," + std::to_string(j));
    }
  }
  return Ensemble::from_vectors(states, std::vector<double>(states.size(), 1.0 / states.size()), {d, d}, labels);
}

std::vector<DensityMatrix> conjugate_detectors(const Ensemble& e) {
  std::vector<DensityMatrix> out;
  for (const auto& it : e.items()) {
    if (!it.pure && std::abs(it.state.purity() - 1.0) > 1e-9) {
      throw InvalidStateError("conjugate_detectors needs a pure ensemble; state \"" + it.label + "\" is mixed");
    }
    out.push_back(conjugate(it.state));
  }
  return out;
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Bell4:
      return "bell4";
    case Family::CanonicalDxD:
      return "canonical_dxd";
    case Family::Partial4:
      return "partial4";
    case Family::TensorPower:
      return "tensor_power";
    case Family::CopyClassical:
      return "copy_classical";
    case Family::ProductBasis:
      return "product_basis";
    case Family::Custom:
      return "custom";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::Bell4, Family::CanonicalDxD, Family::Partial4, Family::TensorPower, Family::CopyClassical,
                   Family::ProductBasis, Family::Custom}) {
    if (s == to_string(f)) return f;
  }
  throw InputError("family", "unknown family \"" + s + "\"");
}

Ensemble build_ensemble(const EnsembleSpec& spec) {
  auto need_d = [&]() {
    if (!spec.d) throw InputError("d", std::string("family ") + to_string(spec.family) + " requires d");
    return *spec.d;
  };
  auto need_a1 = [&](std::size_t lo, std::size_t hi) {
    if (spec.a1.size() < lo || spec.a1.size() > hi) {
      throw InputError("a1", std::string("family ") + to_string(spec.family) + " needs " + std::to_string(lo) +
                                 (lo == hi ? "" : " to " + std::to_string(hi)) + " a1 value(s)");
    }
  };
  switch (spec.family) {
    case Family::Bell4:
      return bell4_ensemble(spec.priors);
    case Family::CanonicalDxD:
      return canonical_ensemble(need_d(), spec.priors);
    case Family::Partial4:
      need_a1(1, 1);
      return partial4_ensemble(spec.a1[0], spec.priors);
    case Family::TensorPower:
      need_a1(1, 3);
      if (!spec.priors.empty()) throw InputError("priors", "tensor_power uses equal priors");
      return tensor_power_ensemble(spec.a1);
    case Family::CopyClassical:
      return copy_classical(need_d());
    case Family::ProductBasis:
      return product_basis(need_d());
    case Family::Custom:
      if (!spec.custom) throw InputError("params", "custom family needs an embedded ensemble");
      return *spec.custom;
  }
  throw InputError("family", "unhandled family");
}

}  // namespace locc
