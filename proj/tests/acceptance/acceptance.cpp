// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "locc/bounds.hpp"
#include "locc/random.hpp"
#include "locc/states.hpp"
#include "locc/verify.hpp"

using namespace locc;

namespace {

constexpr std::uint64_t kSeed = 20030415;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome four_bell() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = bell4_ensemble();
  const auto r = verify_protocol_against_bounds(e, computational_two_round({2, 2}));
  const double gap = std::abs(*r.achieved_info - r.theorem_bound);
  const double secs = seconds_since(t0);
  const bool ok = std::abs(r.chi - 2.0) < 1e-9 && std::abs(r.theorem_bound - 1.0) < 1e-9 &&
                  std::abs(*r.achieved_info - 1.0) < 1e-9 && gap < 1e-9 && secs < 1.0 && r.all_pass();
  return {ok, fmt("chi=%.12g bound=%.12g achieved=%.12g gap=%.3g time=%.3fs", r.chi, r.theorem_bound,
                  *r.achieved_info, gap, secs)};
}

Outcome two_bell() {
  const auto bell = bell_states();
  const auto e = Ensemble::from_vectors({bell[0], bell[2]}, {0.5, 0.5}, {2, 2}, {"phi+", "psi+"});
  const auto bound = theorem_bound(e);
  const auto found = optimize_two_round_local(e, Party::A);
  const auto r = verify_protocol_against_bounds(e, found.protocol);
  const bool ok = std::abs(bound.n_minus_e - 1.0) < 1e-9 && std::abs(*r.achieved_info - 1.0) < 1e-9 &&
                  found.protocol.local_only() && r.all_pass();
  return {ok, fmt("n-E=%.12g achieved=%.12g", bound.n_minus_e, *r.achieved_info)};
}

Outcome saturating_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double a1 = i / 20.0;
    const auto e = partial4_ensemble(a1);
    const auto r = verify_protocol_against_bounds(e, computational_two_round({2, 2}));
    const double expected = 2.0 - binary_entropy(a1 * a1);
    worst = std::max({worst, std::abs(*r.achieved_info - expected), std::abs(r.n_minus_e - expected)});
  }
  const double a1 = 0.9, a1p = 0.6;
  const auto e = tensor_power_ensemble({a1, a1p});
  const auto r = verify_protocol_against_bounds(e, computational_two_round({4, 4}));
  const double expected = 4.0 - binary_entropy(a1 * a1) - binary_entropy(a1p * a1p);
  const double gap2 = std::max(std::abs(*r.achieved_info - expected), std::abs(r.n_minus_e - expected));
  const double secs = seconds_since(t0);
  const bool ok = worst < 1e-9 && gap2 < 1e-9 && e.size() == 16 && secs < 10.0;
  return {ok, fmt("max|gap| 2x2=%.3g 4x4=%.3g (achieved=%.12g) time=%.3fs", worst, gap2, *r.achieved_info, secs)};
}

Outcome suite(const char* name, std::size_t trials) {
  const auto r = run_suite(name, kSeed, trials);
  return {r.pass() && r.trials == trials,
          fmt("%zu/%zu hold, max excess %.3g", r.trials - r.failures, r.trials, r.max_excess)};
}

Outcome entanglement_measures() {
  double worst_pure = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    CounterRng rng(kSeed, 0x70000 + i);
    const CVector psi = random_pure_state(4, rng);
    const double eof = eof_2q(DensityMatrix::from_vector(psi, {2, 2}));
    worst_pure = std::max(worst_pure, std::abs(eof - pure_entanglement_entropy(psi, {2, 2})));
  }
  const auto bell = bell_states();
  double worst_ree = 0.0, slowest = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    CounterRng rng(kSeed, 0x80000 + i);
    auto lambda = random_probabilities(4, rng);
    if (i % 2 == 0) {
      // Push half the draws into the entangled region.
      const double top = 0.5 + 0.5 * rng.uniform();
      for (auto& l : lambda) l *= (1.0 - top);
      lambda[rng.uniform_int(0, 3)] += top;
    }
    CMatrix m = CMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) m += lambda[k] * bell[k] * bell[k].adjoint();
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = ree(DensityMatrix(m, {2, 2}));
    slowest = std::max(slowest, seconds_since(t0));
    worst_ree = std::max(worst_ree, std::abs(r.value - ree_bell_diagonal(lambda)));
  }
  const bool ok = worst_pure < 1e-8 && worst_ree < 1e-4 && slowest < 2.0;
  return {ok, fmt("pure max|EoF-S|=%.3g, Bell-diagonal max|REE-closed|=%.3g, slowest REE %.3fs", worst_pure,
                  worst_ree, slowest)};
}

Outcome delta_e_experiment() {
  const auto signal = bell4_ensemble();
  const auto setup = build_detector_setup(signal, conjugate_detectors(signal));
  DeltaEOptions opts;
  opts.separable_reference = uniform_prior_joint(setup);
  const auto r = delta_e(setup, computational_two_round({2, 2}), opts);
  const bool uniform_ok = std::abs(r.h_s - 2.0) < 1e-4 && std::abs(r.e_bar_det - 1.0) < 1e-4 &&
                          std::abs(r.e_joint) < 1e-4 && r.e_joint_ppt && std::abs(*r.e_joint_ppt) < 1e-4 &&
                          std::abs(r.delta_e - 1.0) < 1e-4 && std::abs(r.i_locc - 1.0) < 1e-4 &&
                          std::abs(r.inequality_slack) < 1e-4;

  const auto skew = bell4_ensemble({0.4, 0.3, 0.2, 0.1});
  const auto setup2 = build_detector_setup(skew, conjugate_detectors(skew));
  DeltaEOptions opts2;
  opts2.separable_reference = uniform_prior_joint(setup2);
  opts2.run_optimizer = false;
  const auto r2 = delta_e(setup2, computational_two_round({2, 2}), opts2);
  const bool skew_ok = r2.inequality_slack >= -1e-6 && std::abs(r2.e_joint - (2.0 - r2.h_s)) < 1e-9;
  return {uniform_ok && skew_ok,
          fmt("uniform: H_s=%.9g Edet=%.9g E=%.3g Eppt=%.3g dE=%.9g I=%.9g slack=%.3g; skewed: slack=%.6g",
              r.h_s, r.e_bar_det, r.e_joint, r.e_joint_ppt.value_or(NAN), r.delta_e, r.i_locc,
              r.inequality_slack, r2.inequality_slack)};
}

Outcome copy_classical_case() {
  const auto e = copy_classical(2);
  ProtocolTree alice(computational_basis(2, Party::A));
  const auto one = run_protocol(e, alice);
  const auto two = verify_protocol_against_bounds(e, computational_two_round({2, 2}));
  const double chi = holevo_chi(e);
  const bool ok = std::abs(chi - 1.0) < 1e-9 && std::abs(one.total_info - 1.0) < 1e-9 && two.g_b &&
                  *two.g_b <= 1e-12 && two.all_pass();
  return {ok, fmt("chi=%.12g alice-only=%.12g g_B=%.3g holevo_gain_B=%.6g", chi, one.total_info, *two.g_b,
                  *two.holevo_gain_b)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"four-bell saturation", four_bell},
      {"two-bell distinguishability", two_bell},
      {"saturating sweep", saturating_sweep},
      {"lemma1 suite", [] { return suite("lemma1", 500); }},
      {"chain-rule identity", [] { return suite("chainrule", 100); }},
      {"conditional entropy facts suite", [] { return suite("facts", 500); }},
      {"entanglement measures", entanglement_measures},
      {"delta-E experiment", delta_e_experiment},
      {"copy-classical", copy_classical_case},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%zu] %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(),
                seconds_since(t0));
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
