#include <doctest.h>

#include <chrono>
#include <cmath>

#include "locc/entangle.hpp"
#include "locc/error.hpp"
#include "locc/random.hpp"
#include "locc/states.hpp"
#include "oracle.hpp"

using namespace locc;

namespace {

DensityMatrix werner(double p) {
  const CVector psi = bell_states()[3];
  return DensityMatrix(p * psi * psi.adjoint() + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0, {2, 2});
}

DensityMatrix isotropic(int d, double f) {
  const CVector phi = canonical_max_entangled(d, 0, 0);
  const CMatrix proj = phi * phi.adjoint();
  const int n = d * d;
  return DensityMatrix(f * proj + (1.0 - f) * (CMatrix::Identity(n, n) - proj) / (n - 1.0), {d, d});
}

}  // namespace

TEST_CASE("Werner state measures") {
  const auto rho = werner(0.8);
  CHECK(concurrence_2q(rho) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(eof_2q(rho) == doctest::Approx(0.59185740717067712).epsilon(1e-12));
  CHECK(negativity(rho) == doctest::Approx(0.35).epsilon(1e-12));
  const auto r = ree(rho);
  CHECK(r.method == "ree-exact");
  CHECK(r.value == doctest::Approx(0.39015969528359952).epsilon(1e-8));
  CHECK(r.convergence->converged);
  CHECK(eof_2q(werner(0.3)) == 0.0);
  CHECK(ree(werner(0.3)).value < 1e-8);
}

TEST_CASE("EoF closed forms") {
  CHECK(eof_from_concurrence(0.5) == doctest::Approx(0.35457890266526988).epsilon(1e-13));
  const double t = 0.3;
  const CVector psi = oracle::ket({std::cos(t), 0, 0, std::sin(t)});
  CHECK(eof_2q(DensityMatrix::from_vector(psi, {2, 2})) == doctest::Approx(0.42750177105602169).epsilon(1e-12));
  CHECK(pure_entanglement_entropy(psi, {2, 2}) == doctest::Approx(0.42750177105602169).epsilon(1e-12));
}

TEST_CASE("EoF equals the reduced entropy on pure states") {
  CounterRng rng(31);
  for (int t = 0; t < 50; ++t) {
    const CVector psi = random_pure_state(4, rng);
    CHECK(std::abs(eof_2q(DensityMatrix::from_vector(psi, {2, 2})) - pure_entanglement_entropy(psi, {2, 2})) < 1e-8);
  }
  CHECK_THROWS_AS(concurrence_2q(DensityMatrix(CMatrix::Identity(6, 6) / 6.0, {2, 3})), DimensionError);
}

TEST_CASE("REE against the Bell-diagonal closed form") {
  const auto bell = bell_states();
  CounterRng rng(32);
  for (int t = 0; t < 20; ++t) {
    auto lambda = random_probabilities(4, rng);
    if (t % 2 == 0) {
      for (auto& l : lambda) l *= 0.3;
      lambda[t % 4] += 0.7;
    }
    CMatrix m = CMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) m += lambda[k] * bell[k] * bell[k].adjoint();
    CHECK(std::abs(ree(DensityMatrix(m, {2, 2})).value - ree_bell_diagonal(lambda)) < 1e-6);
  }
  const std::vector<double> top{0.75, 0.25, 0.0, 0.0};
  CHECK(ree_bell_diagonal(top) == doctest::Approx(0.18872187554086714).epsilon(1e-13));
  const std::vector<double> bad{0.5, 0.6, 0.0, -0.1};
  CHECK_THROWS_AS(ree_bell_diagonal(bad), InvalidStateError);
}

TEST_CASE("REE of random mixed two-qubit states, frozen from a separable-decomposition oracle") {
  // Oracle: direct minimisation over mixtures of 16 product pure states.
  const double expected[] = {0.11155077, 0.41254111, 0.20763143};
  for (int i = 0; i < 3; ++i) {
    CounterRng rng(2, static_cast<std::uint64_t>(i));
    const DensityMatrix rho(random_density(4, 2, rng), {2, 2});
    CHECK(std::abs(ree(rho).value - expected[i]) < 1e-7);
  }
}

TEST_CASE("REE of pure states equals the entanglement entropy") {
  const CVector psi = [] {
    CVector v = CVector::Zero(6);
    v[0] = 0.6;  // |0>|0>
    v[4] = 0.8;  // |1>|1>
    return v;
  }();
  const auto r = ree(DensityMatrix::from_vector(psi, {2, 3}));
  CHECK(r.method == "ree-exact");
  CHECK(r.value == doctest::Approx(0.94268318925549225).epsilon(1e-8));

  CounterRng rng(33);
  const CVector g = random_pure_state(9, rng);
  CHECK(std::abs(ree(DensityMatrix::from_vector(g, {3, 3})).value - pure_entanglement_entropy(g, {3, 3})) < 1e-7);
}

TEST_CASE("isotropic state REE, PPT relaxation") {
  const auto r = ree(isotropic(3, 0.7));
  CHECK(r.method == "ree-ppt-relaxation");
  CHECK(r.value == doctest::Approx(0.40367160149046356).epsilon(1e-7));
  CHECK(ree(isotropic(3, 0.3)).value < 1e-8);
}

TEST_CASE("REE cut handling and limits") {
  // Bell pair on subsystems 0 and 2 of a three-qubit state.
  const CVector bell = bell_states()[0];
  const CVector three = permute_subsystems(tensor(bell, oracle::ket({1, 0})), {2, 2, 2}, std::vector<int>{0, 2, 1});
  const auto rho = DensityMatrix::from_vector(three, {2, 2, 2});
  CHECK(ree(rho, {{0}}).value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(ree(rho, {{1}}).value < 1e-7);
  CHECK(negativity(rho, {{0, 1}}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ree(DensityMatrix(CMatrix::Identity(42, 42) / 42.0, {6, 7})), DimensionError);
  CHECK_THROWS_AS(group_cut(rho, {{0, 1, 2}}), DimensionError);
  CHECK_THROWS_AS(group_cut(rho, {{3}}), DimensionError);
}

TEST_CASE("REE is fast on two qubits") {
  CounterRng rng(34);
  const DensityMatrix rho(random_density(4, 3, rng), {2, 2});
  const auto t0 = std::chrono::steady_clock::now();
  ree(rho);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 2.0);
}

TEST_CASE("measure dispatch") {
  const auto e = bell4_ensemble();
  CHECK(default_measure(e) == EntanglementMeasure::PureEntropy);
  CHECK(average_entanglement(e, EntanglementMeasure::PureEntropy) == doctest::Approx(1.0));
  CHECK(average_entanglement(e, EntanglementMeasure::Negativity) == doctest::Approx(0.5));
  CHECK_THROWS_AS(entanglement(werner(0.8), EntanglementMeasure::PureEntropy), InvalidStateError);
  CHECK(measure_from_string("eof_2q") == EntanglementMeasure::EoF2q);
  CHECK_THROWS_AS(measure_from_string("squashed"), InputError);
  const Ensemble mixed({{1.0, werner(0.8), "w", false}}, {2, 2});
  CHECK(default_measure(mixed) == EntanglementMeasure::EoF2q);
}
