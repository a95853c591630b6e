#include <doctest.h>

#include "locc/error.hpp"
#include "locc/qmat.hpp"
#include "locc/random.hpp"
#include "oracle.hpp"

using namespace locc;

TEST_CASE("tensor matches the brute-force Kronecker product") {
  CounterRng rng(1);
  const CMatrix a = random_ginibre(2, 2, rng), b = random_ginibre(3, 3, rng);
  CHECK((tensor(a, b) - oracle::kron(a, b)).norm() < 1e-14);
  const DensityMatrix ra(random_density(2, 2, rng), {2}), rb(random_density(3, 1, rng), {3});
  CHECK(tensor(ra, rb).dims() == Dims{2, 3});
}

TEST_CASE("partial trace agrees with index loops") {
  CounterRng rng(2);
  const Dims dims{2, 3, 2};
  const CMatrix m = random_ginibre(12, 12, rng);
  for (const std::vector<int>& keep : {std::vector<int>{0}, {1}, {2}, {0, 2}, {1, 2}}) {
    CHECK((partial_trace(m, dims, keep) - oracle::partial_trace(m, dims, keep)).norm() < 1e-12);
  }
  // Kept subsystems stay in their original order.
  const std::vector<int> reversed{2, 0};
  CHECK((partial_trace(m, dims, reversed) - oracle::partial_trace(m, dims, {0, 2})).norm() < 1e-12);
}

TEST_CASE("permute_subsystems moves input subsystem perm[k] to slot k") {
  CounterRng rng(3);
  const CVector a = random_pure_state(2, rng), b = random_pure_state(3, rng), c = random_pure_state(2, rng);
  const CVector abc = tensor(tensor(a, b), c);
  const std::vector<int> perm{2, 0, 1};
  const CVector expected = tensor(tensor(c, a), b);
  CHECK((permute_subsystems(abc, {2, 3, 2}, perm) - expected).norm() < 1e-14);

  const CMatrix rho = abc * abc.adjoint();
  CHECK((permute_subsystems(rho, {2, 3, 2}, perm) - expected * expected.adjoint()).norm() < 1e-14);
}

TEST_CASE("partial transpose of a Bell state has a negative eigenvalue") {
  const CVector phi = oracle::ket({M_SQRT1_2, 0, 0, M_SQRT1_2});
  const int second = 1;
  const CMatrix pt = partial_transpose(phi * phi.adjoint(), {2, 2}, std::span<const int>(&second, 1));
  const auto s = hermitian_eig(pt);
  CHECK(s.eigenvalues[0] == doctest::Approx(0.5));
  CHECK(s.eigenvalues[3] == doctest::Approx(-0.5));
  CHECK(trace_norm_hermitian(pt) == doctest::Approx(2.0));
}

TEST_CASE("hermitian_eig sorts descending and reconstructs") {
  CounterRng rng(4);
  const CMatrix h = hermitian_part(random_ginibre(5, 5, rng));
  const auto s = hermitian_eig(h);
  for (int i = 0; i + 1 < 5; ++i) CHECK(s.eigenvalues[i] >= s.eigenvalues[i + 1]);
  CHECK((s.reconstruct() - h).norm() < 1e-12);
  CHECK_THROWS_AS(hermitian_eig(random_ginibre(3, 3, rng)), InvalidStateError);
}

TEST_CASE("entropy values") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.25;
  m(1, 1) = 0.75;
  CHECK(von_neumann_entropy(DensityMatrix(m)) == doctest::Approx(0.81127812445913286).epsilon(1e-14));
  CHECK(von_neumann_entropy(DensityMatrix(CMatrix::Identity(4, 4) / 4.0, {2, 2})) == doctest::Approx(2.0));

  CounterRng rng(5);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho(random_density(4, rng.uniform_int(1, 4), rng), {2, 2});
    CHECK(std::abs(von_neumann_entropy(rho) - oracle::entropy(rho.mat())) < 1e-9);
  }
}

TEST_CASE("spectrum cleaning clips small negatives and rejects large ones") {
  RVector ev(3);
  ev << 0.6, 0.4 + 5e-10, -5e-10;
  const RVector c = clean_state_spectrum(ev);
  CHECK(c[2] == 0.0);
  ev << 0.6, 0.4 + 1e-6, -1e-6;
  CHECK_THROWS_AS(clean_state_spectrum(ev), InvalidStateError);
}

TEST_CASE("DensityMatrix validation") {
  CHECK_THROWS_AS(DensityMatrix(CMatrix::Identity(2, 2)), InvalidStateError);  // trace 2
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, InvalidStateError);
  CHECK_THROWS_AS(DensityMatrix(CMatrix::Identity(4, 4) / 4.0, {2, 3}), DimensionError);
  CHECK_THROWS_AS(DensityMatrix::from_vector(oracle::ket({1, 1}), {2}), InvalidStateError);
  CMatrix skew = CMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(DensityMatrix{skew}, InvalidStateError);
}

TEST_CASE("relative entropy") {
  CMatrix a = CMatrix::Identity(2, 2) / 2.0;
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = 0.25;
  b(1, 1) = 0.75;
  const DensityMatrix rho(a), sigma(b);
  // 0.5 log2(0.5 / 0.25) + 0.5 log2(0.5 / 0.75)
  CHECK(relative_entropy(rho, sigma) == doctest::Approx(0.20751874963942190).epsilon(1e-13));
  CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0));
  const DensityMatrix pure = DensityMatrix::from_vector(oracle::ket({1, 0}), {2});
  CHECK(relative_entropy(rho, pure) == kInfiniteRelativeEntropy);
  CHECK(std::isfinite(relative_entropy(pure, rho)));
}

TEST_CASE("conjugate preserves the spectrum") {
  CounterRng rng(6);
  const DensityMatrix rho(random_density(3, 2, rng), {3});
  CHECK(von_neumann_entropy(conjugate(rho)) == doctest::Approx(von_neumann_entropy(rho)));
  CHECK((conjugate(rho).mat() - rho.mat().conjugate()).norm() == 0.0);
}
