#include <doctest.h>

#include "locc/random.hpp"

using namespace locc;

TEST_CASE("SplitMix64 finaliser") {
  // First output of SplitMix64 seeded with 0.
  CHECK(splitmix64_mix(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("counter-based streams are reproducible and independent") {
  CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  CounterRng e(7, 3);
  CHECK(e.next_u64() == splitmix64_mix((splitmix64_mix(7) ^ splitmix64_mix(3 + 0x632BE59BD9B4E019ULL)) +
                                       0x9E3779B97F4A7C15ULL));
}

TEST_CASE("uniform and integer draws stay in range") {
  CounterRng r(1);
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    mean += u / 10000;
    const int k = r.uniform_int(2, 4);
    CHECK((k >= 2 && k <= 4));
  }
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("random objects are valid") {
  CounterRng r(2);
  const CMatrix u = random_unitary(5, r);
  CHECK((u.adjoint() * u - CMatrix::Identity(5, 5)).norm() < 1e-12);
  const CMatrix rho = random_density(4, 2, r);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
  CHECK(DensityMatrix(rho, {2, 2}).dim() == 4);
  const auto m = random_instrument(3, 4, Party::A, r);
  CMatrix total = CMatrix::Zero(3, 3);
  for (const auto& k : m.kraus()) total += k.adjoint() * k;
  CHECK((total - CMatrix::Identity(3, 3)).norm() < 1e-12);
  const auto p = random_probabilities(5, r);
  double s = 0.0;
  for (double x : p) s += x;
  CHECK(s == doctest::Approx(1.0));
  CHECK(random_ensemble({2, 3}, 4, r).size() == 4);
}
