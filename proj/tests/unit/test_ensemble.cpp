#include <doctest.h>

#include "locc/error.hpp"
#include "locc/random.hpp"
#include "locc/states.hpp"
#include "oracle.hpp"

using namespace locc;

namespace {

DensityMatrix diag2(double p) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return DensityMatrix(m);
}

}  // namespace

TEST_CASE("Shannon and binary entropy") {
  CHECK(shannon_entropy(std::vector<double>{0.4, 0.3, 0.2, 0.1}) ==
        doctest::Approx(1.8464393446710155).epsilon(1e-14));
  CHECK(binary_entropy(0.9) == doctest::Approx(0.46899559358928115).epsilon(1e-14));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK_THROWS_AS(shannon_entropy(std::vector<double>{0.5, 0.6}), InvalidStateError);
  CHECK_THROWS_AS(shannon_entropy(std::vector<double>{1.2, -0.2}), InvalidStateError);
}

TEST_CASE("ensemble construction rules") {
  SUBCASE("negligible probabilities are dropped and the rest renormalised") {
    const Ensemble e({{1.0 - 1e-13, diag2(0.5), "a", false}, {1e-13, diag2(0.1), "b", false}}, {2});
    REQUIRE(e.size() == 1);
    CHECK(e.items()[0].prob == 1.0);
  }
  SUBCASE("empty labels become positions") {
    const Ensemble e({{0.5, diag2(0.5), "", false}, {0.5, diag2(0.1), "", false}}, {2});
    CHECK(e.labels() == std::vector<std::string>{"0", "1"});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(Ensemble({{0.5, diag2(0.5), "x", false}, {0.5, diag2(0.1), "x", false}}, {2}),
                    InvalidStateError);
    CHECK_THROWS_AS(Ensemble({{0.5, diag2(0.5), "", false}}, {2}), InvalidStateError);
    CHECK_THROWS_AS(Ensemble({{1.0, diag2(0.5), "", false}}, {3}), DimensionError);
    CHECK_THROWS_AS(Ensemble({{1.2, diag2(0.5), "", false}, {-0.2, diag2(0.5), "", false}}, {2}),
                    InvalidStateError);
    CHECK_THROWS_AS(Ensemble({}, {2}), InvalidStateError);
  }
}

TEST_CASE("four Bell states carry two bits of Holevo information") {
  const auto st = stats(bell4_ensemble());
  CHECK(st.chi == doctest::Approx(2.0));
  CHECK(st.s_a == doctest::Approx(1.0));
  CHECK(st.s_b == doctest::Approx(1.0));
  CHECK(st.sbar_a == doctest::Approx(1.0));
  CHECK(st.sbar_b == doctest::Approx(1.0));
  CHECK(st.h_source == doctest::Approx(2.0));
  CHECK(holevo_chi(reduced_ensemble(bell4_ensemble(), Party::A)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Holevo quantity of commuting states is the classical mutual information") {
  CounterRng rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto flat = random_probabilities(6, rng);
    Eigen::MatrixXd joint(2, 3);
    std::vector<EnsembleItem> items;
    for (int x = 0; x < 2; ++x) {
      for (int k = 0; k < 3; ++k) joint(x, k) = flat[x * 3 + k];
      CMatrix m = CMatrix::Zero(3, 3);
      for (int k = 0; k < 3; ++k) m(k, k) = joint(x, k) / joint.row(x).sum();
      items.push_back({joint.row(x).sum(), DensityMatrix(m), "", false});
    }
    CHECK(holevo_chi(Ensemble(items, {3})) == doctest::Approx(oracle::mutual_information(joint)).epsilon(1e-12));
  }
}

TEST_CASE("Holevo bounds on random ensembles") {
  CounterRng rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto e = random_ensemble({2, 3}, 3, rng);
    const double chi = holevo_chi(e);
    CHECK(chi >= -1e-12);
    CHECK(chi <= von_neumann_entropy(average_state(e)) + 1e-12);
    CHECK(chi <= shannon_entropy(e.probabilities()) + 1e-9);
    const auto ra = reduced_ensemble(e, Party::A);
    CHECK(ra.dims() == Dims{2});
    double sbar = 0.0;
    for (const auto& it : ra.items()) sbar += it.prob * oracle::entropy(it.state.mat());
    CHECK(average_reduced_entropy(e, Party::A) == doctest::Approx(sbar).epsilon(1e-9));
  }
}

TEST_CASE("party names") {
  CHECK(std::string(to_string(Party::Global)) == "global");
  CHECK(party_from_string("B") == Party::B);
  CHECK_THROWS_AS(party_from_string("C"), InputError);
}
