#include <doctest.h>

#include "locc/bounds.hpp"
#include "locc/error.hpp"
#include "locc/random.hpp"
#include "locc/states.hpp"

using namespace locc;

namespace {

const InequalityCheck& find_check(const BoundReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  throw 0;
}

CMatrix bell_basis() {
  CMatrix u(4, 4);
  const auto b = bell_states();
  for (int k = 0; k < 4; ++k) u.col(k) = b[k];
  return u;
}

}  // namespace

TEST_CASE("four Bell states saturate the bound") {
  const auto r = verify_protocol_against_bounds(bell4_ensemble(), computational_two_round({2, 2}));
  CHECK(r.chi == doctest::Approx(2.0));
  CHECK(r.theorem_bound == doctest::Approx(1.0));
  CHECK(r.n == doctest::Approx(2.0));
  CHECK(r.e_bar == doctest::Approx(1.0));
  CHECK(r.n_minus_e == doctest::Approx(1.0));
  CHECK(*r.achieved_info == doctest::Approx(1.0));
  CHECK(r.saturated_theorem);
  CHECK(r.saturated_n_minus_e);
  CHECK_FALSE(r.saturated_chi);
  CHECK(r.all_pass());
}

TEST_CASE("partial4 bound is 2 - h(a1^2)") {
  const auto r = theorem_bound(partial4_ensemble(std::sqrt(0.9)));
  CHECK(r.theorem_bound == doctest::Approx(1.5310044064107188).epsilon(1e-13));
  CHECK(r.n_minus_e == doctest::Approx(1.5310044064107188).epsilon(1e-13));
  CHECK(r.operative_ceiling == doctest::Approx(1.5310044064107188).epsilon(1e-13));
}

TEST_CASE("product basis: no entanglement, full two bits") {
  const auto r = verify_protocol_against_bounds(product_basis(2), computational_two_round({2, 2}));
  CHECK(r.theorem_bound == doctest::Approx(2.0));
  CHECK(*r.achieved_info == doctest::Approx(2.0));
  CHECK(r.saturated_chi);
}

TEST_CASE("nonuniform tensor power instance") {
  const auto e = tensor_power_ensemble({0.9, 0.6});
  const auto r = verify_protocol_against_bounds(e, computational_two_round(e.dims()));
  CHECK(*r.achieved_info == doctest::Approx(2.3558453508606103).epsilon(1e-12));
  CHECK(r.n_minus_e == doctest::Approx(2.3558453508606103).epsilon(1e-12));
  CHECK(r.all_pass());
}

TEST_CASE("global measurements are reported but not held to LOCC bounds") {
  const auto r = verify_protocol_against_bounds(bell4_ensemble(), ProtocolTree(projective(bell_basis(), Party::Global)));
  CHECK(*r.achieved_info == doctest::Approx(2.0));
  const auto& c = find_check(r, "achieved<=theorem_bound");
  CHECK_FALSE(c.asserted);
  CHECK(c.lhs > c.rhs);
  CHECK(find_check(r, "achieved<=chi").asserted);
  CHECK(r.all_pass());
}

TEST_CASE("random local protocols respect every asserted bound") {
  CounterRng rng(41);
  for (int t = 0; t < 20; ++t) {
    const auto e = random_ensemble({2, 2}, 3, rng);
    ProtocolTree root(random_instrument(2, 2, Party::B, rng));
    root.add_child(0, ProtocolTree(random_instrument(2, 3, Party::A, rng)));
    root.add_child(1, ProtocolTree(random_instrument(2, 2, Party::B, rng)));
    const auto r = verify_protocol_against_bounds(e, root);
    for (const auto& c : r.checks) CHECK_MESSAGE(c.pass(), c.name << " " << c.lhs << " > " << c.rhs);
    CHECK(*r.g_a + *r.g_b <= std::min(r.sbar_a, r.sbar_b) + 1e-9);
  }
}

TEST_CASE("copy-classical records a non-positive g_B") {
  const auto r = verify_protocol_against_bounds(copy_classical(2), computational_two_round({2, 2}));
  CHECK(r.chi == doctest::Approx(1.0));
  CHECK(*r.g_b <= 1e-12);
  CHECK(*r.holevo_gain_b == doctest::Approx(-1.0));
}

TEST_CASE("delta E with conjugate detectors") {
  SUBCASE("uniform priors") {
    const auto s = bell4_ensemble();
    const auto setup = build_detector_setup(s, conjugate_detectors(s));
    CHECK(setup.joint.dims() == Dims{2, 2, 2, 2});
    CHECK(setup.joint_cut.dims() == Dims{4, 4});
    DeltaEOptions opts;
    opts.separable_reference = uniform_prior_joint(setup);
    const auto r = delta_e(setup, computational_two_round({2, 2}), opts);
    CHECK(r.h_s == doctest::Approx(2.0));
    CHECK(r.e_bar_det == doctest::Approx(1.0));
    CHECK(std::abs(r.e_joint) < 1e-12);
    CHECK(r.e_joint_method == "relative-entropy-to-reference");
    CHECK(std::abs(*r.e_joint_ppt) < 1e-6);
    CHECK(r.delta_e == doctest::Approx(1.0));
    CHECK(r.i_locc == doctest::Approx(1.0));
    CHECK(std::abs(r.inequality_slack) < 1e-9);
    CHECK(r.pass());
  }
  SUBCASE("skewed priors use the uniform mixture as reference") {
    const auto s = bell4_ensemble({0.4, 0.3, 0.2, 0.1});
    const auto setup = build_detector_setup(s, conjugate_detectors(s));
    DeltaEOptions opts;
    opts.separable_reference = uniform_prior_joint(setup);
    opts.run_optimizer = false;
    const auto r = delta_e(setup, computational_two_round({2, 2}), opts);
    CHECK(r.h_s == doctest::Approx(1.8464393446710155).epsilon(1e-13));
    CHECK(r.e_joint == doctest::Approx(2.0 - r.h_s).epsilon(1e-12));
    CHECK(r.i_locc == doctest::Approx(0.88129089923069262).epsilon(1e-12));
    CHECK(r.inequality_slack == doctest::Approx(0.11870910076930738).epsilon(1e-11));
    CHECK(r.pass());
  }
  SUBCASE("rejections") {
    const auto s = bell4_ensemble();
    const auto setup = build_detector_setup(s, conjugate_detectors(s));
    CHECK_THROWS_AS(delta_e(setup, ProtocolTree(projective(bell_basis(), Party::Global))), InputError);
    DeltaEOptions opts;
    opts.run_optimizer = false;
    opts.separable_reference = setup.joint_cut;  // wrong dims
    CHECK_THROWS_AS(delta_e(setup, computational_two_round({2, 2}), opts), DimensionError);
    // The prior-weighted joint state with Bell detectors is entangled across AC:BD.
    const auto bell_det = build_detector_setup(s, std::vector<DensityMatrix>(4, s.items()[0].state));
    opts.separable_reference = bell_det.joint;
    CHECK_THROWS_AS(delta_e(setup, computational_two_round({2, 2}), opts), InputError);
  }
}

TEST_CASE("detector measurement information bound") {
  const auto s = bell4_ensemble({0.4, 0.3, 0.2, 0.1});
  const auto setup = build_detector_setup(s, conjugate_detectors(s));
  CounterRng rng(42);
  for (int t = 0; t < 10; ++t) {
    const auto r = detector_measurement_info_bound(setup, random_instrument(4, 3, Party::Global, rng));
    CHECK(r.orthogonal_detectors);
    CHECK(r.holds);
    CHECK(r.equality);
  }
}

TEST_CASE("detector candidate search") {
  const auto s = bell4_ensemble();
  DeltaEOptions opts;
  const auto conj = conjugate_detectors(s);
  const auto results = search_detectors(s, {conj, std::vector<DensityMatrix>(4, conj[0])}, opts);
  REQUIRE(results.size() == 2);
  CHECK(results[0].target == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(results[0].meets_target);
  CHECK(results[1].e_joint > 0.5);
  CHECK_FALSE(results[1].meets_target);
}
