#include <doctest.h>

#include <cstdlib>

#include "locc/error.hpp"
#include "locc/verify.hpp"

using namespace locc;

TEST_CASE("every suite passes a short run") {
  for (const auto& name : suite_names()) {
    const std::size_t trials = name == "delta_e" ? 2 : 20;
    const auto r = run_suite(name, 99, trials);
    CHECK_MESSAGE(r.pass(), name << ": " << r.failures << " failures");
    CHECK(r.trials == trials);
  }
}

TEST_CASE("suite results do not depend on the thread count") {
  setenv("LOCC_INFO_THREADS", "1", 1);
  const auto serial = run_suite("facts", 5, 40);
  setenv("LOCC_INFO_THREADS", "4", 1);
  const auto parallel = run_suite("facts", 5, 40);
  unsetenv("LOCC_INFO_THREADS");
  CHECK(serial.max_excess == parallel.max_excess);
  CHECK(serial.failures == parallel.failures);
}

TEST_CASE("suite lookup") {
  CHECK(default_trials("lemma1") == 500);
  CHECK(default_trials("chainrule") == 100);
  CHECK_THROWS_AS(run_suite("nope", 1), InputError);
}
