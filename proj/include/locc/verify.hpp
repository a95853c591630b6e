#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace locc {

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  /// Largest lhs - rhs seen over all checked inequalities (negative means slack);
  /// for identity checks, the largest residual.
  double max_excess = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> failing_trials;  // first few, reproducible via (seed, suite, trial)
  std::uint64_t seed = 0;
  bool pass() const { return failures == 0; }
};

struct VerifyConfig {
  std::uint64_t seed = 20030415;
  std::size_t trials = 0;           // 0: each suite's default count
  std::vector<std::string> suites;  // empty: every suite
};

/// Names of the randomized property suites, in execution order.
std::vector<std::string> suite_names();

std::size_t default_trials(const std::string& suite);

/// Runs one suite. Trial t draws from CounterRng(seed, stream(suite) + t), so
/// the result is independent of thread count.
SuiteResult run_suite(const std::string& suite, std::uint64_t seed, std::size_t trials = 0);

std::vector<SuiteResult> run_verification(const VerifyConfig& config);

}  // namespace locc
