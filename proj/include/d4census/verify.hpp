#pragma once

// Named verification suites shared by the command line and the tests.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d4census/box.hpp"

namespace d4 {

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
  bool hard = true;  // soft checks are reported but never fail a suite
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
};

struct SuiteOptions {
  std::uint64_t pmax = 1'000'000;
  double tol = 1e-8;
  std::optional<std::uint64_t> bound;  // suite-specific default when empty
  std::optional<BoundBox> box;         // census-consistency only
  int workers = 1;
};

const std::vector<std::string_view>& suite_names();

// Throws PreconditionError for an unknown suite.
SuiteResult run_suite(std::string_view name, const SuiteOptions& options);

}  // namespace d4
