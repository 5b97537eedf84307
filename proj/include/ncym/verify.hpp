#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncym/serialize.hpp"

namespace ncym {

enum class CheckStatus { Pass, Fail, Warn };
const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  std::string module;
  bool mandatory = true;  // false: convention-sensitive, may be downgraded to a warning
  CheckStatus status = CheckStatus::Fail;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  bool convention_checks_as_warnings = true;
  int samples = 100;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct VerifySummary {
  std::uint64_t seed = 0;
  std::string ledger_id;
  std::vector<CheckResult> checks;

  int count(CheckStatus s) const;
  /// All mandatory checks pass and no convention check failed outright.
  bool ok() const;
};

/// Runs the example and invariant suite; results are ordered and seeded, independent of scheduling.
VerifySummary run_verify(const VerifyOptions& options);

json to_json(const VerifySummary& s);

}  // namespace ncym
