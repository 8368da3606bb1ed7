#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cayley {

struct CriterionResult {
  int id = 0;
  bool passed = false;
  /// Deterministic one-line summary (no timings).
  std::string detail;
};

struct AcceptanceOptions {
  unsigned threads = 1;
  /// Thread count of the second battery run used by the determinism criterion.
  unsigned alternate_threads = 8;
  /// Progress and timing output; may be null.
  std::ostream* log = nullptr;
};

/// Criteria 1-9 with the given thread count.
std::vector<CriterionResult> run_battery(unsigned threads, std::ostream* log = nullptr);

/// Criteria 1-9, then criterion 10: the battery is rerun with
/// `alternate_threads` and the two reports must match byte for byte.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// One "criterion N: PASS|FAIL  detail" line per result.
std::string format_report(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace cayley
