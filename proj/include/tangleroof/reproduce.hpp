#pragma once

#include <string>
#include <vector>

// Built-in verification suite: recomputes the known analytic values of the
// GHZ/W family and the built-in two-qubit example from scratch and checks
// them at fixed tolerances, together with seeded property checks. The same
// table backs the `reproduce` CLI subcommand and the acceptance test binary.

namespace tangleroof {

enum class CheckMode {
  abs_diff,  // |computed - expected| <= tolerance
  at_most,   // computed <= expected + tolerance
  at_least   // computed >= expected - tolerance
};

struct ReproRow {
  std::string name;
  CheckMode mode = CheckMode::abs_diff;
  double expected = 0;
  double computed = 0;
  double tolerance = 0;
  bool pass = false;
};

struct ReproSection {
  std::string title;
  std::vector<ReproRow> rows;
  bool pass = true;
};

struct ReproReport {
  std::vector<ReproSection> sections;
  bool pass = true;
};

ReproReport run_reproduction_suite();

// Fixed-width table, one row per check; deterministic byte-for-byte.
std::string format_report(const ReproReport& report);

}  // namespace tangleroof
