#pragma once

// The acceptance suite: fourteen numbered criteria, each a list of checks of
// a measured quantity against a target. Shared by `splap check` and the
// acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

namespace splap::acceptance {

enum class Relation {
  Near,           // |measured - target| <= tolerance
  AtMost,         // measured <= target + tolerance
  AtLeast,        // measured >= target - tolerance
  StrictlyBelow,  // measured < target
};

struct Check {
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::Near;

  bool pass() const;
  /// How close the check is to failing; > 1 means failed.
  double severity() const;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  /// Set when the criterion could not be evaluated (exception text).
  std::string error;
  double seconds = 0.0;

  bool pass() const;
  /// The failing check, or the one with the largest severity.
  const Check* decisive() const;
};

struct Options {
  /// Multiplies every tolerance (0.01 tightens them 100x).
  double tol_scale = 1.0;
  std::uint64_t seed = 20240531;
};

struct CriterionInfo {
  int id;
  std::string title;
};

const std::vector<CriterionInfo>& criteria();

/// Runs the given criteria (all when empty), sharing solved fields between them.
std::vector<CriterionResult> run(const Options& opts, const std::vector<int>& ids = {});

/// "id=.. status=PASS|FAIL measured=.. target=.. tolerance=.. check=.. title=.."
std::string summary_line(const CriterionResult& r);
/// One line per check, indented.
std::string detail_lines(const CriterionResult& r);

}  // namespace splap::acceptance
