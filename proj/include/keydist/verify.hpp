#pragma once

#include "keydist/io.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kd::verify {

/// Wall-clock budget polled inside long loops.
class Deadline {
 public:
  explicit Deadline(double seconds);
  static Deadline unlimited();

  bool expired() const;
  /// Throws BudgetExceeded once the budget is spent.
  void poll() const;

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  std::string paper_anchor;
  bool passed = false;
  bool completed = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;
  /// Summary bound records {"check", "paper_anchor", "value", "bound"}.
  io::Json bounds = io::Json::array();
  std::vector<std::string> failures;
};

struct CheckSpec {
  int criterion;
  std::string name;
  std::string paper_anchor;
  double limit_seconds;
  std::function<void(CheckResult&, const Deadline&)> run;
};

/// The ten acceptance checks in criterion order.
const std::vector<CheckSpec>& registry();

struct Summary {
  std::vector<CheckResult> results;
  bool budget_exceeded = false;
  bool all_passed() const;
};

/// Runs every check whose name contains `filter` (all when empty). A check
/// passes when all its assertions hold and it finishes within its time limit.
/// Stops at the first BudgetExceeded and marks the summary partial.
Summary run(const std::string& filter, const Deadline& deadline);

io::Json to_json(const Summary& s);

}  // namespace kd::verify
