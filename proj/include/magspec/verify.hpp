#pragma once

#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

namespace magspec {

struct Check {
  std::string label;
  double measured = 0.0;
  std::string target;       // human-readable bound, e.g. "< 1e-8"
  bool passed = false;
  // The target lies beyond what the model can reach; the failure is reported but does not
  // fail the suite.
  bool unattainable = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;        // exception text when the run itself failed
  double seconds = 0.0;

  bool passed() const;
  // Failed for a reason other than an unattainable target.
  bool blocking() const;
};

struct VerifyReport {
  std::string suite;
  std::vector<CriterionResult> criteria;
  bool ok() const;
  nlohmann::json to_json() const;
};

// Criteria ids of a suite: kernel, boundary, toeplitz, cluster or full. ConfigError otherwise.
std::vector<int> suite_criteria(const std::string& suite);

// Runs the suite in id order; `on_result` sees each criterion as it finishes.
VerifyReport verify(const std::string& suite, const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  8  <title>: <label> <measured> (<target>); ..." on one line.
std::string format_line(const CriterionResult& r);

}  // namespace magspec
