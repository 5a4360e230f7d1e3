#pragma once

#include <string>
#include <vector>

namespace polarkit {

/// One named verification outcome. `anchor` names the mathematical statement
/// the check exercises; `skipped` marks checks whose hypothesis does not hold
/// for the input (they count as passing).
struct Check {
  std::string name;
  std::string anchor;
  bool pass = false;
  double residual = 0.0;
  double elapsed_ms = 0.0;
  bool skipped = false;
  std::string note;
};

inline Check make_check(std::string name, std::string anchor, double residual, double tol, std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.residual = residual;
  c.pass = residual <= tol;
  c.note = std::move(note);
  return c;
}

inline Check skipped_check(std::string name, std::string anchor, std::string note) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.pass = true;
  c.skipped = true;
  c.note = std::move(note);
  return c;
}

inline bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace polarkit
