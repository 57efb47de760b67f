#pragma once

#include <string>
#include <vector>

namespace octmc {

// One violated constraint. `field` is the config key (relative to the
// section being validated) so callers can point at the offending line.
struct FieldIssue {
  std::string field;
  std::string message;
};

using Issues = std::vector<FieldIssue>;

inline void append_issues(Issues& into, const Issues& from, const std::string& prefix) {
  for (const auto& issue : from) {
    into.push_back({prefix.empty() ? issue.field : prefix + "." + issue.field, issue.message});
  }
}

}  // namespace octmc
