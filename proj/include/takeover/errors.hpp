#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace takeover {

/// Input rejected.  `issues` holds one message per violation, each prefixed
/// with a document path ("costs.g.S[3]: ...") so a user can fix all of them
/// in one pass.
class SpecError : public std::runtime_error {
  public:
    explicit SpecError(std::vector<std::string> issues_)
        : std::runtime_error(join(issues_)), issues(std::move(issues_)) {}
    explicit SpecError(const std::string& one) : SpecError(std::vector<std::string>{one}) {}

    std::vector<std::string> issues;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& m : v) {
            if (!s.empty()) s += "\n";
            s += m;
        }
        return s;
    }
};

/// Numerical failure inside a solver (LP did not converge, non-finite input).
class SolveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace takeover
