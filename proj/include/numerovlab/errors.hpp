#pragma once

#include <stdexcept>
#include <string>

namespace nlab {

/// Failure of a numerical process (singular pivot, non-convergence,
/// overflow) as opposed to a violated precondition, which is reported
/// via std::invalid_argument.  The CLI maps the two to distinct exit
/// codes, so every throw site has to pick the right one.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nlab
