#pragma once

#include <stdexcept>
#include <string>

namespace vbdf2 {

/// Violated runtime precondition (step-size gates, missing inputs).
/// The CLI maps this family, together with std::invalid_argument and
/// std::domain_error, to exit code 2.
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Iterative solver breakdown (CG or Newton failed to reach tolerance).
/// The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace vbdf2
