#ifndef CPLOGIC_ERRORS_HPP
#define CPLOGIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cplogic {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid theory, story, context, diagram or query.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A computation would exceed a configured resource limit (node budget,
// atom/law capacity).
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what) {}
};

}  // namespace cplogic

#endif
