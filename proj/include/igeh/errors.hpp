#ifndef IGEH_ERRORS_HPP
#define IGEH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace igeh {

/// Numerical or domain failure inside a computation (maps to CLI exit 3).
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A quadrature/optimization node produced a non-finite value.
class NumericalDomainError : public DomainError {
public:
  NumericalDomainError(const std::string& what, std::vector<double> node)
      : DomainError(what), node_(std::move(node)) {}
  const std::vector<double>& node() const { return node_; }

private:
  std::vector<double> node_;
};

/// Input data violates a type invariant (e.g. sigma <= 0 in a model file).
class InvariantError : public DomainError {
public:
  explicit InvariantError(const std::string& what) : DomainError(what) {}
};

/// Not enough samples to run an analysis.
class InsufficientDataError : public DomainError {
public:
  explicit InsufficientDataError(const std::string& what) : DomainError(what) {}
};

} // namespace igeh

#endif
