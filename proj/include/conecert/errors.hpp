#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conecert {

/// q(t) evaluated past the end of its validity range.
class DomainError : public std::domain_error {
 public:
  DomainError(double t, double end);
  double t() const noexcept { return t_; }
  double end() const noexcept { return end_; }

 private:
  double t_;
  double end_;
};

/// Structurally invalid isoparametric family parameters.
class InvalidFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The dimension-reduction inequality was asked to bound a case it does not cover.
class ChainHypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The profile integrator produced a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_valid_t)
      : std::runtime_error(what), last_valid_t_(last_valid_t) {}
  double last_valid_t() const noexcept { return last_valid_t_; }

 private:
  double last_valid_t_;
};

/// Bad factor list for a minimal product.
class ProductError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Factor-list or spectrum text that does not parse. offset is a byte offset into the input.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what + " (at byte " + std::to_string(offset) + ")"),
        message_(what),
        offset_(offset) {}
  const std::string& message() const noexcept { return message_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string message_;
  std::size_t offset_;
};

}  // namespace conecert
