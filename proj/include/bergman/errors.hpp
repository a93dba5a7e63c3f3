#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bergman {

// Parameters outside the region where the quantity is defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A numerical routine could not reach the requested tolerance. The best estimate
// is kept so callers can still report it.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double achieved_error)
    : std::runtime_error(what), best_estimate_(best_estimate), achieved_error_(achieved_error) {}

  double best_estimate() const { return best_estimate_; }
  double achieved_error() const { return achieved_error_; }

 private:
  double best_estimate_;
  double achieved_error_;
};

}  // namespace bergman
