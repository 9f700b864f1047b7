#pragma once

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ruelle {

// Bad user input: malformed signature, inconsistent multiplier data, bad flags.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where a formula is defined (e.g. on a branch cut).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonHyperbolic : public InputError {
 public:
  using InputError::InputError;
};

// A factor raised to a negative power vanishes at the requested point.
class PoleAt : public std::runtime_error {
 public:
  PoleAt(std::complex<double> where, const std::string& what)
      : std::runtime_error(describe(where, what)), where_(where) {}

  std::complex<double> where() const { return where_; }

 private:
  static std::string describe(std::complex<double> z, const std::string& what) {
    std::ostringstream os;
    os << "pole at s=(" << z.real() << "," << z.imag() << "): " << what;
    return os.str();
  }
  std::complex<double> where_;
};

// log of zero, e.g. Barnes G at a nonpositive integer.
class ZeroAt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ruelle
