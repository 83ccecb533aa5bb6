// SPDX-License-Identifier: Apache-2.0
#ifndef ECASURVEY_ERROR_HPP
#define ECASURVEY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ecasurvey {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or violated precondition (bad file, bad argument).
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation produced nothing usable (e.g. every sample was dropped).
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

/// A placement policy admits no candidate. `gate()` names the gate that
/// eliminated the last candidates.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string gate, const std::string& what)
      : Error(what), gate_(std::move(gate)) {}
  const std::string& gate() const noexcept { return gate_; }

 private:
  std::string gate_;
};

/// Singular or otherwise unsolvable numerical system.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecasurvey

#endif  // ECASURVEY_ERROR_HPP
