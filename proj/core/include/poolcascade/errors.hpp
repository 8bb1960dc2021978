#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace poolcascade {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad file contents, violated preconditions, bad parameters.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// An edge probability above 1/2 was found where the algorithm requires c_e >= d_e.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (oracle node cap, noisy hypothesis cap, ...) was exceeded.
class LimitExceededError : public Error {
 public:
  using Error::Error;
};

/// Should not happen; indicates a bug or numerical breakdown.
class InternalError : public Error {
 public:
  using Error::Error;
};

enum class InfeasibleReason {
  root_in_negative_pool,
  unreachable_pool,
  no_consistent_cascade,
  lp_infeasible,
};

std::string_view to_string(InfeasibleReason reason);

/// The observation admits no consistent reconstruction. This is a legitimate
/// outcome of an experiment, not a programming error.
class InfeasibleError : public Error {
 public:
  InfeasibleError(InfeasibleReason reason, const std::string& detail)
      : Error(std::string(to_string(reason)) + ": " + detail), reason_(reason), detail_(detail) {}

  InfeasibleReason reason() const noexcept { return reason_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  InfeasibleReason reason_;
  std::string detail_;
};

inline std::string_view to_string(InfeasibleReason reason) {
  switch (reason) {
    case InfeasibleReason::root_in_negative_pool:
      return "root_in_negative_pool";
    case InfeasibleReason::unreachable_pool:
      return "unreachable_pool";
    case InfeasibleReason::no_consistent_cascade:
      return "no_consistent_cascade";
    case InfeasibleReason::lp_infeasible:
      return "lp_infeasible";
  }
  return "unknown";
}

}  // namespace poolcascade
