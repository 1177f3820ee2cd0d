#pragma once

#include <stdexcept>
#include <string>

namespace cellwork {

/// Malformed input: dimension or endpoint mismatch, bad counts, parse failures.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Well-formed input outside an operation's domain (non-commuting square,
/// arrow not in the cellular class, violated cocone condition).
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// A rejection sampler exhausted its retry cap.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cellwork
