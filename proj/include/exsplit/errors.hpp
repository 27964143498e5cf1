#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exsplit {

/// Malformed input text (job documents, q-expansion files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition of an operation does not hold for its inputs
/// (non-unit divisor, inadmissible class, insufficient precision, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The normal-form extraction found a digit that no ζ^s(1+π^p)^t can produce.
class NotAdmissible : public PreconditionError {
 public:
  NotAdmissible(std::size_t position, const std::string& what)
      : PreconditionError(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An Artin-Schreier digit equation has no root in the current residue field.
/// Re-running with suggested_n_work() (a degree-p enlargement) always succeeds
/// for the equations produced by the Frobenius solver at precision <= 2p-1.
class ExtensionNeeded : public std::runtime_error {
 public:
  ExtensionNeeded(std::size_t position, std::size_t suggested_n_work,
                  const std::string& what)
      : std::runtime_error(what),
        position_(position),
        suggested_(suggested_n_work) {}
  std::size_t position() const noexcept { return position_; }
  std::size_t suggested_n_work() const noexcept { return suggested_; }

 private:
  std::size_t position_;
  std::size_t suggested_;
};

/// Two independent computations of the same quantity disagreed.
class InternalCheckFailed : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace exsplit
