#pragma once

#include <stdexcept>
#include <string>

namespace anoqrl {

/// Invalid sizes, shapes, or combinations of settings.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Qubit or element index outside its valid range, or duplicated.
class IndexError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Non-finite input, non-finite result, or a solver that did not converge.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An operation called in a state that does not allow it (e.g. stepping a
/// finished episode).
class UsageError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace anoqrl
