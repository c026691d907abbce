#ifndef CATDIL_ERROR_HPP
#define CATDIL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace catdil {

/// Precondition violated by the caller (bad shape, out-of-range parameter,
/// non-Hermitian input where Hermitian is required, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Instance exceeds the dense-storage budget.
class ResourceLimit : public std::length_error {
public:
  using std::length_error::length_error;
};

/// File or parse failure in the interchange layer.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail(const std::string &where, const std::string &what) {
  throw InvalidArgument(where + ": " + what);
}

} // namespace detail

} // namespace catdil

#endif
