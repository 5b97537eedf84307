#pragma once

#include <stdexcept>
#include <string>

namespace ncym {

/// Operands live over different algebra sizes or have incompatible shapes.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A form has the wrong grade for the requested operation.
struct GradeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Arguments are outside the domain of the operation (charge/side mismatch, unsupported mode, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ncym
