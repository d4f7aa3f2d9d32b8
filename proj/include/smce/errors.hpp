#pragma once

#include <stdexcept>
#include <string>

namespace smce {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RangeError : Error { using Error::Error; };
struct ArgumentError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct CoherenceError : Error { using Error::Error; };
struct CompositionError : Error { using Error::Error; };
struct IntegrityError : Error { using Error::Error; };
struct ConflictError : Error { using Error::Error; };
struct NotFoundError : Error { using Error::Error; };
struct ReadOnlyError : Error { using Error::Error; };
struct SpecError : Error { using Error::Error; };

}  // namespace smce
