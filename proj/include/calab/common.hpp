#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace calab {

using Symbol = std::uint8_t;

/// Thrown for every contract violation in the library. The message is the
/// user-facing reason ("empty input", "insufficient context", ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Upper bound on candidate counts for exhaustive enumerations.
/// Defaults to 2^24; the CALAB_CAP environment variable overrides it.
std::uint64_t enumeration_cap();

}  // namespace calab
