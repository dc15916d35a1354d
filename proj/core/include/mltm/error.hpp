#pragma once

#include <stdexcept>
#include <string>

namespace mltm {

/// Invalid configuration or parameters supplied by the caller.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be used: malformed files, mismatched vocabularies.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant (negative counts, non-finite weights).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mltm
