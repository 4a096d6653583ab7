#pragma once

#include <stdexcept>
#include <string>

namespace mimolfb {

// Invalid user-supplied configuration (bad dimensions, unsupported
// modulation, malformed flags). The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A symbol vector contains an entry outside the constellation.
struct MappingError : std::runtime_error {
  explicit MappingError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive oracle asked to enumerate more candidates than its cap.
struct OracleTooLarge : std::runtime_error {
  explicit OracleTooLarge(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mimolfb
