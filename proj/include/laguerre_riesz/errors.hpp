#pragma once

#include <stdexcept>
#include <string>

namespace laguerre_riesz {

// Raised when a quadrature or series evaluation produces a non-finite value.
// Bad arguments use std::invalid_argument / std::domain_error instead.
class integration_error : public std::runtime_error {
 public:
  explicit integration_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require_domain(bool condition, const char* message) {
  if (!condition) throw std::domain_error(message);
}

}  // namespace detail
}  // namespace laguerre_riesz
