#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace wd {

/// A configured resource guard (dimension, enumeration size, field size) was exceeded.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search ran out of its user-supplied budget (e.g. extension degree for root finding).
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exactness or consistency check inside the library failed. Never expected.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline std::size_t env_size(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return fallback;
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Upper bound on the ambient dimension of linear-algebra objects. WD_GUARD_DIM overrides.
inline std::size_t dimension_guard() { return detail::env_size("WD_GUARD_DIM", std::size_t{1} << 14); }

/// Largest finite field (number of elements) that may be exhausted.
inline constexpr std::size_t kFieldExhaustionGuard = std::size_t{1} << 20;

}  // namespace wd
