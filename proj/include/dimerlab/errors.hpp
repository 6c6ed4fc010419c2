#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dimerlab {

/// Invalid input: bad index, out-of-range parameter, malformed state.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested object would exceed one of the configured size caps.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process-wide size caps. Read once from the environment, adjustable by callers
/// (the CLI) before any computation starts.
struct Limits {
  std::size_t max_matrix_side = 4096;
  std::size_t max_amplitudes = std::size_t{1} << 22;
  std::uint64_t max_enumeration_nodes = 1'000'000'000ULL;
  unsigned threads = 1;
};

namespace detail {

inline std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return fallback;
  return v;
}

inline Limits limits_from_env() {
  Limits l;
  l.max_amplitudes = static_cast<std::size_t>(env_u64("DIMERLAB_MAX_STATE", l.max_amplitudes));
  l.threads = static_cast<unsigned>(env_u64("DIMERLAB_THREADS", l.threads));
  return l;
}

}  // namespace detail

inline Limits& limits() {
  static Limits instance = detail::limits_from_env();
  return instance;
}

/// Integer power with overflow detection against `cap`; returns cap + 1 on overflow.
inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

}  // namespace dimerlab
