#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bookreel {

/// Incremental 64-bit FNV-1a. A non-zero seed is folded in as eight
/// little-endian bytes before any payload.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  Fnv1a64() = default;
  explicit Fnv1a64(std::uint64_t seed) {
    for (int i = 0; i < 8; ++i) {
      update_byte(static_cast<std::uint8_t>(seed >> (8 * i)));
    }
  }

  void update_byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= kPrime;
  }

  void update(std::string_view bytes) {
    for (unsigned char c : bytes) update_byte(c);
  }

  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = kOffsetBasis;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  Fnv1a64 h;
  h.update(bytes);
  return h.value();
}

/// Lowercase, zero-padded 16-digit hex.
std::string hex64(std::uint64_t v);

}  // namespace bookreel
