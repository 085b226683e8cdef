#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "sdnmc/error.hpp"

namespace sdnmc {

/// Fixed-width boolean vector naming a Kripke state.
///
/// Bit i is b[i]; b[width-1] is the most significant bit and is printed
/// first, so "110000" has b[5]=b[4]=1 and all other bits clear.
class StateVector {
 public:
  static constexpr std::size_t kMaxWidth = 64;

  StateVector(std::size_t width, std::uint64_t bits) : width_(width), bits_(bits) {
    if (width_ == 0 || width_ > kMaxWidth) {
      throw Error(ErrorCode::WidthMismatch, "state width must be in [1, 64], got " + std::to_string(width_));
    }
    if (width_ < kMaxWidth && (bits_ >> width_) != 0) {
      throw Error(ErrorCode::WidthMismatch, "bits exceed width " + std::to_string(width_));
    }
  }

  /// Parses a bit string such as "110000".
  static StateVector parse(std::string_view text) {
    if (text.empty() || text.size() > kMaxWidth) {
      throw Error(ErrorCode::WidthMismatch, "bad bit string '" + std::string(text) + "'");
    }
    std::uint64_t bits = 0;
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw Error(ErrorCode::ParseError, "bad bit string '" + std::string(text) + "'");
      }
      bits = (bits << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return StateVector(text.size(), bits);
  }

  std::size_t width() const noexcept { return width_; }
  std::uint64_t bits() const noexcept { return bits_; }

  bool bit(std::size_t i) const {
    if (i >= width_) {
      throw Error(ErrorCode::IndexOutOfRange, "bit " + std::to_string(i) + " of width " + std::to_string(width_));
    }
    return ((bits_ >> i) & 1U) != 0;
  }

  std::string to_string() const {
    std::string out(width_, '0');
    for (std::size_t i = 0; i < width_; ++i) {
      if ((bits_ >> i) & 1U) out[width_ - 1 - i] = '1';
    }
    return out;
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;
  friend std::strong_ordering operator<=>(const StateVector&, const StateVector&) = default;

 private:
  std::size_t width_;
  std::uint64_t bits_;
};

/// A conjunction of bit tests: a state satisfies it iff (bits & mask) == value.
/// Named atoms, conjunction macros and whole-state literals all reduce to this.
struct StatePredicate {
  std::size_t width = 0;
  std::uint64_t mask = 0;
  std::uint64_t value = 0;

  bool operator()(const StateVector& s) const { return (s.bits() & mask) == value; }

  friend bool operator==(const StatePredicate&, const StatePredicate&) = default;
};

}  // namespace sdnmc

template <>
struct std::hash<sdnmc::StateVector> {
  std::size_t operator()(const sdnmc::StateVector& s) const noexcept {
    return std::hash<std::uint64_t>{}(s.bits() * 131U + s.width());
  }
};
