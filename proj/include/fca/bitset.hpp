#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fca::bits {

// Bit-array layout: position k (1-based) maps to bit k-1; arrays are
// word-aligned spans of uint64_t.

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t width) { return (width + kWordBits - 1) / kWordBits; }

inline void set(std::span<Word> w, std::size_t pos) {
  w[(pos - 1) / kWordBits] |= Word{1} << ((pos - 1) % kWordBits);
}
inline void reset(std::span<Word> w, std::size_t pos) {
  w[(pos - 1) / kWordBits] &= ~(Word{1} << ((pos - 1) % kWordBits));
}
inline bool test(std::span<const Word> w, std::size_t pos) {
  return (w[(pos - 1) / kWordBits] >> ((pos - 1) % kWordBits)) & 1u;
}

inline void fill(std::span<Word> w, std::size_t width) {
  for (auto& x : w) x = ~Word{0};
  if (std::size_t tail = width % kWordBits; tail != 0 && !w.empty())
    w.back() = (Word{1} << tail) - 1;
}

inline void intersect(std::span<Word> dst, std::span<const Word> src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] &= src[k];
}

inline bool equal(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return false;
  return true;
}

inline bool subset(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] & ~b[k]) return false;
  return true;
}

inline bool none(std::span<const Word> a) {
  for (auto x : a)
    if (x) return false;
  return true;
}

/// Highest set position, 0 if none.
inline std::size_t highest(std::span<const Word> a) {
  for (std::size_t k = a.size(); k-- > 0;)
    if (a[k]) return k * kWordBits + (kWordBits - std::countl_zero(a[k]));
  return 0;
}

/// Smallest position p < limit with a set and b clear, 0 if none.
inline std::size_t first_difference_below(std::span<const Word> a, std::span<const Word> b,
                                          std::size_t limit) {
  if (limit <= 1) return 0;
  const std::size_t last = limit - 1;  // highest position considered
  for (std::size_t k = 0; k * kWordBits < last; ++k) {
    Word d = a[k] & ~b[k];
    std::size_t base = k * kWordBits;
    if (last - base < kWordBits) d &= (Word{1} << (last - base)) - 1;
    if (d) return base + std::countr_zero(d) + 1;
  }
  return 0;
}

/// Any position p > lower set in a and clear in b.
inline bool differs_above(std::span<const Word> a, std::span<const Word> b, std::size_t lower) {
  for (std::size_t k = lower / kWordBits; k < a.size(); ++k) {
    Word d = a[k] & ~b[k];
    if (k == lower / kWordBits) {
      std::size_t shift = lower % kWordBits;  // positions <= lower occupy bits < lower
      d &= shift == 0 ? ~Word{0} : ~((Word{1} << shift) - 1);
    }
    if (d) return true;
  }
  return false;
}

template <class F>
void for_each(std::span<const Word> a, F&& f) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    Word w = a[k];
    while (w) {
      f(k * kWordBits + std::countr_zero(w) + 1);
      w &= w - 1;
    }
  }
}

inline std::uint64_t hash(std::span<const Word> a) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (auto x : a) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

/// "1100"-style rendering, position 1 first.
inline std::string to_string(std::span<const Word> a, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t p = 1; p <= width; ++p)
    if (test(a, p)) s[p - 1] = '1';
  return s;
}

/// Owning bit-array for callers that do not manage a pool.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t width) : width_(width), words_(words_for(width), 0) {}

  std::size_t width() const noexcept { return width_; }
  std::span<Word> span() noexcept { return words_; }
  std::span<const Word> span() const noexcept { return words_; }

  void set(std::size_t pos) { bits::set(words_, pos); }
  bool test(std::size_t pos) const { return bits::test(words_, pos); }
  bool operator==(const Bitset&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<Word> words_;
};

}  // namespace fca::bits
