#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ff2/poly2.hpp"

namespace ff2 {

using Word = Poly2::Word;

}  // namespace ff2

namespace ff2::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240601);
  return g;
}

/// Uniform over polynomials of degree <= maxdeg (zero included).
inline Poly2 random_poly(int maxdeg) {
  std::vector<Word> words(static_cast<std::size_t>(maxdeg / 64) + 1);
  for (auto& w : words) w = rng()();
  const int top = maxdeg % 64;
  if (top < 63) words.back() &= (Word{1} << (top + 1)) - 1;
  return Poly2::from_words(std::move(words));
}

inline Poly2 random_nonzero(int maxdeg) {
  for (;;) {
    Poly2 p = random_poly(maxdeg);
    if (!p.is_zero()) return p;
  }
}

inline Poly2 P(Word w) { return Poly2::from_word(w); }

}  // namespace ff2::test
