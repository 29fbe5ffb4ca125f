#pragma once

// Word-level kernels for binary polynomials packed into uint64_t.
// Bit i of a word is the coefficient of x^i.

#include <bit>
#include <cstdint>
#include <utility>

#if defined(__PCLMUL__)
#include <emmintrin.h>
#include <wmmintrin.h>
#endif

namespace ff2::detail {

struct Wide {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

/// Carry-less 64x64 -> 128 product, four bits at a time.
constexpr Wide clmul64_portable(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t table_lo[16] = {};
  std::uint64_t table_hi[16] = {};
  for (unsigned k = 1; k < 16; ++k) {
    for (unsigned bit = 0; bit < 4; ++bit) {
      if ((k >> bit) & 1u) {
        table_lo[k] ^= a << bit;
        table_hi[k] ^= bit == 0 ? 0 : a >> (64 - bit);
      }
    }
  }
  Wide r;
  for (int shift = 60; shift >= 0; shift -= 4) {
    // r <<= 4
    r.hi = (r.hi << 4) | (r.lo >> 60);
    r.lo <<= 4;
    const unsigned nib = static_cast<unsigned>(b >> shift) & 0xFu;
    r.lo ^= table_lo[nib];
    r.hi ^= table_hi[nib];
  }
  return r;
}

inline Wide clmul64(std::uint64_t a, std::uint64_t b) noexcept {
#if defined(__PCLMUL__)
  const __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
  const __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
  const __m128i p = _mm_clmulepi64_si128(va, vb, 0x00);
  return {static_cast<std::uint64_t>(_mm_cvtsi128_si64(p)),
          static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(p, p)))};
#else
  return clmul64_portable(a, b);
#endif
}

/// Degree of a word polynomial, -1 for zero. Internal use only: the public
/// Poly2 API reports kNegInfDegree for the zero polynomial.
constexpr int word_degree(std::uint64_t a) noexcept {
  return a == 0 ? -1 : 63 - std::countl_zero(a);
}

/// a mod b for word polynomials, b != 0.
constexpr std::uint64_t word_mod(std::uint64_t a, std::uint64_t b) noexcept {
  const int db = word_degree(b);
  for (int da = word_degree(a); da >= db; da = word_degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

constexpr std::pair<std::uint64_t, std::uint64_t> word_divmod(std::uint64_t a,
                                                              std::uint64_t b) noexcept {
  const int db = word_degree(b);
  std::uint64_t q = 0;
  for (int da = word_degree(a); da >= db; da = word_degree(a)) {
    q |= std::uint64_t{1} << (da - db);
    a ^= b << (da - db);
  }
  return {q, a};
}

/// Product of two word polynomials whose degrees sum to less than 64.
inline std::uint64_t word_mul(std::uint64_t a, std::uint64_t b) noexcept {
  return clmul64(a, b).lo;
}

/// a*b mod m where deg m <= 32 so the product fits a word.
inline std::uint64_t word_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return word_mod(word_mul(a, b), m);
}

/// Reverses the low `bits` bits of v.
constexpr std::uint64_t reverse_bits(std::uint64_t v, int bits) noexcept {
  std::uint64_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | ((v >> i) & 1u);
  }
  return r;
}

}  // namespace ff2::detail
