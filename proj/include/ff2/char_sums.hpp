#pragma once

// Fourier analysis on F_2[x]/(h): orthogonality sums, the DFT and its
// inverse, the Walsh-Hadamard fast path for h = x^N, Ramanujan sums.

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ff2/laurent.hpp"
#include "ff2/poly2.hpp"
#include "ff2/rational.hpp"

namespace ff2 {

/// Largest modulus degree accepted by the enumerating routines here.
inline constexpr int kResidueDegreeCap = 24;

namespace detail {

inline int checked_residue_degree(const Poly2& h) {
  const int d = h.degree();
  if (d < 1) throw std::domain_error("modulus must have degree >= 1");
  if (d > kResidueDegreeCap) throw std::length_error("modulus degree above residue cap");
  return d;
}

/// e(f g / h) for reduced word residues f, g modulo h (deg h <= 32).
inline int e_residue(std::uint64_t f, std::uint64_t g, std::uint64_t h, int dh) noexcept {
  return e_word(word_mulmod(f, g, h), dh);
}

/// Bit mask w(g) with e(f g / h) = (-1)^{popcount(f & w(g))}: bit i of w(g)
/// is the x^{-1} coefficient of x^i g / h.
inline std::uint64_t pairing_mask(std::uint64_t g, std::uint64_t h, int dh) noexcept {
  std::uint64_t w = 0;
  std::uint64_t t = g;
  for (int i = 0; i < dh; ++i) {
    w |= ((t >> (dh - 1)) & 1u) << i;
    t <<= 1;
    if ((t >> dh) & 1u) t ^= h;
  }
  return w;
}

}  // namespace detail

/// Values indexed by residues mod `modulus`; index i is the residue whose
/// coefficient string is i.
struct ResidueTable {
  Poly2 modulus;
  std::vector<Rat> values;

  ResidueTable(Poly2 h, std::vector<Rat> v) : modulus(std::move(h)), values(std::move(v)) {
    const int d = detail::checked_residue_degree(modulus);
    if (values.size() != (std::size_t{1} << d)) {
      throw std::invalid_argument("residue table length must be 2^deg(modulus)");
    }
  }

  explicit ResidueTable(Poly2 h) : modulus(std::move(h)) {
    values.assign(std::size_t{1} << detail::checked_residue_degree(modulus), Rat(0));
  }

  int degree() const { return modulus.degree(); }
  std::size_t size() const { return values.size(); }

  friend bool operator==(const ResidueTable&, const ResidueTable&) = default;
};

/// Sum over g mod h of e(f g / h): 2^{deg h} if h | f, else 0.
inline std::int64_t indicator_sum(const Poly2& h, const Poly2& f) {
  const int d = detail::checked_residue_degree(h);
  const std::uint64_t hw = h.to_word();
  const std::uint64_t fw = (f % h).to_word();
  std::int64_t total = 0;
  for (std::uint64_t g = 0; g < (std::uint64_t{1} << d); ++g) {
    total += detail::e_residue(fw, g, hw, d);
  }
  return total;
}

/// Fhat(g) = 2^{-deg h} sum_f F(f) e(f g / h), by definition. Quadratic.
inline ResidueTable dft(const ResidueTable& F) {
  const int d = F.degree();
  const std::uint64_t hw = F.modulus.to_word();
  const std::size_t n = F.size();
  ResidueTable out(F.modulus);
  for (std::uint64_t g = 0; g < n; ++g) {
    Rat acc = 0;
    for (std::uint64_t f = 0; f < n; ++f) {
      if (detail::e_residue(f, g, hw, d) > 0) {
        acc += F.values[f];
      } else {
        acc -= F.values[f];
      }
    }
    out.values[g] = acc / pow2(d);
  }
  return out;
}

/// F(f) = sum_g Fhat(g) e(f g / h).
inline ResidueTable idft(const ResidueTable& Fhat) {
  const int d = Fhat.degree();
  const std::uint64_t hw = Fhat.modulus.to_word();
  const std::size_t n = Fhat.size();
  ResidueTable out(Fhat.modulus);
  for (std::uint64_t f = 0; f < n; ++f) {
    Rat acc = 0;
    for (std::uint64_t g = 0; g < n; ++g) {
      if (detail::e_residue(f, g, hw, d) > 0) {
        acc += Fhat.values[g];
      } else {
        acc -= Fhat.values[g];
      }
    }
    out.values[f] = acc;
  }
  return out;
}

/// Unnormalized Walsh-Hadamard transform in place:
/// out[w] = sum_f in[f] (-1)^{popcount(f & w)}.
template <class T>
void wht_inplace(std::span<T> a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("length must be a power of two");
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * len) {
      for (std::size_t j = i; j < i + len; ++j) {
        T u = a[j];
        T v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
}

/// Unnormalized transform for the pairing of bit i with bit N-1-i:
/// out[g] = sum_f in[f] (-1)^{sum_i f_i g_{N-1-i}}. Bit positions k and
/// N-1-k are handled together by a 4-point butterfly that writes its outputs
/// with the two positions exchanged, so no separate permutation pass runs.
template <class T>
void wht_reversed_inplace(std::span<T> a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("length must be a power of two");
  const int N = std::countr_zero(n);
  for (int k = 0; k < N - 1 - k; ++k) {
    const std::size_t bk = std::size_t{1} << k;
    const std::size_t bm = std::size_t{1} << (N - 1 - k);
    for (std::size_t base = 0; base < n; ++base) {
      if (base & (bk | bm)) continue;
      const T x00 = a[base];
      const T x10 = a[base | bk];
      const T x01 = a[base | bm];
      const T x11 = a[base | bk | bm];
      const T s0 = x00 + x10, d0 = x00 - x10;
      const T s1 = x01 + x11, d1 = x01 - x11;
      a[base] = s0 + s1;
      a[base | bm] = d0 + d1;
      a[base | bk] = s0 - s1;
      a[base | bk | bm] = d0 - d1;
    }
  }
  if (N % 2 == 1) {
    const std::size_t bc = std::size_t{1} << (N / 2);
    for (std::size_t base = 0; base < n; ++base) {
      if (base & bc) continue;
      T u = a[base];
      T v = a[base | bc];
      a[base] = u + v;
      a[base | bc] = u - v;
    }
  }
}

/// The dft modulo x^N via e(f g x^{-N}) = (-1)^{sum_i f_i g_{N-1-i}}.
inline std::vector<Rat> wht_xn(std::vector<Rat> F, int N) {
  if (N < 0 || F.size() != (std::size_t{1} << N)) {
    throw std::invalid_argument("wht_xn requires a table of length 2^N");
  }
  wht_reversed_inplace(std::span<Rat>(F));
  const Rat scale = pow2(-N);
  for (auto& v : F) v *= scale;
  return F;
}

/// dft computed as a Walsh-Hadamard transform followed by the index map
/// g -> w(g). Same result as dft(); n log n instead of n^2.
inline ResidueTable dft_fast(const ResidueTable& F) {
  const int d = F.degree();
  const std::uint64_t hw = F.modulus.to_word();
  std::vector<Rat> t = F.values;
  wht_inplace(std::span<Rat>(t));
  ResidueTable out(F.modulus);
  const Rat scale = pow2(-d);
  for (std::uint64_t g = 0; g < F.size(); ++g) {
    out.values[g] = t[detail::pairing_mask(g, hw, d)] * scale;
  }
  return out;
}

/// Sum over units a mod h of e(a c / h).
inline std::int64_t ramanujan_sum(const Poly2& h, const Poly2& c) {
  const int d = detail::checked_residue_degree(h);
  const std::uint64_t hw = h.to_word();
  const std::uint64_t cw = (c % h).to_word();
  std::int64_t total = 0;
  for (std::uint64_t a = 1; a < (std::uint64_t{1} << d); ++a) {
    std::uint64_t x = hw, y = a;
    while (y != 0) x = std::exchange(y, detail::word_mod(x, y));
    if (x != 1) continue;
    total += detail::e_residue(a, cw, hw, d);
  }
  return total;
}

/// Sum over f in G_N of e(f theta): 2^N when ord(theta) < -N, else 0.
inline BigInt geom_sum_gn(int N, const TorusPoint& theta) {
  if (N < 1) throw std::domain_error("geom_sum_gn requires N >= 1");
  return theta.ord() < -N ? pow2_int(N) : BigInt(0);
}

/// Same sum by enumerating G_N.
inline std::int64_t geom_sum_gn_enum(int N, const TorusPoint& theta) {
  if (N < 1) throw std::domain_error("geom_sum_gn requires N >= 1");
  if (N > kResidueDegreeCap) throw std::length_error("enumeration above residue cap");
  if (theta.is_zero()) return std::int64_t{1} << N;
  std::int64_t total = 0;
  for (std::uint64_t f = 0; f < (std::uint64_t{1} << N); ++f) {
    total += e_rat(Poly2::from_word(f), theta);
  }
  return total;
}

}  // namespace ff2
