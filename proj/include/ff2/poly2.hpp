#pragma once

// Polynomials over F_2 on word-packed coefficient strings.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ff2/detail/clmul.hpp"

#ifndef FF2_POLY2_DEGREE_CAP
#define FF2_POLY2_DEGREE_CAP 65536
#endif

namespace ff2 {

/// Degree of the zero polynomial. Never -1.
inline constexpr int kNegInfDegree = std::numeric_limits<int>::min();

/// Largest degree any Poly2 may reach; exceeding it throws std::length_error.
inline constexpr int kDegreeCap = FF2_POLY2_DEGREE_CAP;

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A polynomial over F_2. Bit i of the packed words is the coefficient of x^i;
/// the word vector never carries trailing zero words, so equality is bitwise.
class Poly2 {
 public:
  using Word = std::uint64_t;
  static constexpr int kWordBits = 64;

  Poly2() = default;

  static Poly2 from_word(Word w) {
    Poly2 p;
    if (w != 0) p.words_.push_back(w);
    return p;
  }

  static Poly2 from_words(std::vector<Word> words) {
    Poly2 p;
    p.words_ = std::move(words);
    p.trim();
    p.check_cap();
    return p;
  }

  static Poly2 one() { return from_word(1); }
  static Poly2 x() { return from_word(2); }

  static Poly2 monomial(int k) {
    if (k < 0) throw std::invalid_argument("negative exponent");
    if (k > kDegreeCap) throw std::length_error("degree cap exceeded");
    Poly2 p;
    p.words_.assign(static_cast<std::size_t>(k / kWordBits) + 1, 0);
    p.words_.back() = Word{1} << (k % kWordBits);
    return p;
  }

  int degree() const noexcept {
    if (words_.empty()) return kNegInfDegree;
    return static_cast<int>(words_.size() - 1) * kWordBits + detail::word_degree(words_.back());
  }

  bool is_zero() const noexcept { return words_.empty(); }
  bool is_one() const noexcept { return words_.size() == 1 && words_[0] == 1; }

  bool coeff(int i) const noexcept {
    if (i < 0) return false;
    const auto w = static_cast<std::size_t>(i / kWordBits);
    return w < words_.size() && ((words_[w] >> (i % kWordBits)) & 1u) != 0;
  }

  void set_coeff(int i, bool value) {
    if (i < 0) throw std::invalid_argument("negative exponent");
    if (i > kDegreeCap && value) throw std::length_error("degree cap exceeded");
    const auto w = static_cast<std::size_t>(i / kWordBits);
    if (w >= words_.size()) {
      if (!value) return;
      words_.resize(w + 1, 0);
    }
    const Word mask = Word{1} << (i % kWordBits);
    words_[w] = value ? (words_[w] | mask) : (words_[w] & ~mask);
    trim();
  }

  std::span<const Word> words() const noexcept { return words_; }
  bool fits_word() const noexcept { return words_.size() <= 1; }

  Word to_word() const {
    if (!fits_word()) throw std::overflow_error("polynomial does not fit in a machine word");
    return words_.empty() ? 0 : words_[0];
  }

  int popcount() const noexcept {
    int n = 0;
    for (Word w : words_) n += std::popcount(w);
    return n;
  }

  Poly2& operator+=(const Poly2& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
    trim();
    return *this;
  }
  Poly2& operator-=(const Poly2& o) { return *this += o; }

  Poly2& operator*=(const Poly2& o) {
    *this = *this * o;
    return *this;
  }

  /// this * x^k
  Poly2 shifted_up(int k) const {
    if (k < 0) return shifted_down(-k);
    if (is_zero() || k == 0) return *this;
    if (degree() + k > kDegreeCap) throw std::length_error("degree cap exceeded");
    const auto wshift = static_cast<std::size_t>(k / kWordBits);
    const int bshift = k % kWordBits;
    std::vector<Word> out(words_.size() + wshift + 1, 0);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      out[i + wshift] ^= words_[i] << bshift;
      if (bshift != 0) out[i + wshift + 1] ^= words_[i] >> (kWordBits - bshift);
    }
    return from_words(std::move(out));
  }

  /// floor(this / x^k)
  Poly2 shifted_down(int k) const {
    if (k < 0) return shifted_up(-k);
    if (k == 0) return *this;
    const auto wshift = static_cast<std::size_t>(k / kWordBits);
    if (wshift >= words_.size()) return {};
    const int bshift = k % kWordBits;
    std::vector<Word> out(words_.size() - wshift, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = words_[i + wshift] >> bshift;
      if (bshift != 0 && i + wshift + 1 < words_.size()) {
        out[i] |= words_[i + wshift + 1] << (kWordBits - bshift);
      }
    }
    return from_words(std::move(out));
  }

  /// this mod x^k
  Poly2 low_part(int k) const {
    if (k <= 0) return {};
    if (k > degree()) return *this;
    std::vector<Word> out(words_.begin(),
                          words_.begin() + static_cast<std::ptrdiff_t>((k - 1) / kWordBits + 1));
    if (k % kWordBits != 0) out.back() &= (Word{1} << (k % kWordBits)) - 1;
    return from_words(std::move(out));
  }

  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a += b; }

  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.degree() + b.degree() > kDegreeCap) throw std::length_error("degree cap exceeded");
    std::vector<Word> out(a.words_.size() + b.words_.size(), 0);
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
      if (a.words_[i] == 0) continue;
      for (std::size_t j = 0; j < b.words_.size(); ++j) {
        const auto p = detail::clmul64(a.words_[i], b.words_[j]);
        out[i + j] ^= p.lo;
        out[i + j + 1] ^= p.hi;
      }
    }
    return from_words(std::move(out));
  }

  friend bool operator==(const Poly2&, const Poly2&) = default;

  /// Orders by degree, then by coefficients from the top down. For
  /// single-word polynomials this is the integer order of the bit strings.
  friend std::strong_ordering operator<=>(const Poly2& a, const Poly2& b) noexcept {
    if (auto c = a.words_.size() <=> b.words_.size(); c != 0) return c;
    for (std::size_t i = a.words_.size(); i-- > 0;) {
      if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  void trim() noexcept {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }
  void check_cap() const {
    if (degree() > kDegreeCap) throw std::length_error("degree cap exceeded");
  }

  std::vector<Word> words_;
};

struct DivMod {
  Poly2 quotient;
  Poly2 remainder;
};

inline DivMod divmod(const Poly2& a, const Poly2& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (a.fits_word() && b.fits_word()) {
    const auto [q, r] = detail::word_divmod(a.to_word(), b.to_word());
    return {Poly2::from_word(q), Poly2::from_word(r)};
  }
  const int db = b.degree();
  int da = a.degree();
  if (da < db) return {Poly2{}, a};

  using Word = Poly2::Word;
  constexpr int kBits = Poly2::kWordBits;
  std::vector<Word> rem(a.words().begin(), a.words().end());
  std::vector<Word> quot(static_cast<std::size_t>((da - db) / kBits) + 1, 0);
  const auto bw = b.words();
  auto bit = [&](int i) { return (rem[static_cast<std::size_t>(i / kBits)] >> (i % kBits)) & 1u; };
  for (int k = da; k >= db; --k) {
    if (!bit(k)) continue;
    const int shift = k - db;
    quot[static_cast<std::size_t>(shift / kBits)] |= Word{1} << (shift % kBits);
    const auto wshift = static_cast<std::size_t>(shift / kBits);
    const int bshift = shift % kBits;
    for (std::size_t i = 0; i < bw.size(); ++i) {
      rem[i + wshift] ^= bw[i] << bshift;
      if (bshift != 0 && i + wshift + 1 < rem.size()) {
        rem[i + wshift + 1] ^= bw[i] >> (kBits - bshift);
      }
    }
  }
  return {Poly2::from_words(std::move(quot)), Poly2::from_words(std::move(rem))};
}

inline Poly2 operator/(const Poly2& a, const Poly2& b) { return divmod(a, b).quotient; }
inline Poly2 operator%(const Poly2& a, const Poly2& b) { return divmod(a, b).remainder; }

inline bool divides(const Poly2& d, const Poly2& a) { return (a % d).is_zero(); }

inline Poly2 gcd(Poly2 a, Poly2 b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Poly2 r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

struct ExtendedGcd {
  Poly2 gcd;
  Poly2 u;  ///< u*a + v*b == gcd
  Poly2 v;
};

inline ExtendedGcd xgcd(const Poly2& a, const Poly2& b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd(0, 0) is undefined");
  Poly2 r0 = a, r1 = b;
  Poly2 u0 = Poly2::one(), u1;
  Poly2 v0, v1 = Poly2::one();
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::exchange(r1, std::move(r));
    u0 = std::exchange(u1, u0 + q * u1);
    v0 = std::exchange(v1, v0 + q * v1);
  }
  return {std::move(r0), std::move(u0), std::move(v0)};
}

/// Inverse of a modulo m; throws std::domain_error unless gcd(a, m) = 1.
inline Poly2 inv_mod(const Poly2& a, const Poly2& m) {
  if (m.degree() < 1) throw std::domain_error("inverse modulo a constant is undefined");
  const Poly2 reduced = a % m;
  if (reduced.is_zero()) throw std::domain_error("operand is not invertible modulo m");
  auto eg = xgcd(reduced, m);
  if (!eg.gcd.is_one()) throw std::domain_error("operand is not invertible modulo m");
  return eg.u % m;
}

/// Formal derivative. In characteristic 2 only odd powers survive.
inline Poly2 derivative(const Poly2& p) {
  std::vector<Poly2::Word> out(p.words().begin(), p.words().end());
  for (auto& w : out) w = (w >> 1) & 0x5555555555555555ULL;
  return Poly2::from_words(std::move(out));
}

/// p^2, which in characteristic 2 spreads bit i to bit 2i.
inline Poly2 square(const Poly2& p) {
  if (p.is_zero()) return {};
  if (2 * p.degree() > kDegreeCap) throw std::length_error("degree cap exceeded");
  std::vector<Poly2::Word> out(2 * p.words().size(), 0);
  for (std::size_t i = 0; i < p.words().size(); ++i) {
    const auto sq = detail::clmul64(p.words()[i], p.words()[i]);
    out[2 * i] = sq.lo;
    out[2 * i + 1] = sq.hi;
  }
  return Poly2::from_words(std::move(out));
}

inline Poly2 mul_mod(const Poly2& a, const Poly2& b, const Poly2& m) { return (a * b) % m; }

/// base^e mod m by square-and-multiply.
inline Poly2 pow_mod(Poly2 base, std::uint64_t e, const Poly2& m) {
  Poly2 result = Poly2::one() % m;
  base = base % m;
  while (e != 0) {
    if (e & 1u) result = mul_mod(result, base, m);
    e >>= 1;
    if (e != 0) base = square(base) % m;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Text form:  expr := term ('+' term)* ;  term := "0" | "1" | "x" | "x^" uint
// plus binary "0b..." and hex "0x..." literals (bit i <-> x^i). Whitespace is
// ignored; repeated terms cancel.

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  Poly2 parse() {
    Poly2 acc;
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    acc += term();
    skip_ws();
    while (!at_end()) {
      if (text_[pos_] != '+') throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
      ++pos_;
      skip_ws();
      acc += term();
      skip_ws();
    }
    return acc;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                         text_[pos_] == '\r')) {
      ++pos_;
    }
  }
  char peek() {
    skip_ws();
    return at_end() ? '\0' : text_[pos_];
  }

  Poly2 term() {
    if (at_end()) throw ParseError("expected a term", pos_);
    const char c = text_[pos_];
    if (c == 'x') {
      ++pos_;
      if (peek() != '^') return Poly2::x();
      ++pos_;
      skip_ws();
      return Poly2::monomial(exponent());
    }
    if (c == '0' && pos_ + 1 < text_.size() && (text_[pos_ + 1] == 'b' || text_[pos_ + 1] == 'x')) {
      return literal(text_[pos_ + 1] == 'b' ? 1 : 4);
    }
    if (c == '0' || c == '1') {
      ++pos_;
      if (!at_end() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        throw ParseError("integer constants other than 0 and 1 are not polynomials", pos_);
      }
      return c == '1' ? Poly2::one() : Poly2{};
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  int exponent() {
    const std::size_t start = pos_;
    long long value = 0;
    while (!at_end() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      value = value * 10 + (text_[pos_] - '0');
      if (value > kDegreeCap) throw ParseError("exponent exceeds degree cap", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected exponent after '^'", start);
    return static_cast<int>(value);
  }

  // bits_per_digit: 1 for binary, 4 for hex.
  Poly2 literal(int bits_per_digit) {
    const std::size_t start = pos_;
    pos_ += 2;
    std::vector<int> digits;
    while (!at_end()) {
      const char d = text_[pos_];
      int v = -1;
      if (d >= '0' && d <= '9') v = d - '0';
      else if (bits_per_digit == 4 && d >= 'a' && d <= 'f') v = d - 'a' + 10;
      else if (bits_per_digit == 4 && d >= 'A' && d <= 'F') v = d - 'A' + 10;
      if (v < 0) break;
      if (v >= (1 << bits_per_digit)) throw ParseError("invalid digit in literal", pos_);
      digits.push_back(v);
      ++pos_;
    }
    if (digits.empty()) throw ParseError("empty literal", start);
    Poly2 p;
    int bit = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      for (int k = 0; k < bits_per_digit; ++k, ++bit) {
        if ((*it >> k) & 1) p.set_coeff(bit, true);
      }
    }
    return p;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly2 parse_poly(std::string_view text) { return detail::PolyParser(text).parse(); }

/// Descending powers, e.g. "x^3+x+1"; the zero polynomial prints as "0".
inline std::string to_string(const Poly2& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    if (!p.coeff(i)) continue;
    if (!out.empty()) out += '+';
    if (i == 0) out += '1';
    else if (i == 1) out += 'x';
    else out += "x^" + std::to_string(i);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Poly2& p) { return os << to_string(p); }

}  // namespace ff2

template <>
struct std::hash<ff2::Poly2> {
  std::size_t operator()(const ff2::Poly2& p) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : p.words()) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ULL;
    return h;
  }
};
