#pragma once

// Laurent series in 1/x, the torus K_inf / F_2[x], the character e and
// Dirichlet approximation by continued fractions.

#include <compare>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "ff2/poly2.hpp"

namespace ff2 {

/// A reduced fraction num/den with deg num < deg den; the zero point is 0/1.
class TorusPoint {
 public:
  TorusPoint() : den_(Poly2::one()) {}

  static TorusPoint zero() { return {}; }

  /// Fractional part of a/s, reduced.
  static TorusPoint frac(const Poly2& a, const Poly2& s) {
    if (s.is_zero()) throw std::domain_error("zero denominator");
    Poly2 num = a % s;
    if (num.is_zero()) return {};
    const Poly2 g = gcd(num, s);
    TorusPoint t;
    if (g.is_one()) {
      t.num_ = std::move(num);
      t.den_ = s;
    } else {
      t.num_ = num / g;
      t.den_ = s / g;
    }
    return t;
  }

  const Poly2& num() const noexcept { return num_; }
  const Poly2& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  /// Highest exponent of the expansion; kNegInfDegree for zero.
  int ord() const noexcept {
    return is_zero() ? kNegInfDegree : num_.degree() - den_.degree();
  }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

  /// Ordered by denominator, then numerator.
  friend std::strong_ordering operator<=>(const TorusPoint& a, const TorusPoint& b) noexcept {
    if (auto c = a.den_ <=> b.den_; c != 0) return c;
    return a.num_ <=> b.num_;
  }

 private:
  Poly2 num_;
  Poly2 den_;
};

inline TorusPoint frac_part(const Poly2& a, const Poly2& s) { return TorusPoint::frac(a, s); }

inline TorusPoint torus_add(const TorusPoint& a, const TorusPoint& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den() == b.den()) return frac_part(a.num() + b.num(), a.den());
  const Poly2 g = gcd(a.den(), b.den());
  const Poly2 ca = b.den() / g;
  const Poly2 cb = a.den() / g;
  return frac_part(a.num() * ca + b.num() * cb, a.den() * ca);
}

/// f * lambda on the torus.
inline TorusPoint torus_scale(const Poly2& f, const TorusPoint& t) {
  if (t.is_zero()) return t;
  return frac_part(f * t.num(), t.den());
}

inline std::string to_string(const TorusPoint& t) {
  if (t.is_zero()) return "0";
  return "(" + to_string(t.num()) + ")/(" + to_string(t.den()) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const TorusPoint& t) {
  return os << to_string(t);
}

/// Accepts "0", a bare polynomial (reduced to its fractional part, so 0),
/// "(u)/(s)", or "u/s" when neither side contains '+'.
inline TorusPoint parse_torus(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    parse_poly(text);
    return {};
  }
  auto side = [&](std::string_view part, std::size_t offset) {
    std::size_t b = 0, e = part.size();
    while (b < e && part[b] == ' ') ++b;
    while (e > b && part[e - 1] == ' ') --e;
    part = part.substr(b, e - b);
    if (!part.empty() && part.front() == '(') {
      if (part.back() != ')') throw ParseError("unbalanced parenthesis", offset + b);
      return parse_poly(part.substr(1, part.size() - 2));
    }
    if (part.find('+') != std::string_view::npos) {
      throw ParseError("ambiguous fraction; parenthesize numerator and denominator", offset + b);
    }
    return parse_poly(part);
  };
  if (text.find('/', slash + 1) != std::string_view::npos) {
    throw ParseError("more than one '/'", text.find('/', slash + 1));
  }
  const Poly2 u = side(text.substr(0, slash), 0);
  const Poly2 s = side(text.substr(slash + 1), slash + 1);
  if (s.is_zero()) throw ParseError("zero denominator", slash + 1);
  return frac_part(u, s);
}

/// Coefficients of a Laurent series for exponents lo..hi. Bit i of `bits`
/// is the coefficient of x^(lo+i). Reading below lo throws.
class LaurentWindow {
 public:
  LaurentWindow(int hi, int lo, Poly2 bits) : hi_(hi), lo_(lo), bits_(std::move(bits)) {
    if (hi < lo) throw std::invalid_argument("window top below its floor");
    if (!bits_.is_zero() && bits_.degree() > hi - lo) {
      throw std::invalid_argument("window bits above its top exponent");
    }
  }

  /// Single monomial x^e known down to `lo`.
  static LaurentWindow monomial(int e, int lo) {
    return {std::max(e, lo), lo, e >= lo ? Poly2::monomial(e - lo) : Poly2{}};
  }

  int hi() const noexcept { return hi_; }
  int lo() const noexcept { return lo_; }
  const Poly2& bits() const noexcept { return bits_; }

  bool coeff(int e) const {
    if (e < lo_) throw std::out_of_range("coefficient below the window precision floor");
    if (e > hi_) return false;
    return bits_.coeff(e - lo_);
  }

  /// Largest exponent with a set bit, kNegInfDegree if the window is all zero.
  int ord() const noexcept { return bits_.is_zero() ? kNegInfDegree : lo_ + bits_.degree(); }

  /// Sum; known only down to the coarser of the two floors.
  friend LaurentWindow operator+(const LaurentWindow& a, const LaurentWindow& b) {
    const int lo = std::max(a.lo_, b.lo_);
    const int hi = std::max({a.hi_, b.hi_, lo});
    auto align = [lo](const LaurentWindow& w) {
      return lo >= w.lo_ ? w.bits_.shifted_down(lo - w.lo_) : w.bits_.shifted_up(w.lo_ - lo);
    };
    return {hi, lo, align(a) + align(b)};
  }

  friend bool operator==(const LaurentWindow&, const LaurentWindow&) = default;

 private:
  int hi_;
  int lo_;
  Poly2 bits_;
};

/// Expansion of a/s in descending powers down to exponent `floor`.
inline LaurentWindow laurent_expand(const Poly2& a, const Poly2& s, int floor) {
  if (s.is_zero()) throw std::domain_error("zero denominator");
  Poly2 q = floor <= 0 ? a.shifted_up(-floor) / s : (a / s).shifted_down(floor);
  const int top = a.is_zero() ? floor : std::max(floor, a.degree() - s.degree());
  return {top, floor, std::move(q)};
}

inline LaurentWindow laurent_expand(const TorusPoint& t, int floor) {
  return laurent_expand(t.num(), t.den(), floor);
}

/// e(alpha) = (-1)^{a_{-1}}.
inline int e_char(const LaurentWindow& w) { return w.coeff(-1) ? -1 : 1; }

/// e(f * lambda). The x^-1 coefficient of u/s (deg u < deg s) is 1 exactly
/// when deg u = deg s - 1.
inline int e_rat(const Poly2& f, const TorusPoint& t) {
  if (t.is_zero()) return 1;
  const Poly2 u = (f * t.num()) % t.den();
  return (!u.is_zero() && u.degree() == t.den().degree() - 1) ? -1 : 1;
}

namespace detail {

/// e(v/s) for word polynomials with v already reduced mod s.
constexpr int e_word(std::uint64_t v, int deg_s) noexcept {
  return ((v >> (deg_s - 1)) & 1u) ? -1 : 1;
}

}  // namespace detail

struct DirichletApprox {
  Poly2 u;
  Poly2 s = Poly2::one();
  /// ord(theta - u/s); kNegInfDegree when the approximation is exact. For
  /// window input whose difference vanishes on the whole window, this is
  /// lo - 1 and `below_window` is set (the true order is at most that).
  int tail_ord = kNegInfDegree;
  bool exact = false;
  bool below_window = false;
};

namespace detail {

/// Walks the continued-fraction convergents p/q of num/den and returns the
/// last one with deg q < n.
inline std::pair<Poly2, Poly2> last_convergent_below(const Poly2& num, const Poly2& den, int n) {
  Poly2 p_prev = Poly2::one(), q_prev;
  Poly2 p, q = Poly2::one();
  Poly2 a = den, b = num;
  while (!b.is_zero()) {
    auto [ak, rem] = divmod(a, b);
    Poly2 q_next = ak * q + q_prev;
    if (q_next.degree() >= n) break;
    Poly2 p_next = ak * p + p_prev;
    p_prev = std::exchange(p, std::move(p_next));
    q_prev = std::exchange(q, std::move(q_next));
    a = std::move(b);
    b = std::move(rem);
  }
  return {std::move(p), std::move(q)};
}

/// ord(num/den - u/s).
inline int ord_difference(const Poly2& num, const Poly2& den, const Poly2& u, const Poly2& s) {
  const Poly2 d = num * s + u * den;
  return d.is_zero() ? kNegInfDegree : d.degree() - den.degree() - s.degree();
}

}  // namespace detail

/// u/s with deg s < n and ord(theta - u/s) <= -n - deg s.
inline DirichletApprox dirichlet_approx(const TorusPoint& theta, int n) {
  if (n < 1) throw std::domain_error("dirichlet_approx requires n >= 1");
  auto [u, s] = detail::last_convergent_below(theta.num(), theta.den(), n);
  DirichletApprox out;
  out.tail_ord = detail::ord_difference(theta.num(), theta.den(), u, s);
  out.exact = out.tail_ord == kNegInfDegree;
  out.u = std::move(u);
  out.s = std::move(s);
  return out;
}

/// Window form: the fractional part of the window (exponents -1..lo) is an
/// exact rational v/x^{-lo}; its approximant is valid for any series that
/// agrees with the window, because the unseen tail sits below -2n.
inline DirichletApprox dirichlet_approx(const LaurentWindow& theta, int n) {
  if (n < 1) throw std::domain_error("dirichlet_approx requires n >= 1");
  if (theta.lo() > -2 * n) throw std::out_of_range("window too shallow for dirichlet_approx");
  const int depth = -theta.lo();
  Poly2 v = theta.bits().low_part(depth);  // exponents lo..-1
  const Poly2 den = Poly2::monomial(depth);
  auto [u, s] = detail::last_convergent_below(v, den, n);
  DirichletApprox out;
  const int ord = detail::ord_difference(v, den, u, s);
  if (ord == kNegInfDegree || ord < theta.lo()) {
    out.tail_ord = theta.lo() - 1;
    out.below_window = true;
  } else {
    out.tail_ord = ord;
  }
  out.u = std::move(u);
  out.s = std::move(s);
  return out;
}

/// The first convergent u/s of theta with ord(theta - u/s) < -n. Used to
/// attach a rational centre to grid points theta = v/x^n.
inline DirichletApprox major_arc_centre(const TorusPoint& theta, int n) {
  Poly2 p_prev = Poly2::one(), q_prev;
  Poly2 p, q = Poly2::one();
  Poly2 a = theta.den(), b = theta.num();
  for (;;) {
    const int ord = detail::ord_difference(theta.num(), theta.den(), p, q);
    if (ord < -n) {
      DirichletApprox out;
      out.u = p;
      out.s = q;
      out.tail_ord = ord;
      out.exact = ord == kNegInfDegree;
      return out;
    }
    auto [ak, rem] = divmod(a, b);
    Poly2 p_next = ak * p + p_prev;
    Poly2 q_next = ak * q + q_prev;
    p_prev = std::exchange(p, std::move(p_next));
    q_prev = std::exchange(q, std::move(q_next));
    a = std::move(b);
    b = std::move(rem);
  }
}

}  // namespace ff2
