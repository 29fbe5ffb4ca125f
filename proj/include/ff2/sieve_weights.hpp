#pragma once

// Local sieve weights, their complete products, the truncated Fourier
// series and the coefficient tables that expand them.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ff2/arith.hpp"
#include "ff2/laurent.hpp"
#include "ff2/poly2.hpp"
#include "ff2/rational.hpp"

namespace ff2 {

namespace detail {

inline int checked_prime_degree(const Poly2& r) {
  if (lambda_prime(r) == 0) throw std::domain_error("argument is not an irreducible polynomial");
  return r.degree();
}

}  // namespace detail

/// 0 if r | f, else 2^d / (2^d - 1).
inline Rat lambda_r(const Poly2& r, const Poly2& f) {
  const int d = detail::checked_prime_degree(r);
  if (divides(r, f)) return 0;
  return Rat(pow2_int(d), pow2_int(d) - 1);
}

/// 4 * 2^d / (2^d + 3) if r | f, else 2^d / (2^d + 3).
inline Rat tau2_r(const Poly2& r, const Poly2& f) {
  const int d = detail::checked_prime_degree(r);
  const BigInt q = pow2_int(d);
  Rat v(divides(r, f) ? BigInt(4 * q) : q, q + 3);
  v.canonicalize();
  return v;
}

/// Product of lambda_r(f) over primes r with deg r < Q.
inline Rat lambda_tilde(int Q, const Poly2& f) {
  if (Q < 1) throw std::domain_error("Q must be >= 1");
  Rat out = 1;
  for (Word r : primes_below(Q)) {
    out *= lambda_r(Poly2::from_word(r), f);
    if (out == 0) break;
  }
  return out;
}

/// Product of tau2_r(f) over primes r with deg r < Q.
inline Rat h_tilde(int Q, const Poly2& f) {
  if (Q < 1) throw std::domain_error("Q must be >= 1");
  Rat out = 1;
  for (Word r : primes_below(Q)) out *= tau2_r(Poly2::from_word(r), f);
  return out;
}

/// mu(s) / phi(s).
inline Rat alpha(const Poly2& s) {
  if (s.is_zero()) throw std::domain_error("alpha of the zero polynomial");
  if (!is_squarefree(s)) return 0;
  Rat out = 1;
  for (const auto& pp : factor(s)) out *= Rat(-1, pow2_int(pp.prime.degree()) - 1);
  return out;
}

/// Product over r | s of 3 / (2^d + 3), zero unless s is squarefree.
inline Rat alpha_prime(const Poly2& s) {
  if (s.is_zero()) throw std::domain_error("alpha_prime of the zero polynomial");
  if (!is_squarefree(s)) return 0;
  Rat out = 1;
  for (const auto& pp : factor(s)) out *= Rat(3, pow2_int(pp.prime.degree()) + 3);
  return out;
}

enum class SeriesKind { lambda, h };

/// The truncated series sum_{s in G_Q} a(s) sum_{t unit mod s} e(f t / s)
/// with a = alpha (lambda) or alpha' (h). The inner sum factors over r | s
/// into local Ramanujan sums, so the value is the sum of prod_{r|s} w_r(f)
/// over squarefree s with deg s < Q: a knapsack on degrees.
class TruncatedSeries {
 public:
  static constexpr int kMaxMaskPrimes = 64;

  TruncatedSeries(SeriesKind kind, int Q) : kind_(kind), Q_(Q) {
    if (Q < 1) throw std::domain_error("Q must be >= 1");
    primes_ = primes_below(Q);
    for (Word r : primes_) {
      const int d = detail::word_degree(r);
      const BigInt q = pow2_int(d);
      Rat on, off;
      if (kind == SeriesKind::lambda) {
        on = -1;                 // alpha(r) * (2^d - 1)
        off = Rat(1, q - 1);     // alpha(r) * (-1)
      } else {
        on = Rat(3 * (q - 1), q + 3);
        off = Rat(-3, q + 3);
      }
      on.canonicalize();
      off.canonicalize();
      degrees_.push_back(d);
      on_.push_back(std::move(on));
      off_.push_back(std::move(off));
    }
  }

  SeriesKind kind() const noexcept { return kind_; }
  int Q() const noexcept { return Q_; }
  const std::vector<Word>& primes() const noexcept { return primes_; }

  Rat operator()(const Poly2& f) const {
    std::vector<bool> divisible(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      divisible[i] = divides(Poly2::from_word(primes_[i]), f);
    }
    return evaluate([&](std::size_t i) { return divisible[i]; });
  }

  /// Bit i set iff primes()[i] divides f; needs at most 64 primes.
  std::uint64_t mask_of(Word f) const {
    if (primes_.size() > kMaxMaskPrimes) throw std::length_error("too many primes for a mask");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (detail::word_mod(f, primes_[i]) == 0) m |= std::uint64_t{1} << i;
    }
    return m;
  }

  Rat value_of_mask(std::uint64_t mask) const {
    return evaluate([&](std::size_t i) { return ((mask >> i) & 1u) != 0; });
  }

 private:
  template <class Divides>
  Rat evaluate(Divides&& divides_at) const {
    std::vector<Rat> c(static_cast<std::size_t>(Q_), Rat(0));
    c[0] = 1;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const Rat& w = divides_at(i) ? on_[i] : off_[i];
      for (int k = Q_ - 1; k >= degrees_[i]; --k) {
        c[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k - degrees_[i])] * w;
      }
    }
    Rat total = 0;
    for (const auto& v : c) total += v;
    return total;
  }

  SeriesKind kind_;
  int Q_;
  std::vector<Word> primes_;
  std::vector<int> degrees_;
  std::vector<Rat> on_;
  std::vector<Rat> off_;
};

inline Rat lambda_trunc(int Q, const Poly2& f) { return TruncatedSeries(SeriesKind::lambda, Q)(f); }

inline Rat h_trunc(int Q, const Poly2& f) { return TruncatedSeries(SeriesKind::h, Q)(f); }

/// Finite-support map from torus points to exact coefficients.
struct CoeffTable {
  std::map<TorusPoint, Rat> entries;
  int support_bound = 0;

  Rat at(const TorusPoint& t) const {
    auto it = entries.find(t);
    return it == entries.end() ? Rat(0) : it->second;
  }

  /// sum over keys lambda of value * e(f lambda).
  Rat evaluate(const Poly2& f) const {
    Rat total = 0;
    for (const auto& [key, value] : entries) {
      if (e_rat(f, key) > 0) {
        total += value;
      } else {
        total -= value;
      }
    }
    return total;
  }

  /// Drops zero entries.
  void prune() {
    std::erase_if(entries, [](const auto& kv) { return kv.second == 0; });
  }
};

enum class AlphaKind { plain, prime };

/// All squarefree s with deg s < Q and prime factors of degree < Q, ascending.
inline std::vector<Poly2> squarefree_below(int Q) {
  std::vector<Poly2> out;
  for (Word s = 1; detail::word_degree(s) < Q; ++s) {
    const Poly2 p = Poly2::from_word(s);
    if (is_squarefree(p)) out.push_back(p);
  }
  return out;
}

/// Units modulo s, ascending; {0} for s = 1.
inline std::vector<Poly2> units_mod(const Poly2& s) {
  std::vector<Poly2> out;
  if (s.degree() == 0) {
    out.emplace_back();
    return out;
  }
  if (s.degree() > 24) throw std::length_error("units_mod above enumeration cap");
  for (Word t = 1; t < (Word{1} << s.degree()); ++t) {
    const Poly2 p = Poly2::from_word(t);
    if (gcd(p, s).is_one()) out.push_back(p);
  }
  return out;
}

/// Expansion of the truncated series: key t/s for squarefree s in G_Q and
/// unit t, value alpha(s) or alpha'(s).
inline CoeffTable alpha_table(AlphaKind kind, int Q) {
  if (Q < 1) throw std::domain_error("Q must be >= 1");
  CoeffTable table;
  table.support_bound = Q - 1;
  for (const Poly2& s : squarefree_below(Q)) {
    const Rat a = kind == AlphaKind::plain ? alpha(s) : alpha_prime(s);
    for (const Poly2& t : units_mod(s)) table.entries.emplace(frac_part(t, s), a);
  }
  return table;
}

}  // namespace ff2
