#pragma once

// Irreducibility, prime enumeration, factorization and the classical
// arithmetic functions on F_2[x].

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ff2/poly2.hpp"
#include "ff2/rational.hpp"

namespace ff2 {

using Word = Poly2::Word;

/// Highest degree the per-process prime sieve will materialize.
inline constexpr int kSieveDegreeCap = 26;

/// Irreducibility by trial division over all polynomials of degree <= deg f / 2.
/// Reference implementation; only sensible for small degree.
inline bool is_irreducible_trial(const Poly2& f) {
  const int n = f.degree();
  if (n < 1) return false;
  if (n > 40) throw std::length_error("trial division limited to degree 40");
  const Word w = f.to_word();
  for (Word g = 2; detail::word_degree(g) <= n / 2; ++g) {
    if (detail::word_mod(w, g) == 0) return false;
  }
  return true;
}

namespace detail {

inline std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// x^(2^k) mod f by k successive squarings.
inline Poly2 frobenius_power(const Poly2& f, int k) {
  Poly2 t = Poly2::x() % f;
  for (int i = 0; i < k; ++i) t = square(t) % f;
  return t;
}

}  // namespace detail

/// Rabin's test: f of degree n is irreducible iff x^(2^n) = x mod f and
/// gcd(x^(2^(n/p)) - x, f) = 1 for every prime p | n.
inline bool is_irreducible(const Poly2& f) {
  const int n = f.degree();
  if (n < 1) return false;
  if (n <= 4) return is_irreducible_trial(f);
  if (!f.coeff(0)) return false;
  const Poly2 x = Poly2::x();
  if (detail::frobenius_power(f, n) != x) return false;
  for (int p : detail::prime_divisors(n)) {
    if (!gcd(detail::frobenius_power(f, n / p) + x, f).is_one()) return false;
  }
  return true;
}

/// Process-wide table of irreducibles, built one degree at a time by sieving
/// out products r*g with deg r <= n/2. Each degree is built once under a lock
/// and is immutable afterwards.
class PrimeSieve {
 public:
  static const PrimeSieve& instance() {
    static PrimeSieve sieve;
    return sieve;
  }

  /// Irreducibles of degree exactly n, ascending.
  std::span<const Word> of_degree(int n) const { return level(n).primes; }

  /// Membership test for a polynomial of degree <= kSieveDegreeCap.
  bool is_prime(Word w) const {
    const int n = detail::word_degree(w);
    if (n < 1) return false;
    const auto& flags = level(n).flags;
    const Word idx = w - (Word{1} << n);
    return (flags[idx >> 6] >> (idx & 63)) & 1u;
  }

 private:
  struct Level {
    std::vector<Word> primes;
    std::vector<Word> flags;  // bit (w - 2^n) set iff w is prime
  };

  PrimeSieve() = default;

  const Level& level(int n) const {
    if (n < 1 || n > kSieveDegreeCap) throw std::length_error("prime sieve degree out of range");
    std::lock_guard lock(mutex_);
    return build_locked(n);
  }

  const Level& build_locked(int n) const {
    auto& slot = levels_[static_cast<std::size_t>(n)];
    if (slot) return *slot;
    for (int d = 1; d <= n / 2; ++d) build_locked(d);

    const Word count = Word{1} << n;
    std::vector<Word> composite((count + 63) / 64, 0);
    auto mark = [&](Word w) {
      const Word idx = w - count;
      composite[idx >> 6] |= Word{1} << (idx & 63);
    };
    for (int d = 1; d <= n / 2; ++d) {
      const int e = n - d;
      for (Word r : levels_[static_cast<std::size_t>(d)]->primes) {
        // g runs over all 2^e polynomials of degree exactly e in Gray-code
        // order, so consecutive products differ by one shifted copy of r.
        Word prod = detail::word_mul(r, Word{1} << e);
        mark(prod);
        for (Word i = 1; i < (Word{1} << e); ++i) {
          prod ^= r << std::countr_zero(i);
          mark(prod);
        }
      }
    }
    auto lvl = std::make_unique<Level>();
    lvl->flags.assign(composite.size(), 0);
    for (Word i = 0; i < count; ++i) {
      if (!((composite[i >> 6] >> (i & 63)) & 1u)) {
        lvl->primes.push_back(count + i);
        lvl->flags[i >> 6] |= Word{1} << (i & 63);
      }
    }
    slot = std::move(lvl);
    return *slot;
  }

  mutable std::mutex mutex_;
  mutable std::array<std::unique_ptr<const Level>, kSieveDegreeCap + 1> levels_{};
};

/// All irreducibles of degree 1..maxdeg, sorted by (degree, coefficients).
inline std::vector<Poly2> primes_up_to(int maxdeg) {
  if (maxdeg < 1) throw std::domain_error("primes_up_to requires maxdeg >= 1");
  std::vector<Poly2> out;
  for (int d = 1; d <= maxdeg; ++d) {
    for (Word w : PrimeSieve::instance().of_degree(d)) out.push_back(Poly2::from_word(w));
  }
  return out;
}

/// Word-valued irreducibles with degree < n, i.e. the primes of G_n.
inline std::vector<Word> primes_below(int n) {
  std::vector<Word> out;
  for (int d = 1; d < n; ++d) {
    auto ps = PrimeSieve::instance().of_degree(d);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

struct PrimePower {
  Poly2 prime;
  int multiplicity = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

/// Complete factorization by trial division with sieved primes. The remaining
/// cofactor is tested with Rabin's criterion at each degree, so only inputs
/// with two prime factors above kSieveDegreeCap are out of reach.
inline Factorization factor(const Poly2& f) {
  if (f.is_zero()) throw std::domain_error("factor of the zero polynomial");
  Factorization out;
  Poly2 rest = f;
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    if (is_irreducible(rest)) break;
    if (d > kSieveDegreeCap) throw std::length_error("factor: cofactor beyond sieve range");
    for (Word w : PrimeSieve::instance().of_degree(d)) {
      const Poly2 r = Poly2::from_word(w);
      int m = 0;
      for (;;) {
        auto [q, rem] = divmod(rest, r);
        if (!rem.is_zero()) break;
        rest = std::move(q);
        ++m;
      }
      if (m > 0) out.push_back({r, m});
      if (2 * d > rest.degree()) break;
    }
  }
  if (rest.degree() >= 1) out.push_back({rest, 1});
  std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) {
    return a.prime < b.prime;
  });
  return out;
}

inline bool is_squarefree(const Poly2& f) {
  if (f.is_zero()) throw std::domain_error("is_squarefree of the zero polynomial");
  return gcd(f, derivative(f)).is_one();
}

inline int mobius(const Poly2& f) {
  if (f.is_zero()) throw std::domain_error("mobius of the zero polynomial");
  if (!is_squarefree(f)) return 0;
  return factor(f).size() % 2 == 0 ? 1 : -1;
}

/// Number of units modulo f: prod (2^{deg r^a} - 2^{deg r^{a-1}}).
inline BigInt phi(const Poly2& f) {
  if (f.is_zero()) throw std::domain_error("phi of the zero polynomial");
  BigInt out = 1;
  for (const auto& [r, a] : factor(f)) {
    const int d = r.degree();
    out *= pow2_int(d * a) - pow2_int(d * (a - 1));
  }
  return out;
}

inline BigInt tau(const Poly2& f) {
  if (f.is_zero()) throw std::domain_error("tau of the zero polynomial");
  BigInt out = 1;
  for (const auto& pp : factor(f)) out *= pp.multiplicity + 1;
  return out;
}

/// deg f when f is irreducible, else 0.
inline int lambda_prime(const Poly2& f) {
  if (f.is_zero()) throw std::domain_error("lambda_prime of the zero polynomial");
  if (f.degree() <= kSieveDegreeCap) {
    return PrimeSieve::instance().is_prime(f.to_word()) ? f.degree() : 0;
  }
  return is_irreducible(f) ? f.degree() : 0;
}

/// Divisor counts tau(w) for every word 0 < w < 2^n (index 0 unused).
inline std::vector<std::uint32_t> tau_table(int n) {
  if (n < 1 || n > kSieveDegreeCap) throw std::length_error("tau_table degree out of range");
  const Word size = Word{1} << n;
  std::vector<std::uint32_t> t(size, 0);
  for (Word d = 1; d < size; ++d) {
    const int e = n - 1 - detail::word_degree(d);  // multiples d*g with deg g <= e
    Word prod = 0;
    for (Word i = 1; i < (Word{1} << (e + 1)); ++i) {
      prod ^= d << std::countr_zero(i);
      ++t[prod];
    }
  }
  return t;
}

/// Sum of tau(f)^B over the nonzero f of degree < N.
inline Rat tau_power_sum(int N, int B) {
  if (N < 1 || B < 0) throw std::domain_error("tau_power_sum requires N >= 1, B >= 0");
  const auto t = tau_table(N);
  BigInt total = 0;
  BigInt term;
  for (std::size_t w = 1; w < t.size(); ++w) {
    mpz_ui_pow_ui(term.get_mpz_t(), t[w], static_cast<unsigned long>(B));
    total += term;
  }
  return Rat(total);
}

}  // namespace ff2
