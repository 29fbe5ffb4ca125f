#pragma once

// Fourier coefficients of the complete product and of its truncation, the
// local factors u_r, and the counting bounds behind the truncation error.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ff2/arith.hpp"
#include "ff2/char_sums.hpp"
#include "ff2/laurent.hpp"
#include "ff2/params.hpp"
#include "ff2/poly2.hpp"
#include "ff2/rational.hpp"
#include "ff2/sieve_weights.hpp"

namespace ff2 {

/// Largest deg prod_{r in G_R} r for which the convolution oracle runs.
inline constexpr int kBetaConvDegreeCap = 16;

struct LocalFactor {
  Poly2 r;
  int d = 0;
  Rat norm;  ///< (1 - 2^-d)(1 + 3 * 2^-d)

  explicit LocalFactor(Poly2 prime) : r(std::move(prime)), d(detail::checked_prime_degree(r)) {
    norm = (1 - pow2(-d)) * (1 + 3 * pow2(-d));
  }
};

/// 4 if r | f, 0 if f = 1 mod r, else 1.
inline Rat u_r(const Poly2& r, const Poly2& f) {
  detail::checked_prime_degree(r);
  const Poly2 res = f % r;
  if (res.is_zero()) return 4;
  if (res.is_one()) return 0;
  return 1;
}

/// Transform of u_r modulo r: 1 + 2/2^d at g = 0, else (3 - e(g/r)) / 2^d.
inline Rat u_r_hat(const Poly2& r, const Poly2& g) {
  const int d = detail::checked_prime_degree(r);
  const Poly2 res = g % r;
  if (res.is_zero()) return 1 + Rat(2) * pow2(-d);
  return (3 - e_rat(res, frac_part(Poly2::one(), r))) * pow2(-d);
}

namespace detail {

/// True when s is squarefree and all its prime factors have degree < R.
inline bool supported_denominator(const Poly2& s, int R) {
  if (s.degree() == 0) return true;
  if (!is_squarefree(s)) return false;
  for (const auto& pp : factor(s)) {
    if (pp.prime.degree() >= R) return false;
  }
  return true;
}

inline Poly2 product_of_primes_below(int R) {
  Poly2 M = Poly2::one();
  for (Word r : primes_below(R)) M = M * Poly2::from_word(r);
  return M;
}

}  // namespace detail

/// beta(t/s) = C prod_{r !| s} u_r_hat(0) prod_{r | s} u_r_hat(f(r)) with
/// C = prod_{r in G_R} 1/norm(r) and f(r) = t (s/r)^{-1} mod r.
inline Rat beta_closed(const TorusPoint& lambda, int R) {
  if (R < 1) throw std::domain_error("R must be >= 1");
  const Poly2& s = lambda.den();
  if (!detail::supported_denominator(s, R)) return 0;
  Rat out = 1;
  for (Word rw : primes_below(R)) {
    const Poly2 r = Poly2::from_word(rw);
    const LocalFactor lf(r);
    out /= lf.norm;
    if (divides(r, s)) {
      const Poly2 cofactor = s / r;
      out *= u_r_hat(r, lambda.num() * inv_mod(cofactor, r));
    } else {
      out *= u_r_hat(r, Poly2{});
    }
  }
  return out;
}

/// Full coefficient table of F(f) = lambda_tilde_R(f+1) h_tilde_R(f), by a
/// genuine transform of F on F_2[x]/(M), M = prod_{r in G_R} r.
inline CoeffTable beta_conv_table(int R) {
  if (R < 1) throw std::domain_error("R must be >= 1");
  const Poly2 M = detail::product_of_primes_below(R);
  if (M.degree() > kBetaConvDegreeCap) throw std::length_error("beta_conv: R too large");
  CoeffTable table;
  table.support_bound = M.degree();
  if (M.degree() == 0) {
    table.entries.emplace(TorusPoint{}, Rat(1));
    return table;
  }
  ResidueTable F(M);
  for (Word f = 0; f < F.size(); ++f) {
    const Poly2 p = Poly2::from_word(f);
    F.values[f] = lambda_tilde(R, p + Poly2::one()) * h_tilde(R, p);
  }
  const ResidueTable Fhat = dft_fast(F);
  for (Word g = 0; g < Fhat.size(); ++g) {
    if (Fhat.values[g] != 0) table.entries.emplace(frac_part(Poly2::from_word(g), M), Fhat.values[g]);
  }
  return table;
}

inline Rat beta_conv(const TorusPoint& lambda, int R) { return beta_conv_table(R).at(lambda); }

/// beta^trunc(lambda) = sum over squarefree q1 in G_R, units a1 mod q1 of
/// alpha(q1) e(a1/q1) alpha'(q2), where a2/q2 = lambda - a1/q1 must have
/// q2 in G_Q.
inline Rat beta_trunc(const TorusPoint& lambda, int R, int Q) {
  if (R < 1 || Q < 1) throw std::domain_error("R and Q must be >= 1");
  Rat total = 0;
  for (const Poly2& q1 : squarefree_below(R)) {
    const Rat a = alpha(q1);
    for (const Poly2& a1 : units_mod(q1)) {
      const TorusPoint first = frac_part(a1, q1);
      const TorusPoint rest = torus_add(lambda, first);
      if (rest.den().degree() >= Q) continue;
      const Rat ap = alpha_prime(rest.den());
      if (ap == 0) continue;
      if (e_rat(Poly2::one(), first) > 0) {
        total += a * ap;
      } else {
        total -= a * ap;
      }
    }
  }
  return total;
}

/// All nonzero beta^trunc coefficients, by enumerating both frequency sets.
inline CoeffTable beta_trunc_table(int R, int Q) {
  CoeffTable lam = alpha_table(AlphaKind::plain, R);
  CoeffTable hq = alpha_table(AlphaKind::prime, Q);
  CoeffTable out;
  out.support_bound = (R - 1) + (Q - 1);
  for (const auto& [k1, v1] : lam.entries) {
    const Rat w1 = e_rat(Poly2::one(), k1) > 0 ? v1 : Rat(-v1);
    for (const auto& [k2, v2] : hq.entries) out.entries[torus_add(k1, k2)] += w1 * v2;
  }
  out.prune();
  return out;
}

/// |sum e(a1/q1)| over unit pairs with a1/q1 + a2/q2 = b/r.
inline std::int64_t inner_sum_S(const Poly2& b, const Poly2& r, const Poly2& q1, const Poly2& q2) {
  for (const Poly2* p : {&r, &q1, &q2}) {
    if (p->is_zero() || !is_squarefree(*p)) throw std::domain_error("inner_sum_S needs squarefree moduli");
  }
  const TorusPoint target = frac_part(b, r);
  if (r.degree() > 0 && target.den() != r) throw std::domain_error("b must be a unit modulo r");
  std::int64_t sum = 0;
  for (const Poly2& a1 : units_mod(q1)) {
    const TorusPoint first = frac_part(a1, q1);
    if (torus_add(target, first).den() == q2) sum += e_rat(Poly2::one(), first);
  }
  return sum < 0 ? -sum : sum;
}

/// #{a unit mod q : den(target - a/q) = s}.
inline std::int64_t denom_count(const TorusPoint& target, const Poly2& q, const Poly2& s) {
  if (q.is_zero() || !is_squarefree(q)) throw std::domain_error("denom_count needs squarefree q");
  std::int64_t count = 0;
  for (const Poly2& a : units_mod(q)) {
    if (torus_add(target, frac_part(a, q)).den() == s) ++count;
  }
  return count;
}

/// Exponent of the counting bound 2^{deg(s (q, r) / r)}, r = den(target);
/// may be negative, in which case the count must vanish.
inline int denom_count_bound_exponent(const TorusPoint& target, const Poly2& q, const Poly2& s) {
  const Poly2& r = target.den();
  return s.degree() + gcd(q, r).degree() - r.degree();
}

/// |beta^trunc(lambda) - beta(lambda)|.
inline Rat prop34_gap(const TorusPoint& lambda, const Params& p) {
  const Rat d = beta_trunc(lambda, p.R, p.Q) - beta_conv(lambda, p.R);
  return d < 0 ? Rat(-d) : d;
}

}  // namespace ff2
