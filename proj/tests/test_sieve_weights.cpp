#include <gtest/gtest.h>

#include "ff2/arith.hpp"
#include "ff2/sieve_weights.hpp"
#include "support.hpp"

using namespace ff2;
using ff2::test::P;

namespace {

// Sum over every squarefree s built from primes of degree < Q (no degree
// truncation) of a(s) * sum_{t unit mod s} e(f t / s), by enumeration.
Rat complete_series(int Q, const Poly2& f, bool prime_kind) {
  const auto ps = primes_below(Q);
  Rat total = 0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << ps.size()); ++sub) {
    Poly2 s = Poly2::one();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if ((sub >> i) & 1u) s *= P(ps[i]);
    }
    Rat a = prime_kind ? alpha_prime(s) : alpha(s);
    std::int64_t inner = 0;
    for (const auto& t : units_mod(s)) inner += e_rat(f, frac_part(t, s));
    total += a * inner;
  }
  return total;
}

}  // namespace

TEST(LocalWeights, Examples) {
  const Poly2 x = parse_poly("x"), r2 = parse_poly("x^2+x+1");
  EXPECT_EQ(lambda_r(x, x), 0);
  EXPECT_EQ(lambda_r(x, Poly2::one()), 2);
  EXPECT_EQ(lambda_r(r2, x), Rat(4, 3));
  EXPECT_EQ(tau2_r(x, x), Rat(8, 5));
  EXPECT_EQ(tau2_r(x, Poly2::one()), Rat(2, 5));
  EXPECT_EQ(tau2_r(r2, r2), Rat(16, 7));
  EXPECT_THROW(lambda_r(parse_poly("x^2"), x), std::domain_error);
  EXPECT_THROW(tau2_r(parse_poly("x^2+1"), x), std::domain_error);
}

TEST(LocalWeights, MeanOne) {
  for (const auto& r : primes_up_to(5)) {
    Rat sl = 0, st = 0;
    for (Word f = 0; f < (Word{1} << r.degree()); ++f) {
      sl += lambda_r(r, P(f));
      st += tau2_r(r, P(f));
    }
    EXPECT_EQ(sl, pow2(r.degree())) << to_string(r);
    EXPECT_EQ(st, pow2(r.degree())) << to_string(r);
  }
}

TEST(CompleteProducts, Examples) {
  EXPECT_EQ(lambda_tilde(2, parse_poly("x")), 0);
  EXPECT_EQ(lambda_tilde(2, parse_poly("x^2+x+1")), 4);
  EXPECT_EQ(h_tilde(2, Poly2::one()), Rat(4, 25));
  EXPECT_EQ(lambda_tilde(1, parse_poly("x")), 1);
}

TEST(CompleteProducts, FourierIdentity) {
  for (int Q = 1; Q <= 3; ++Q) {
    for (Word f = 0; f < 64; ++f) {
      ASSERT_EQ(lambda_tilde(Q, P(f)), complete_series(Q, P(f), false)) << Q << " " << f;
      ASSERT_EQ(h_tilde(Q, P(f)), complete_series(Q, P(f), true)) << Q << " " << f;
    }
  }
}

TEST(CompleteProducts, TruncationDiffers) {
  EXPECT_EQ(lambda_tilde(2, parse_poly("x")), 0);
  EXPECT_EQ(lambda_trunc(2, parse_poly("x")), 1);
}

TEST(Alpha, Examples) {
  EXPECT_EQ(alpha(parse_poly("x")), -1);
  EXPECT_EQ(alpha(parse_poly("x^2+x")), 1);
  EXPECT_EQ(alpha_prime(parse_poly("x")), Rat(3, 5));
  EXPECT_EQ(alpha(Poly2::one()), 1);
  EXPECT_EQ(alpha_prime(Poly2::one()), 1);
  EXPECT_EQ(alpha(parse_poly("x^2")), 0);
  EXPECT_EQ(alpha_prime(parse_poly("x^2")), 0);
}

TEST(Alpha, MobiusOverPhi) {
  for (Word s = 1; s < 128; ++s) {
    ASSERT_EQ(alpha(P(s)), Rat(mobius(P(s))) / Rat(phi(P(s)))) << s;
  }
}

TEST(Alpha, TableExamples) {
  const auto t = alpha_table(AlphaKind::plain, 2);
  ASSERT_EQ(t.entries.size(), 3u);
  EXPECT_EQ(t.at(TorusPoint{}), 1);
  EXPECT_EQ(t.at(parse_torus("(1)/(x)")), -1);
  EXPECT_EQ(t.at(parse_torus("(1)/(x+1)")), -1);
  const auto p = alpha_table(AlphaKind::prime, 1);
  ASSERT_EQ(p.entries.size(), 1u);
  EXPECT_EQ(p.at(TorusPoint{}), 1);
}

TEST(Alpha, TableBoundAndSupport) {
  for (int Q = 1; Q <= 6; ++Q) {
    for (auto kind : {AlphaKind::plain, AlphaKind::prime}) {
      const auto t = alpha_table(kind, Q);
      for (const auto& [key, value] : t.entries) {
        const Poly2& s = key.den();
        ASSERT_TRUE(is_squarefree(s));
        ASSERT_LE(s.degree(), t.support_bound);
        const Rat bound = Rat(tau(s) * tau(s)) / pow2(s.degree());
        ASSERT_LE(abs(value), bound) << to_string(key);
      }
    }
  }
}

TEST(Truncated, Examples) {
  EXPECT_EQ(lambda_trunc(2, parse_poly("x")), 1);
  EXPECT_EQ(h_trunc(2, parse_poly("x^3+x")), Rat(11, 5));
  for (Word f = 0; f < 32; ++f) EXPECT_EQ(lambda_trunc(1, P(f)), 1);
  EXPECT_THROW(lambda_trunc(0, Poly2::one()), std::domain_error);
}

TEST(Truncated, MatchesTableEvaluation) {
  for (int Q = 1; Q <= 4; ++Q) {
    const auto ta = alpha_table(AlphaKind::plain, Q);
    const auto tp = alpha_table(AlphaKind::prime, Q);
    const TruncatedSeries lam(SeriesKind::lambda, Q), hq(SeriesKind::h, Q);
    for (Word f = 0; f < 256; ++f) {
      ASSERT_EQ(lam(P(f)), ta.evaluate(P(f))) << Q << " " << f;
      ASSERT_EQ(hq(P(f)), tp.evaluate(P(f))) << Q << " " << f;
      ASSERT_EQ(lam.value_of_mask(lam.mask_of(f)), lam(P(f)));
    }
  }
}

TEST(Truncated, MeanOneOverPeriod) {
  // averaging over f mod prod r kills every s != 1 term
  for (int Q = 1; Q <= 4; ++Q) {
    Poly2 M = Poly2::one();
    for (Word r : primes_below(Q)) M *= P(r);
    const TruncatedSeries lam(SeriesKind::lambda, Q), hq(SeriesKind::h, Q);
    Rat sl = 0, sh = 0;
    for (Word f = 0; f < (Word{1} << M.degree()); ++f) {
      sl += lam(P(f));
      sh += hq(P(f));
    }
    EXPECT_EQ(sl, pow2(M.degree()));
    EXPECT_EQ(sh, pow2(M.degree()));
  }
}

TEST(CoeffTable, Prune) {
  CoeffTable t;
  t.entries[TorusPoint{}] = 0;
  t.entries[parse_torus("(1)/(x)")] = Rat(1, 2);
  t.prune();
  EXPECT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(t.evaluate(Poly2::one()), Rat(-1, 2));
}
