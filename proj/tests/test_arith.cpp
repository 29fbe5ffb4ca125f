#include <gtest/gtest.h>

#include <thread>

#include "ff2/arith.hpp"
#include "support.hpp"

using namespace ff2;
using ff2::test::P;

namespace {

// Number of monic irreducibles of degree n by the necklace formula.
long long necklace_count(int n) {
  long long total = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    int m = d, mu = 1;
    for (int p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      if (m % p == 0) { mu = 0; break; }
      mu = -mu;
    }
    if (mu != 0 && m > 1) mu = -mu;
    total += mu * (1LL << (n / d));
  }
  return total / n;
}

std::vector<Poly2> divisors(const Poly2& f) {
  std::vector<Poly2> out;
  for (Word d = 1; d < (Word{1} << (f.degree() + 1)); ++d) {
    if (divides(P(d), f)) out.push_back(P(d));
  }
  return out;
}

}  // namespace

TEST(Arith, IrreducibleExamples) {
  EXPECT_TRUE(is_irreducible(parse_poly("x^2+x+1")));
  EXPECT_FALSE(is_irreducible(parse_poly("x^4+x^2+1")));
  EXPECT_FALSE(is_irreducible(Poly2::one()));
  EXPECT_FALSE(is_irreducible(Poly2{}));
  EXPECT_TRUE(is_irreducible(parse_poly("x^127+x+1")));
  EXPECT_TRUE(is_irreducible(parse_poly("x^128+x^7+x^2+x+1")));
  EXPECT_FALSE(is_irreducible(parse_poly("x^128+1")));
}

TEST(Arith, RabinMatchesTrialDivision) {
  for (Word w = 0; w < (Word{1} << 14); ++w) {
    ASSERT_EQ(is_irreducible(P(w)), is_irreducible_trial(P(w))) << w;
  }
}

TEST(Arith, SieveMatchesRabin) {
  const auto& sieve = PrimeSieve::instance();
  for (Word w = 2; w < (Word{1} << 16); ++w) ASSERT_EQ(sieve.is_prime(w), is_irreducible(P(w))) << w;
}

TEST(Arith, PrimesUpTo) {
  EXPECT_EQ(primes_up_to(1), (std::vector<Poly2>{parse_poly("x"), parse_poly("x+1")}));
  EXPECT_EQ(primes_up_to(2), (std::vector<Poly2>{parse_poly("x"), parse_poly("x+1"), parse_poly("x^2+x+1")}));
  std::vector<int> counts(6, 0);
  for (const auto& p : primes_up_to(5)) ++counts[p.degree()];
  EXPECT_EQ(counts, (std::vector<int>{0, 2, 1, 2, 3, 6}));
}

TEST(Arith, PrimeCountEnvelope) {
  for (int n = 1; n <= 18; ++n) {
    const auto count = static_cast<long long>(PrimeSieve::instance().of_degree(n).size());
    EXPECT_EQ(count, necklace_count(n)) << n;
    EXPECT_LE(count * n, 2LL << n) << n;
  }
}

TEST(Arith, SieveConcurrentReaders) {
  std::vector<std::size_t> seen(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([t, &seen] { seen[t] = PrimeSieve::instance().of_degree(19 + (t % 2)).size(); });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(seen[0], static_cast<std::size_t>(necklace_count(19)));
  EXPECT_EQ(seen[1], static_cast<std::size_t>(necklace_count(20)));
  EXPECT_EQ(seen[0], seen[2]);
}

TEST(Arith, FactorExamples) {
  EXPECT_EQ(factor(parse_poly("x^3+1")),
            (Factorization{{parse_poly("x+1"), 1}, {parse_poly("x^2+x+1"), 1}}));
  EXPECT_EQ(factor(parse_poly("x^2+1")), (Factorization{{parse_poly("x+1"), 2}}));
  EXPECT_EQ(factor(parse_poly("x")), (Factorization{{parse_poly("x"), 1}}));
  EXPECT_TRUE(factor(Poly2::one()).empty());
  EXPECT_THROW(factor(Poly2{}), std::domain_error);
}

TEST(Arith, FactorRoundTripExhaustive) {
  for (Word w = 1; w < (Word{1} << 11); ++w) {
    const auto fs = factor(P(w));
    Poly2 prod = Poly2::one();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      ASSERT_TRUE(is_irreducible(fs[i].prime));
      ASSERT_GE(fs[i].multiplicity, 1);
      if (i) ASSERT_LT(fs[i - 1].prime, fs[i].prime);
      for (int k = 0; k < fs[i].multiplicity; ++k) prod *= fs[i].prime;
    }
    ASSERT_EQ(prod, P(w));
  }
}

TEST(Arith, FactorLargeProducts) {
  for (int i = 0; i < 200; ++i) {
    const Poly2 a = test::random_nonzero(20), b = test::random_nonzero(20), c = test::random_nonzero(12);
    const Poly2 f = a * b * c;
    Poly2 prod = Poly2::one();
    for (const auto& pp : factor(f)) {
      for (int k = 0; k < pp.multiplicity; ++k) prod *= pp.prime;
    }
    ASSERT_EQ(prod, f);
  }
}

TEST(Arith, FunctionExamples) {
  const Poly2 f = parse_poly("x^3+1");
  EXPECT_EQ(phi(f), 3);
  EXPECT_EQ(tau(f), 4);
  EXPECT_EQ(mobius(f), 1);
  EXPECT_EQ(lambda_prime(parse_poly("x^3+x+1")), 3);
  EXPECT_EQ(lambda_prime(parse_poly("x^2+1")), 0);
  EXPECT_EQ(mobius(parse_poly("x^2")), 0);
  EXPECT_EQ(mobius(Poly2::one()), 1);
  EXPECT_TRUE(is_squarefree(parse_poly("x^2+x")));
  EXPECT_FALSE(is_squarefree(parse_poly("x^3+x")));
  EXPECT_THROW(phi(Poly2{}), std::domain_error);
}

TEST(Arith, FunctionsAgainstEnumeration) {
  for (Word w = 1; w < (Word{1} << 9); ++w) {
    const Poly2 f = P(w);
    long units = 0;
    for (Word a = 0; a < (Word{1} << f.degree()); ++a) units += gcd(P(a), f).is_one() ? 1 : 0;
    if (f.degree() == 0) units = 1;
    const auto ds = divisors(f);
    ASSERT_EQ(phi(f), units) << w;
    ASSERT_EQ(tau(f), static_cast<long>(ds.size())) << w;
    int mu_sum = 0;
    BigInt phi_sum = 0;
    for (const auto& d : ds) {
      mu_sum += mobius(d);
      phi_sum += phi(d);
    }
    ASSERT_EQ(mu_sum, f.degree() == 0 ? 1 : 0);
    ASSERT_EQ(phi_sum, pow2_int(f.degree()));
  }
}

TEST(Arith, Multiplicativity) {
  int tested = 0;
  while (tested < 10000) {
    const Poly2 f = test::random_nonzero(16), g = test::random_nonzero(16);
    if (!gcd(f, g).is_one()) continue;
    ++tested;
    ASSERT_EQ(phi(f * g), phi(f) * phi(g));
    ASSERT_EQ(tau(f * g), tau(f) * tau(g));
    ASSERT_EQ(mobius(f * g), mobius(f) * mobius(g));
  }
}

TEST(Arith, TauTableMatchesTau) {
  const auto t = tau_table(10);
  for (Word w = 1; w < t.size(); ++w) ASSERT_EQ(tau(P(w)), t[w]) << w;
}

TEST(Arith, TauPowerSum) {
  EXPECT_EQ(tau_power_sum(3, 1), 17);
  EXPECT_EQ(tau_power_sum(1, 5), 1);
  EXPECT_EQ(tau_power_sum(3, 0), 7);
  for (int N = 1; N <= 8; ++N) {
    for (int B = 0; B <= 3; ++B) {
      BigInt direct = 0;
      for (Word w = 1; w < (Word{1} << N); ++w) {
        BigInt t = tau(P(w)), p = 1;
        for (int k = 0; k < B; ++k) p *= t;
        direct += p;
      }
      ASSERT_EQ(tau_power_sum(N, B), Rat(direct));
    }
  }
}
