#pragma once

// The van der Corput witness: Psi, Psi', their exponential sums over G_N,
// the prime-sum main terms, and the scans that certify or refute the
// witness properties at a given (N, eps).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ff2/arith.hpp"
#include "ff2/beta.hpp"
#include "ff2/char_sums.hpp"
#include "ff2/detail/parallel.hpp"
#include "ff2/laurent.hpp"
#include "ff2/params.hpp"
#include "ff2/rational.hpp"
#include "ff2/sieve_weights.hpp"

namespace ff2 {

inline constexpr int kExpSumDegreeCap = 24;
inline constexpr int kScanDegreeCap = 20;
inline constexpr int kPrimeSumDegreeCap = 18;

/// Psi(f) = Lambda'(f+1) H_Q(f) on G_N, 0 elsewhere.
inline Rat psi(const Poly2& f, const Params& p) {
  if (f.degree() >= p.N) return 0;
  const Poly2 g = f + Poly2::one();
  if (g.is_zero()) return 0;
  const int lp = lambda_prime(g);
  if (lp == 0) return 0;
  return lp * h_trunc(p.Q, f);
}

/// Psi'(f) = Lambda_R(f+1) H_Q(f) on G_N, 0 elsewhere.
inline Rat psi_prime(const Poly2& f, const Params& p) {
  if (f.degree() >= p.N) return 0;
  return lambda_trunc(p.R, f + Poly2::one()) * h_trunc(p.Q, f);
}

enum class SumKind { psi, psi_prime, lambda_prime, lambda_trunc };

namespace detail {

/// Bit i of result[f] is set iff primes[i] divides f, for all f in G_N.
inline std::vector<std::uint64_t> divisor_masks(const std::vector<Word>& primes, int N) {
  if (primes.size() > 64) throw std::length_error("too many primes for a mask");
  const Word size = Word{1} << N;
  std::vector<std::uint64_t> mask(size, 0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const Word r = primes[i];
    const std::uint64_t bit = std::uint64_t{1} << i;
    mask[0] |= bit;
    const int e = N - 1 - word_degree(r);
    if (e < 0) continue;
    Word prod = 0;
    for (Word k = 1; k < (Word{1} << (e + 1)); ++k) {
      prod ^= r << std::countr_zero(k);
      mask[prod] |= bit;
    }
  }
  return mask;
}

/// Mask whose parity with f gives e(f theta) for f in G_N: bit i is the
/// coefficient of x^{-1-i} in theta.
inline Word theta_mask(const TorusPoint& theta, int N) {
  if (theta.is_zero()) return 0;
  const LaurentWindow w = laurent_expand(theta, -N);
  const Word bits = w.bits().low_part(N).is_zero() ? 0 : w.bits().low_part(N).to_word();
  return reverse_bits(bits, N);
}

}  // namespace detail

/// The weights of one sum kind on G_N, stored as a class index per f and
/// one exact value per class. Classes are the distinct local patterns
/// (prime indicator, divisibility masks), so there are few of them.
class WeightTable {
 public:
  WeightTable(SumKind kind, const Params& p) : kind_(kind), N_(p.N) {
    if (p.N < 1 || p.N > kExpSumDegreeCap) throw std::length_error("exp_sum: N above cost guard 24");
    const Word size = Word{1} << p.N;
    id_.assign(size, 0);
    const auto& sieve = PrimeSieve::instance();
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<std::uint64_t> keys;
    auto class_of = [&](std::uint64_t key) {
      auto [it, fresh] = index.emplace(key, static_cast<std::uint32_t>(keys.size()));
      if (fresh) keys.push_back(key);
      return it->second;
    };

    switch (kind) {
      case SumKind::lambda_prime:
        for (Word f = 0; f < size; ++f) {
          id_[f] = class_of(sieve.is_prime(f) ? static_cast<std::uint64_t>(detail::word_degree(f)) : 0);
        }
        for (auto k : keys) values_.emplace_back(static_cast<long>(k));
        break;
      case SumKind::lambda_trunc: {
        const TruncatedSeries lam(SeriesKind::lambda, p.R);
        const auto masks = detail::divisor_masks(lam.primes(), p.N);
        for (Word f = 0; f < size; ++f) id_[f] = class_of(masks[f]);
        for (auto k : keys) values_.push_back(lam.value_of_mask(k));
        break;
      }
      case SumKind::psi: {
        const TruncatedSeries hq(SeriesKind::h, p.Q);
        const auto masks = detail::divisor_masks(hq.primes(), p.N);
        // key: Lambda'(f+1) in the top byte, the H_Q mask below.
        for (Word f = 0; f < size; ++f) {
          const Word g = f ^ 1u;
          const std::uint64_t lp = sieve.is_prime(g) ? static_cast<std::uint64_t>(detail::word_degree(g)) : 0;
          id_[f] = class_of(lp == 0 ? 0 : (lp << 56) | masks[f]);
        }
        for (auto k : keys) {
          const auto lp = static_cast<long>(k >> 56);
          values_.push_back(lp == 0 ? Rat(0) : lp * hq.value_of_mask(k & ((std::uint64_t{1} << 56) - 1)));
        }
        break;
      }
      case SumKind::psi_prime: {
        const TruncatedSeries lam(SeriesKind::lambda, p.R);
        const TruncatedSeries hq(SeriesKind::h, p.Q);
        if (lam.primes().size() + hq.primes().size() > 64) {
          throw std::length_error("psi_prime: R, Q too large for packed masks");
        }
        const auto mr = detail::divisor_masks(lam.primes(), p.N);
        const auto mq = detail::divisor_masks(hq.primes(), p.N);
        const auto shift = static_cast<unsigned>(hq.primes().size());
        for (Word f = 0; f < size; ++f) id_[f] = class_of((mr[f ^ 1u] << shift) | mq[f]);
        const std::uint64_t low = shift == 0 ? 0 : (~std::uint64_t{0} >> (64 - shift));
        for (auto k : keys) {
          values_.push_back(lam.value_of_mask(shift == 64 ? 0 : k >> shift) * hq.value_of_mask(k & low));
        }
        break;
      }
    }
  }

  SumKind kind() const noexcept { return kind_; }
  int N() const noexcept { return N_; }
  std::size_t size() const noexcept { return id_.size(); }

  Rat at(Word f) const { return values_[id_[f]]; }

  /// sum_{f in G_N} w(f) e(f theta).
  Rat sum(const TorusPoint& theta) const { return sum_masked(detail::theta_mask(theta, N_)); }

  Rat sum_masked(Word mask) const {
    const unsigned workers = detail::worker_count();
    std::vector<std::vector<std::int64_t>> partial(workers, std::vector<std::int64_t>(values_.size(), 0));
    detail::parallel_slices(id_.size(), workers, [&](unsigned w, std::size_t b, std::size_t e) {
      auto& acc = partial[w];
      for (std::size_t f = b; f < e; ++f) {
        acc[id_[f]] += (std::popcount(f & mask) & 1) ? -1 : 1;
      }
    });
    Rat total = 0;
    for (std::size_t c = 0; c < values_.size(); ++c) {
      std::int64_t n = 0;
      for (const auto& acc : partial) n += acc[c];
      if (n != 0) total += values_[c] * n;
    }
    return total;
  }

  /// All sums at theta = v / x^N, indexed by v.
  std::vector<Rat> grid_sums() const {
    BigInt D = 1;
    for (const auto& v : values_) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den_mpz_t());
    std::vector<BigInt> scaled;
    scaled.reserve(values_.size());
    BigInt largest = 0;
    for (const auto& v : values_) {
      scaled.push_back(v.get_num() * (D / v.get_den()));
      if (abs(scaled.back()) > largest) largest = abs(scaled.back());
    }
    std::vector<Rat> out(id_.size());
    const BigInt limit = BigInt(1) << (62 - N_);
    if (largest < limit) {
      std::vector<std::int64_t> a(id_.size());
      for (std::size_t f = 0; f < a.size(); ++f) a[f] = scaled[id_[f]].get_si();
      wht_reversed_inplace(std::span<std::int64_t>(a));
      for (std::size_t v = 0; v < a.size(); ++v) {
        out[v] = Rat(BigInt(static_cast<long>(a[v])), D);
        out[v].canonicalize();
      }
    } else {
      std::vector<BigInt> a(id_.size());
      for (std::size_t f = 0; f < a.size(); ++f) a[f] = scaled[id_[f]];
      wht_reversed_inplace(std::span<BigInt>(a));
      for (std::size_t v = 0; v < a.size(); ++v) {
        out[v] = Rat(a[v], D);
        out[v].canonicalize();
      }
    }
    return out;
  }

 private:
  SumKind kind_;
  int N_;
  std::vector<std::uint32_t> id_;
  std::vector<Rat> values_;
};

inline Rat exp_sum(SumKind kind, const Params& p, const TorusPoint& theta) {
  return WeightTable(kind, p).sum(theta);
}

/// mu(s)/phi(s) 2^N [ord(eta) < -N] [deg s < R].
inline Rat s2_closed(const Params& p, const Poly2& s, int ord_eta) {
  if (s.degree() >= p.R) return 0;
  if (!(ord_eta < -p.N)) return 0;
  return Rat(mobius(s)) / Rat(phi(s)) * pow2(p.N);
}

/// c(k, eta'): 1 if ord < -k-1, -1 if ord = -k-1, else 0.
inline int main_term_case(int k, int ord_eta) {
  if (ord_eta < -k - 1) return 1;
  if (ord_eta == -k - 1) return -1;
  return 0;
}

/// sum over deg f = k of Lambda'(f) e(f theta) = k * sum over primes.
inline Rat prime_exp_sum(int k, const TorusPoint& theta) {
  if (k < 1 || k > kPrimeSumDegreeCap) throw std::length_error("prime_exp_sum: k above cost guard 18");
  const Word mask = detail::theta_mask(theta, k + 1);
  std::int64_t total = 0;
  for (Word r : PrimeSieve::instance().of_degree(k)) total += (std::popcount(r & mask) & 1) ? -1 : 1;
  return Rat(total * k);
}

inline Rat main_term(int k, const Poly2& s, int ord_eta) {
  const int c = main_term_case(k, ord_eta);
  if (c == 0) return 0;
  return Rat(mobius(s) * c) / Rat(phi(s)) * pow2(k);
}

struct PrimeSumCheck {
  Poly2 u;
  Poly2 s;
  int ord_eta = kNegInfDegree;
  Rat sum;
  Rat main;
  Rat error;  ///< |sum - main|
  bool ok = false;  ///< error <= k 2^{(3k+5)/4}
};

/// Compares the prime sum with its main term. theta is split as u/s + eta
/// with deg s <= k/2 and ord eta < -deg s - floor(k/2): exactly when the
/// denominator is small enough, else by Dirichlet approximation.
inline PrimeSumCheck prime_sum_check(int k, const TorusPoint& theta) {
  PrimeSumCheck out;
  if (theta.den().degree() <= k / 2) {
    out.u = theta.num();
    out.s = theta.den();
  } else {
    auto d = dirichlet_approx(theta, k / 2 + 1);
    out.u = d.u;
    out.s = d.s;
    out.ord_eta = d.tail_ord;
  }
  out.sum = prime_exp_sum(k, theta);
  out.main = main_term(k, out.s, out.ord_eta);
  out.error = out.sum - out.main;
  if (out.error < 0) out.error = -out.error;
  // error <= k 2^{(3k+5)/4}  <=>  error^4 <= k^4 2^{3k+5}
  Rat lhs = out.error * out.error;
  lhs *= lhs;
  const Rat rhs = Rat(BigInt(k) * k * k * k) * pow2(3 * k + 5);
  out.ok = lhs <= rhs;
  return out;
}

/// T(theta) = (2^{N-K} + sum Psi e) / (2^{N-K} + sum Psi); empty when the
/// denominator is not positive.
inline std::optional<Rat> t_function(const Params& p, const TorusPoint& theta) {
  const WeightTable w(SumKind::psi, p);
  const Rat base = pow2(p.N - p.K);
  const Rat den = base + w.sum(TorusPoint{});
  if (den <= 0) return std::nullopt;
  return (base + w.sum(theta)) / den;
}

/// a0 = 2^{N-K} / (2^{N-K} + sum Psi).
inline Rat a0(const Params& p) {
  const Rat base = pow2(p.N - p.K);
  const Rat den = base + WeightTable(SumKind::psi, p).sum(TorusPoint{});
  if (den <= 0) throw std::domain_error("a0: non-positive denominator");
  return base / den;
}

/// |sum (Psi - Psi') e(f theta)|.
inline Rat prop31_gap(const Params& p, const TorusPoint& theta) {
  const Rat d = exp_sum(SumKind::psi, p, theta) - exp_sum(SumKind::psi_prime, p, theta);
  return d < 0 ? Rat(-d) : d;
}

/// Verdict of the finite check of the witness properties at (N, eps).
struct VdcCertificate {
  Params params;
  Rat total;       ///< sum Psi
  Rat min_sum;     ///< min over the grid of sum Psi e
  TorusPoint argmin;
  Rat floor;       ///< -2^{N-K}
  Rat a0;          ///< meaningful when total > -2^{N-K}
  Rat density_bound;  ///< 2^N a0
  bool min_ok = false;
  bool total_positive = false;
  bool certified() const { return min_ok && total_positive; }
};

/// Scans sum Psi e over theta = v/x^N, which is every value the sum takes.
inline VdcCertificate vdc_certify(const Params& p) {
  if (p.N > kScanDegreeCap) throw std::length_error("scan: N above cost guard 20");
  const WeightTable w(SumKind::psi, p);
  const auto sums = w.grid_sums();
  VdcCertificate c;
  c.params = p;
  c.total = sums[0];
  std::size_t best = 0;
  for (std::size_t v = 1; v < sums.size(); ++v) {
    if (sums[v] < sums[best]) best = v;
  }
  c.min_sum = sums[best];
  c.argmin = frac_part(Poly2::from_word(best), Poly2::monomial(p.N));
  c.floor = -pow2(p.N - p.K);
  c.min_ok = c.min_sum >= c.floor;
  c.total_positive = c.total > 0;
  const Rat den = pow2(p.N - p.K) + c.total;
  if (den > 0) {
    c.a0 = pow2(p.N - p.K) / den;
    c.density_bound = pow2(p.N) * c.a0;
  }
  return c;
}

struct ScanRow {
  TorusPoint theta;
  Rat value;
  DirichletApprox centre;
  bool small_denominator = false;
};

struct MajorArcScan {
  Params params;
  Rat threshold;          ///< (1/3) 2^{N-K}
  int degree_threshold = 0;
  int max_centre_degree = 0;
  std::vector<ScanRow> rows;
  bool certified() const {
    return std::all_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.small_denominator; });
  }
};

/// Default bound on deg s for a major arc: floor((1+eps) K) + ceil(log2 N).
inline int default_major_arc_degree(const Params& p) {
  const Rat t = (1 + p.eps) * p.K;
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  const int log2n = p.N <= 1 ? 0 : std::bit_width(static_cast<unsigned>(p.N - 1));
  return static_cast<int>(fl.get_si()) + log2n;
}

/// Every grid point with |sum Psi' e| >= (1/3) 2^{N-K}, with the first
/// continued-fraction centre u/s satisfying ord(theta - u/s) < -N.
inline MajorArcScan major_arc_scan(const Params& p, std::optional<int> degree_threshold = {}) {
  if (p.N > kScanDegreeCap) throw std::length_error("scan: N above cost guard 20");
  const WeightTable w(SumKind::psi_prime, p);
  const auto sums = w.grid_sums();
  MajorArcScan scan;
  scan.params = p;
  scan.threshold = pow2(p.N - p.K) / 3;
  scan.degree_threshold = degree_threshold.value_or(default_major_arc_degree(p));
  const Poly2 xn = Poly2::monomial(p.N);
  for (std::size_t v = 0; v < sums.size(); ++v) {
    const Rat mag = sums[v] < 0 ? Rat(-sums[v]) : sums[v];
    if (mag < scan.threshold) continue;
    ScanRow row;
    row.theta = frac_part(Poly2::from_word(v), xn);
    row.value = sums[v];
    row.centre = major_arc_centre(row.theta, p.N);
    row.small_denominator = row.centre.s.degree() <= scan.degree_threshold;
    scan.max_centre_degree = std::max(scan.max_centre_degree, row.centre.s.degree());
    scan.rows.push_back(std::move(row));
  }
  std::sort(scan.rows.begin(), scan.rows.end(),
            [](const ScanRow& a, const ScanRow& b) { return a.theta < b.theta; });
  return scan;
}

}  // namespace ff2
