// Acceptance run: one PASS/FAIL line per criterion with its time limit.
// Exit status is 0 only when every criterion passes within its limit.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ff2/arith.hpp"
#include "ff2/beta.hpp"
#include "ff2/char_sums.hpp"
#include "ff2/extremal.hpp"
#include "ff2/sieve_weights.hpp"
#include "ff2/vdc.hpp"

using namespace ff2;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Poly2 P(Word w) { return Poly2::from_word(w); }

std::vector<TorusPoint> reduced_points(int maxdeg) {
  std::vector<TorusPoint> out{TorusPoint{}};
  for (Word s = 2; s < (Word{1} << (maxdeg + 1)); ++s) {
    for (Word u = 1; u < (Word{1} << P(s).degree()); ++u) {
      if (gcd(P(u), P(s)).is_one()) out.push_back(frac_part(P(u), P(s)));
    }
  }
  return out;
}

std::vector<Poly2> squarefree_up_to(int d) {
  std::vector<Poly2> out;
  for (Word s = 1; s < (Word{1} << (d + 1)); ++s) {
    if (is_squarefree(P(s))) out.push_back(P(s));
  }
  return out;
}

template <class W>
Rat direct_sum(int N, const TorusPoint& theta, W&& w) {
  Rat total = 0;
  for (Word f = 0; f < (Word{1} << N); ++f) {
    const Rat v = w(P(f));
    if (v != 0) total += e_rat(P(f), theta) * v;
  }
  return total;
}

Outcome orthogonality() {
  Outcome o;
  long checks = 0;
  for (Word h = 2; h < 128; ++h) {
    const int d = P(h).degree();
    for (Word f = 0; f < 256; ++f) {
      const std::int64_t expect = divides(P(h), P(f)) ? (std::int64_t{1} << d) : 0;
      if (indicator_sum(P(h), P(f)) != expect) o.ok = false;
      ++checks;
    }
  }
  const auto pts = reduced_points(4);
  for (int N = 1; N <= 8; ++N) {
    for (const auto& t : pts) {
      if (geom_sum_gn(N, t) != geom_sum_gn_enum(N, t)) o.ok = false;
      ++checks;
    }
    for (Word v = 0; v < (Word{1} << N); ++v) {
      const auto t = frac_part(P(v), Poly2::monomial(N));
      if (geom_sum_gn(N, t) != geom_sum_gn_enum(N, t)) o.ok = false;
      ++checks;
    }
  }
  o.detail = std::to_string(checks) + " exact checks";
  return o;
}

Outcome dft_parseval() {
  Outcome o;
  std::mt19937_64 g(11);
  auto rnd = [&] {
    Rat r(static_cast<long>(g() % 41) - 20, static_cast<long>(g() % 9) + 1);
    r.canonicalize();
    return r;
  };
  for (int i = 0; i < 1000; ++i) {
    Word h;
    do h = g() % 32; while (P(h).degree() < 1);
    ResidueTable F(P(h));
    for (auto& v : F.values) v = rnd();
    const auto hat = dft(F);
    if (!(idft(hat) == F)) o.ok = false;
    Rat lhs = 0, rhs = 0;
    for (const auto& v : F.values) lhs += v * v;
    for (const auto& v : hat.values) rhs += v * v;
    if (lhs != pow2(P(h).degree()) * rhs) o.ok = false;
  }
  for (int N = 1; N <= 6; ++N) {
    for (int i = 0; i < 50; ++i) {
      std::vector<Rat> F(std::size_t{1} << N);
      for (auto& v : F) v = rnd();
      if (wht_xn(F, N) != dft(ResidueTable(Poly2::monomial(N), F)).values) o.ok = false;
    }
  }
  o.detail = "1000 random tables, 300 wht cases";
  return o;
}

Outcome ramanujan() {
  Outcome o;
  long checks = 0;
  for (Word h = 2; h < 128; ++h) {
    for (Word c = 0; c < (Word{1} << P(h).degree()); ++c) {
      const auto v = ramanujan_sum(P(h), P(c));
      if (std::abs(v) > (std::int64_t{1} << gcd(P(c), P(h)).degree())) o.ok = false;
      ++checks;
    }
    if (is_squarefree(P(h)) && ramanujan_sum(P(h), Poly2::one()) != mobius(P(h))) o.ok = false;
  }
  o.detail = std::to_string(checks) + " (h, c) pairs";
  return o;
}

Outcome sieve_identities() {
  Outcome o;
  for (const auto& r : primes_up_to(5)) {
    Rat sl = 0, st = 0;
    for (Word f = 0; f < (Word{1} << r.degree()); ++f) {
      sl += lambda_r(r, P(f));
      st += tau2_r(r, P(f));
    }
    if (sl != pow2(r.degree()) || st != pow2(r.degree())) o.ok = false;
  }
  for (int Q = 1; Q <= 3; ++Q) {
    const auto ps = primes_below(Q);
    for (Word f = 0; f < 64; ++f) {
      Rat total = 0;
      for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << ps.size()); ++sub) {
        Poly2 s = Poly2::one();
        for (std::size_t i = 0; i < ps.size(); ++i) {
          if ((sub >> i) & 1u) s *= P(ps[i]);
        }
        std::int64_t inner = 0;
        for (const auto& t : units_mod(s)) inner += e_rat(P(f), frac_part(t, s));
        total += alpha(s) * inner;
      }
      if (total != lambda_tilde(Q, P(f))) o.ok = false;
    }
  }
  o.detail = "local means deg <= 5; complete series Q <= 3 on G_6";
  return o;
}

Outcome beta_equivalence() {
  Outcome o;
  long points = 0;
  for (int R = 1; R <= 3; ++R) {
    const Poly2 M = detail::product_of_primes_below(R);
    const auto conv = beta_conv_table(R);
    for (Word g = 0; g < (Word{1} << M.degree()); ++g) {
      const auto lam = frac_part(P(g), M);
      const Rat c = beta_closed(lam, R);
      if (c != conv.at(lam) || c < 0) o.ok = false;
      ++points;
    }
  }
  const Rat b0 = beta_closed(TorusPoint{}, 2);
  if (b0 != Rat(64, 25)) o.ok = false;
  o.detail = std::to_string(points) + " support points; beta(0,2)=" + to_string(b0);
  return o;
}

Outcome truncated_identity() {
  Outcome o;
  const auto p = Params::derive(6, Rat(1, 100), 0, 2, 2);
  const WeightTable w(SumKind::psi_prime, p);
  const auto pts = reduced_points(2);
  for (const auto& t : pts) {
    if (w.sum(t) != beta_trunc(t, 2, 2) * 64) o.ok = false;
  }
  const auto lam = alpha_table(AlphaKind::plain, 2);
  const auto hq = alpha_table(AlphaKind::prime, 2);
  auto direct = [&](const Poly2& f) -> Rat { return lam.evaluate(f + Poly2::one()) * hq.evaluate(f); };
  const Rat at0 = direct_sum(6, TorusPoint{}, direct);
  const Rat at1 = direct_sum(6, parse_torus("(1)/(x)"), direct);
  if (at0 != Rat(704, 5) || at1 != Rat(512, 5)) o.ok = false;
  if (w.sum(TorusPoint{}) != at0 || w.sum(parse_torus("(1)/(x)")) != at1) o.ok = false;
  o.detail = std::to_string(pts.size()) + " points; theta=0 -> " + to_string(at0) + ", theta=1/x -> " + to_string(at1);
  return o;
}

Outcome s2_closed_form() {
  Outcome o;
  long checks = 0;
  const auto pts = reduced_points(3);
  for (int N = 2; N <= 10; ++N) {
    for (int R = 1; 2 * R <= N + 1; ++R) {
      const auto p = Params::derive(N, Rat(1, 100), 0, R, 1);
      const WeightTable w(SumKind::lambda_trunc, p);
      for (const auto& base : pts) {
        for (int j = 0; j <= N + 2; ++j) {
          TorusPoint theta = base;
          if (j > 0) {
            const Poly2 xj = Poly2::monomial(j);
            theta = frac_part(base.num() * xj + base.den(), base.den() * xj);
          }
          const Rat sum = w.sum(theta);
          for (int n = R; n <= N - R + 1; ++n) {
            const auto d = dirichlet_approx(theta, n);
            if (sum != s2_closed(p, d.s, d.tail_ord)) o.ok = false;
            ++checks;
          }
        }
      }
    }
  }
  o.detail = std::to_string(checks) + " decompositions";
  return o;
}

Outcome prime_sum_bound() {
  Outcome o;
  Rat worst = 0;
  int worst_k = 0;
  for (int k = 1; k <= 14; ++k) {
    for (const auto& t : reduced_points(std::min(3, k / 2))) {
      const auto g = prime_sum_check(k, t);
      if (!g.ok) o.ok = false;
      // ratio error / (k 2^{(3k+5)/4}) compared via fourth powers
      Rat e4 = g.error * g.error;
      e4 *= e4;
      const Rat r = e4 / (Rat(BigInt(k) * k * k * k) * pow2(3 * k + 5));
      if (r > worst) {
        worst = r;
        worst_k = k;
      }
    }
  }
  o.detail = "max (error/bound)^4 = " + to_float_string(worst) + " at k=" + std::to_string(worst_k);
  return o;
}

Outcome explicit_bounds() {
  Outcome o;
  long checks = 0;
  const auto sq = squarefree_up_to(3);
  for (const auto& r : sq) {
    for (const auto& b : units_mod(r)) {
      for (const auto& q1 : sq) {
        const BigInt bound = 2 * tau(gcd(r, q1));
        for (const auto& q2 : sq) {
          if (inner_sum_S(b, r, q1, q2) > bound) o.ok = false;
          ++checks;
        }
      }
    }
  }
  for (const auto& r : sq) {
    for (const auto& b : units_mod(r)) {
      const auto target = frac_part(b, r);
      for (const auto& q : sq) {
        for (Word s = 1; s < (Word{1} << 7); ++s) {
          const auto c = denom_count(target, q, P(s));
          const int e = denom_count_bound_exponent(target, q, P(s));
          if (e < 0 ? c != 0 : c > (std::int64_t{1} << e)) o.ok = false;
          ++checks;
        }
      }
    }
  }
  o.detail = std::to_string(checks) + " exhaustive cases";
  return o;
}

Outcome end_to_end() {
  Outcome o;
  std::ostringstream d;
  const std::array<std::size_t, 4> small{0, 2, 2, 4};
  for (int N = 1; N <= 3; ++N) {
    const auto r = max_avoiding_set(N, ExtremalMode::exact);
    if (r.size != small[N] || !verify_avoiding(r.witness, N)) o.ok = false;
  }
  const auto p = Params::derive(12, Rat(1, 100));
  const auto cert = vdc_certify(p);
  d << "sum Psi=" << to_string(cert.total) << " min=" << to_string(cert.min_sum) << " floor=" << to_string(cert.floor)
    << " verdict=" << (cert.certified() ? "CERTIFIED" : "REFUTED");
  const auto ext = max_avoiding_set(12, ExtremalMode::exact);
  if (!verify_avoiding(ext.witness, 12)) o.ok = false;
  d << " alpha(G_12)=" << ext.size;
  if (cert.certified()) {
    d << " 2^N a0=" << to_float_string(cert.density_bound);
    if (!(Rat(static_cast<long>(ext.size)) <= cert.density_bound)) o.ok = false;
  }
  d << " a0=" << to_float_string(cert.a0) << " 2^-K=" << to_float_string(pow2(-p.K));
  d << " Psi-Psi' gap at 0, R=3 Q=1: " << to_string(prop31_gap(p, TorusPoint{}));
  const auto p2 = Params::derive(12, Rat(1, 100), std::nullopt, 3, 2);
  d << ", R=3 Q=2: " << to_string(prop31_gap(p2, TorusPoint{})) << " vs " << to_string(pow2(p.N - p.K) / 3);
  o.detail = d.str();
  return o;
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  out += "<exit " + std::to_string(pclose(f)) + ">";
  return out;
}

Outcome determinism() {
  Outcome o;
  const std::string bin = FF2_CLI_PATH;
  const std::vector<std::string> configs{
      "primes --max-deg 8",
      "taus --N 8",
      "weights --Q 3 --mode alpha-prime --format json",
      "beta --R 3 --mode both --float",
      "beta --R 3 --Q 2 --mode trunc",
      "vdc-verify --N 8 --R 2 --Q 2 --theta '(x)/(x^2+x+1)'",
      "scan --N 12 --eps 1/100",
      "extremal --N 14 --mode heuristic --seed 42",
      "exp-sum --N 10 --mode psi_prime --theta grid"};
  int same = 0;
  for (const auto& c : configs) {
    const std::string a = capture(bin + " " + c + " 2>&1");
    const std::string b = capture("FF2_THREADS=1 " + bin + " " + c + " 2>&1");
    if (a == b && a.find("<exit 0>") != std::string::npos) {
      ++same;
    } else {
      o.ok = false;
    }
  }
  o.detail = std::to_string(same) + "/" + std::to_string(configs.size()) + " configs byte-identical";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "orthogonality identities", 10, orthogonality},
      {2, "dft inversion, parseval, wht", 10, dft_parseval},
      {3, "ramanujan bound and mobius", 30, ramanujan},
      {4, "sieve weight identities", 30, sieve_identities},
      {5, "beta closed = conv, non-negative", 60, beta_equivalence},
      {6, "truncated beta identity", 60, truncated_identity},
      {7, "S2 closed form", 60, s2_closed_form},
      {8, "prime sum explicit constant", 300, prime_sum_bound},
      {9, "inner sum and counting bounds", 300, explicit_bounds},
      {10, "end-to-end bound at N=12", 600, end_to_end},
      {11, "cli determinism", 10, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.ok && secs <= c.limit_s;
    if (!pass) ++failures;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%gs", secs, c.limit_s);
    std::cout << "CRITERION " << c.id << " " << (pass ? "PASS" : "FAIL") << " [" << timing << "] " << c.name << ": "
              << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
