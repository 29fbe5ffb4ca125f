#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ff2/rational.hpp"

namespace ff2 {

/// N, eps and the derived K = floor((1/8 - eps) N), R = floor(N/4),
/// Q = floor(N/8). Any of K, R, Q may be overridden.
struct Params {
  int N = 0;
  Rat eps = 0;
  int K = 0;
  int R = 0;
  int Q = 0;
  bool overridden = false;

  static Params derive(int N, const Rat& eps, std::optional<int> K = {}, std::optional<int> R = {},
                       std::optional<int> Q = {}) {
    if (N < 1) throw std::domain_error("N must be >= 1");
    if (eps < 0 || eps >= Rat(1, 8)) throw std::domain_error("eps must lie in [0, 1/8)");
    Params p;
    p.N = N;
    p.eps = eps;
    const Rat k = (Rat(1, 8) - eps) * N;
    BigInt kf;
    mpz_fdiv_q(kf.get_mpz_t(), k.get_num_mpz_t(), k.get_den_mpz_t());
    p.K = static_cast<int>(kf.get_si());
    p.R = N / 4;
    p.Q = N / 8;
    if (K) p.K = *K;
    if (R) p.R = *R;
    if (Q) p.Q = *Q;
    p.overridden = K.has_value() || R.has_value() || Q.has_value();
    if (p.K < 0) throw std::domain_error("K must be >= 0");
    if (p.R < 1 || p.Q < 1) throw std::domain_error("R and Q must be >= 1");
    return p;
  }

  std::string describe() const {
    return "N=" + std::to_string(N) + " eps=" + eps.get_str() + " K=" + std::to_string(K) +
           " R=" + std::to_string(R) + " Q=" + std::to_string(Q);
  }
};

}  // namespace ff2
