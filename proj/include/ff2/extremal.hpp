#pragma once

// Largest A in G_N whose pairwise differences avoid {r + 1 : r prime in G_N}:
// a maximum independent set in the Cayley graph on (F_2^N, xor).
//
// Every prime of degree >= 2 is 1 at both x = 0 and x = 1, so r + 1 is a
// multiple of x^2 + x. Writing f = c + (x^2 + x) h with c in G_2, the graph
// is the Cartesian product of the 4-cycle 0 - x - 1 - (x+1) on c with
// H = Cayley(G_{N-2}, T), T = {(r+1)/(x^2+x) : 2 <= deg r < N}. Each c-layer
// of an independent set is independent in H, so alpha(G) <= 4 alpha(H), and
// the bound is met by I, I + t, I, I + t around the cycle whenever some t
// avoids I + I. The exact solver therefore searches H only.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ff2/arith.hpp"
#include "ff2/poly2.hpp"

namespace ff2 {

inline constexpr int kExactExtremalCap = 12;
inline constexpr int kHeuristicExtremalCap = 20;

/// {r + 1 : r irreducible, deg r < N}, ascending.
inline std::vector<Poly2> forbidden_set(int N) {
  if (N < 1) throw std::domain_error("N must be >= 1");
  std::vector<Poly2> out;
  if (N < 2) return out;
  for (Word r : primes_below(N)) out.push_back(Poly2::from_word(r ^ 1u));
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff no two elements of A differ by a forbidden element.
inline bool verify_avoiding(const std::vector<Poly2>& A, int N) {
  if (N < 1) throw std::domain_error("N must be >= 1");
  if (N > kSieveDegreeCap) throw std::length_error("verify_avoiding: N above sieve cap");
  for (const auto& a : A) {
    if (a.degree() >= N) throw std::domain_error("element outside G_N");
  }
  const auto& sieve = PrimeSieve::instance();
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      const Word d = A[i].to_word() ^ A[j].to_word();
      if (d != 0 && sieve.is_prime(d ^ 1u)) return false;
    }
  }
  return true;
}

namespace detail {

/// Exact maximum clique by branch and bound: greedy colouring bound on a
/// degeneracy ordering, with one-step recolouring of vertices whose colour
/// would not prune.
class CliqueSearch {
 public:
  using Row = std::vector<std::uint64_t>;

  explicit CliqueSearch(const std::vector<Row>& compat) : n_(static_cast<int>(compat.size())) {
    W_ = std::max(1, (n_ + 63) / 64);
    order_vertices(compat);
    adj_.assign(static_cast<std::size_t>(n_) * W_, 0);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (i != j && test(compat[perm_[i]], perm_[j])) set(row(i), j);
      }
    }
  }

  /// Maximum clique; `incumbent` is a known clique (original labels) that
  /// seeds the bound.
  std::vector<int> solve(const std::vector<int>& incumbent = {}) {
    best_.clear();
    std::vector<int> inv(n_);
    for (int i = 0; i < n_; ++i) inv[perm_[i]] = i;
    for (int v : incumbent) best_.push_back(inv[v]);
    nodes_ = 0;
    if (n_ == 0) return {};
    const auto depth = static_cast<std::size_t>(n_ + 1);
    P_.assign(depth * W_, 0);
    classes_.assign(depth, {});
    order_.assign(depth, std::vector<int>(n_));
    color_.assign(depth, std::vector<int>(n_));
    current_.assign(n_, 0);
    std::uint64_t* P = &P_[0];
    for (int i = 0; i < n_; ++i) set(P, i);
    expand(0);
    std::vector<int> out;
    for (int v : best_) out.push_back(perm_[v]);
    std::sort(out.begin(), out.end());
    return out;
  }

  long long nodes() const { return nodes_; }

 private:
  static bool test(const Row& r, int j) { return (r[j >> 6] >> (j & 63)) & 1u; }
  static void set(std::uint64_t* b, int j) { b[j >> 6] |= std::uint64_t{1} << (j & 63); }
  static void clear(std::uint64_t* b, int j) { b[j >> 6] &= ~(std::uint64_t{1} << (j & 63)); }
  std::uint64_t* row(int i) { return &adj_[static_cast<std::size_t>(i) * W_]; }

  int first(const std::uint64_t* b) const {
    for (int i = 0; i < W_; ++i) {
      if (b[i]) return i * 64 + std::countr_zero(b[i]);
    }
    return -1;
  }

  /// Min-width order: repeatedly remove a minimum-degree vertex; the last
  /// removed become the first searched.
  void order_vertices(const std::vector<Row>& compat) {
    std::vector<int> deg(n_, 0);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) deg[i] += (i != j && test(compat[i], j)) ? 1 : 0;
    }
    std::vector<char> alive(n_, 1);
    std::vector<int> seq;
    for (int it = 0; it < n_; ++it) {
      int pick = -1;
      for (int i = 0; i < n_; ++i) {
        if (alive[i] && (pick < 0 || deg[i] < deg[pick])) pick = i;
      }
      alive[pick] = 0;
      seq.push_back(pick);
      for (int j = 0; j < n_; ++j) {
        if (alive[j] && test(compat[pick], j)) --deg[j];
      }
    }
    perm_.assign(seq.rbegin(), seq.rend());
  }

  bool conflicts_once(const std::uint64_t* cls, int v, int& witness) {
    int count = 0;
    const std::uint64_t* a = row(v);
    for (int i = 0; i < W_ && count < 2; ++i) {
      const std::uint64_t x = cls[i] & a[i];
      if (x) {
        count += std::popcount(x);
        witness = i * 64 + std::countr_zero(x);
      }
    }
    return count == 1;
  }

  bool disjoint(const std::uint64_t* cls, int v) {
    const std::uint64_t* a = row(v);
    for (int i = 0; i < W_; ++i) {
      if (cls[i] & a[i]) return false;
    }
    return true;
  }

  void expand(int size) {
    ++nodes_;
    std::uint64_t* P = &P_[static_cast<std::size_t>(size) * W_];
    auto& classes = classes_[size];
    auto& order = order_[size];
    auto& color = color_[size];
    const int kmin = std::max(1, static_cast<int>(best_.size()) - size + 1);

    // colour P; classes below kmin are never branched on
    classes.clear();
    Row U(P, P + W_);
    Row Q(W_);
    int count = 0;
    while (first(U.data()) >= 0) {
      const int k = static_cast<int>(classes.size() / W_) + 1;
      std::copy(U.begin(), U.end(), Q.begin());
      classes.resize(classes.size() + W_, 0);
      for (int v = first(Q.data()); v >= 0; v = first(Q.data())) {
        clear(Q.data(), v);
        clear(U.data(), v);
        bool placed = false;
        if (k >= kmin && kmin > 1) {
          for (int c1 = 0; c1 < k - 1 && c1 < kmin - 1 && !placed; ++c1) {
            std::uint64_t* cls1 = &classes[static_cast<std::size_t>(c1) * W_];
            int w = -1;
            if (!conflicts_once(cls1, v, w)) continue;
            for (int c2 = c1 + 1; c2 < k - 1 && c2 < kmin - 1; ++c2) {
              std::uint64_t* cls2 = &classes[static_cast<std::size_t>(c2) * W_];
              if (disjoint(cls2, w)) {
                clear(cls1, w);
                set(cls2, w);
                set(cls1, v);
                placed = true;
                break;
              }
            }
          }
        }
        if (!placed) {
          std::uint64_t* cls = &classes[static_cast<std::size_t>(k - 1) * W_];
          set(cls, v);
          const std::uint64_t* a = row(v);
          for (int i = 0; i < W_; ++i) Q[i] &= ~a[i];
        }
      }
    }
    const int ncls = static_cast<int>(classes.size() / W_);
    for (int c = kmin - 1; c < ncls; ++c) {
      const std::uint64_t* cls = &classes[static_cast<std::size_t>(c) * W_];
      for (int i = 0; i < W_; ++i) {
        for (std::uint64_t x = cls[i]; x; x &= x - 1) {
          order[count] = i * 64 + std::countr_zero(x);
          color[count] = c + 1;
          ++count;
        }
      }
    }

    std::uint64_t* NP = P + W_;
    for (int i = count - 1; i >= 0; --i) {
      if (size + color[i] <= static_cast<int>(best_.size())) return;
      const int v = order[i];
      current_[size] = v;
      const std::uint64_t* a = row(v);
      bool any = false;
      for (int j = 0; j < W_; ++j) {
        NP[j] = P[j] & a[j];
        any |= NP[j] != 0;
      }
      if (!any) {
        if (size + 1 > static_cast<int>(best_.size())) {
          best_.assign(current_.begin(), current_.begin() + size + 1);
        }
      } else {
        expand(size + 1);
      }
      clear(P, v);
    }
  }

  int n_;
  int W_;
  std::vector<int> perm_;  // search index -> original label
  std::vector<std::uint64_t> adj_;
  std::vector<std::uint64_t> P_;
  std::vector<Row> classes_;
  std::vector<std::vector<int>> order_;
  std::vector<std::vector<int>> color_;
  std::vector<int> current_;
  std::vector<int> best_;
  long long nodes_ = 0;
};

/// Connection set T of H = Cayley(G_{N-2}, T), as word polynomials.
inline std::vector<Word> reduced_connection_set(int N) {
  std::vector<Word> T;
  for (int d = 2; d < N; ++d) {
    for (Word r : PrimeSieve::instance().of_degree(d)) T.push_back(word_divmod(r ^ 1u, 0b110).first);
  }
  return T;
}

/// Maximum independent set through a fixed vertex of a vertex-transitive
/// Cayley graph on {0, ..., 2^m - 1} with connection set T.
inline std::vector<Word> cayley_mis(int m, const std::vector<Word>& T, const std::vector<Word>& seed,
                                    long long* nodes) {
  const Word size = Word{1} << m;
  std::vector<char> edge(size, 0);
  for (Word t : T) edge[t] = 1;
  // translate the seed so it contains 0, then search among non-neighbours of 0
  std::vector<Word> cand;
  for (Word v = 1; v < size; ++v) {
    if (!edge[v]) cand.push_back(v);
  }
  const int n = static_cast<int>(cand.size());
  const int W = std::max(1, (n + 63) / 64);
  std::vector<CliqueSearch::Row> compat(n, CliqueSearch::Row(W, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && !edge[cand[i] ^ cand[j]]) compat[i][j >> 6] |= std::uint64_t{1} << (j & 63);
    }
  }
  std::vector<int> incumbent;
  if (!seed.empty()) {
    const Word shift = seed.front();
    std::vector<Word> moved;
    for (Word s : seed) {
      if ((s ^ shift) != 0) moved.push_back(s ^ shift);
    }
    for (Word v : moved) {
      incumbent.push_back(static_cast<int>(std::lower_bound(cand.begin(), cand.end(), v) - cand.begin()));
    }
  }
  CliqueSearch search(compat);
  const auto clique = search.solve(incumbent);
  if (nodes) *nodes = search.nodes();
  std::vector<Word> out{0};
  for (int i : clique) out.push_back(cand[i]);
  std::sort(out.begin(), out.end());
  return out;
}

/// Randomized greedy plus (1,2)-swaps for an independent set of a Cayley
/// graph on {0, ..., 2^m - 1}; deterministic for a given seed.
inline std::vector<Word> cayley_mis_heuristic(int m, const std::vector<Word>& T, std::uint64_t seed,
                                              int restarts) {
  const Word size = Word{1} << m;
  std::vector<Word> conn;
  for (Word t : T) {
    if (t != 0 && t < size) conn.push_back(t);
  }
  std::mt19937_64 rng(seed);
  std::vector<Word> best;
  std::vector<int> tight(size);
  std::vector<char> in(size);
  std::vector<Word> perm(size);
  std::iota(perm.begin(), perm.end(), Word{0});

  for (int round = 0; round < restarts; ++round) {
    std::fill(tight.begin(), tight.end(), 0);
    std::fill(in.begin(), in.end(), 0);
    std::vector<Word> A;
    auto add = [&](Word v) {
      in[v] = 1;
      A.push_back(v);
      for (Word t : conn) ++tight[v ^ t];
    };
    auto remove = [&](Word v) {
      in[v] = 0;
      A.erase(std::find(A.begin(), A.end(), v));
      for (Word t : conn) --tight[v ^ t];
    };
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Word v : perm) {
      if (tight[v] == 0 && !in[v]) add(v);
    }
    // (1,2)-swaps: drop u, add two non-adjacent vertices whose only
    // neighbour in A is u
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t ai = 0; ai < A.size() && !improved; ++ai) {
        const Word u = A[ai];
        std::vector<Word> free1;
        for (Word t : conn) {
          const Word v = u ^ t;
          if (!in[v] && tight[v] == 1) free1.push_back(v);
        }
        for (std::size_t i = 0; i < free1.size() && !improved; ++i) {
          for (std::size_t j = i + 1; j < free1.size(); ++j) {
            const Word d = free1[i] ^ free1[j];
            if (std::find(conn.begin(), conn.end(), d) != conn.end()) continue;
            remove(u);
            add(free1[i]);
            add(free1[j]);
            for (Word v : perm) {
              if (!in[v] && tight[v] == 0) add(v);
            }
            improved = true;
            break;
          }
        }
      }
    }
    if (A.size() > best.size()) best = A;
  }
  std::sort(best.begin(), best.end());
  return best;
}

/// Lifts an independent set I of H to one of G: I on the layers c = 0, 1 and
/// I + t on c = x, x + 1, with t outside I + I; 2|I| on the two opposite
/// layers when no such t exists.
inline std::vector<Poly2> lift_to_g(int N, const std::vector<Word>& I) {
  const Word size = Word{1} << (N - 2);
  std::vector<char> sums(size, 0);
  for (Word a : I) {
    for (Word b : I) sums[a ^ b] = 1;
  }
  std::optional<Word> t;
  for (Word c = 1; c < size; ++c) {
    if (!sums[c]) {
      t = c;
      break;
    }
  }
  std::vector<Poly2> A;
  auto put = [&](Word c, Word h) { A.push_back(Poly2::from_word(c ^ word_mul(h, 0b110))); };
  for (Word h : I) {
    put(0, h);
    put(1, h);
    if (t) {
      put(0b10, h ^ *t);
      put(0b11, h ^ *t);
    }
  }
  std::sort(A.begin(), A.end());
  return A;
}

/// Exact search directly on G_N, no reduction; for cross-checks at small N.
inline std::vector<Poly2> direct_mis(int N, long long* nodes = nullptr) {
  if (N > 10) throw std::length_error("direct search limited to N <= 10");
  std::vector<Word> T;
  for (Word r : primes_below(N)) T.push_back(r ^ 1u);
  const auto mis = cayley_mis(N, T, {}, nodes);
  std::vector<Poly2> out;
  for (Word w : mis) out.push_back(Poly2::from_word(w));
  return out;
}

}  // namespace detail

enum class ExtremalMode { exact, heuristic };

struct ExtremalResult {
  int N = 0;
  std::size_t size = 0;
  std::vector<Poly2> witness;
  bool optimal = false;  ///< true when produced by the exact search
  long long nodes = 0;
};

/// Largest avoiding set. Exact mode proves optimality (N <= 12); heuristic
/// mode returns a valid set (N <= 20).
inline ExtremalResult max_avoiding_set(int N, ExtremalMode mode, std::uint64_t seed = 1) {
  if (N < 1) throw std::domain_error("N must be >= 1");
  if (mode == ExtremalMode::exact && N > kExactExtremalCap) {
    throw std::length_error("exact extremal search: N above cost guard 12");
  }
  if (mode == ExtremalMode::heuristic && N > kHeuristicExtremalCap) {
    throw std::length_error("heuristic extremal search: N above cost guard 20");
  }
  ExtremalResult res;
  res.N = N;
  if (N <= 2) {
    // G_1 has no forbidden difference; G_2 is the 4-cycle.
    res.witness = {Poly2{}, Poly2::one()};
  } else {
    const auto T = detail::reduced_connection_set(N);
    const int m = N - 2;
    const int restarts = mode == ExtremalMode::exact ? 8 : 4;
    auto I = detail::cayley_mis_heuristic(m, T, seed, restarts);
    if (mode == ExtremalMode::exact) I = detail::cayley_mis(m, T, I, &res.nodes);
    res.witness = detail::lift_to_g(N, I);
    // the product bound 4 alpha(H) is attained only when the lift used all
    // four layers
    if (mode == ExtremalMode::exact && res.witness.size() != 4 * I.size()) {
      throw std::logic_error("layer lift incomplete; exact value not established");
    }
  }
  res.optimal = mode == ExtremalMode::exact;
  res.size = res.witness.size();
  return res;
}

}  // namespace ff2
