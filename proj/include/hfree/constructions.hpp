#pragma once

// Digit-permutation sets without nontrivial solutions of
// x_1 + ... + x_{k-1} = (k-1) x_k (mod p), and the layered graphs BC(k,p)
// (planted k-cycles) and BK(k,p) (planted k-cliques) built from them.
//
// Layer l holds u^l_0..u^l_{p-1}; u^l_i is vertex l*p + i with identity
// l*p + i + 1. For every i in Z_p and x in X the planted copy uses
// u^0_i, u^1_{i+x}, ..., u^{k-1}_{i+(k-1)x}.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfree/errors.hpp"
#include "hfree/graph.hpp"

namespace hfree {

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1U) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1U;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

struct DigitSet {
  unsigned a = 0;
  std::uint64_t b = 0;
  std::uint64_t p = 0;
  unsigned k = 0;
  std::vector<std::uint64_t> X;  // ascending

  std::size_t p_prime() const noexcept { return X.size(); }
};

// b = floor(log2 p), a = floor(log2 p / log2 log2 p).
inline std::pair<unsigned, unsigned> asymptotic_params(std::uint64_t p) {
  if (p < 16) throw InvalidArgument("asymptotic_params needs p >= 16");
  const double lp = std::log2(static_cast<double>(p));
  const auto b = static_cast<unsigned>(std::bit_width(p) - 1);
  const auto a = static_cast<unsigned>(std::floor(lp / std::log2(lp) + 1e-12));
  return {a, b};
}

// All a! numbers whose a base-b digits are a permutation of 0..a-1.
inline std::vector<std::uint64_t> digit_permutation_numbers(unsigned a, std::uint64_t b) {
  if (a == 0 || a > 12) throw InvalidArgument("digit count a must be 1..12");
  if (b < a) throw InvalidArgument("base b must be at least a");
  std::vector<std::uint64_t> digits(a);
  std::iota(digits.begin(), digits.end(), std::uint64_t{0});
  std::vector<std::uint64_t> out;
  do {
    std::uint64_t x = 0;
    std::uint64_t place = 1;
    for (unsigned i = 0; i < a; ++i) {
      x += digits[i] * place;
      place *= b;
    }
    out.push_back(x);
  } while (std::next_permutation(digits.begin(), digits.end()));
  std::sort(out.begin(), out.end());
  return out;
}

// Throws InvalidArgument unless (k-1)(a-1) < b, k * max(X) <= p, p prime and
// p > k. The first condition rules out carries when summing k-1 numbers.
inline DigitSet digit_perm_set(unsigned a, std::uint64_t b, std::uint64_t p, unsigned k) {
  if (k < 3) throw InvalidArgument("k must be >= 3");
  if (!is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
  if (p <= k) throw InvalidArgument("p must exceed k");
  if (static_cast<std::uint64_t>(k - 1) * (a - 1) >= b) {
    throw InvalidArgument("digit sums carry: need (k-1)(a-1) < b, got (" + std::to_string(k - 1) + ")(" +
                          std::to_string(a - 1) + ") >= " + std::to_string(b));
  }
  DigitSet s{a, b, p, k, digit_permutation_numbers(a, b)};
  if (s.X.back() * k > p) {
    throw InvalidArgument("max(X) = " + std::to_string(s.X.back()) + " exceeds p/k = " + std::to_string(p) + "/" +
                          std::to_string(k));
  }
  return s;
}

// Largest a (with the smallest admissible base b = (k-1)(a-1)+1) for which
// digit_perm_set(a, b, p, k) is valid.
inline std::pair<unsigned, std::uint64_t> auto_params(std::uint64_t p, unsigned k) {
  std::pair<unsigned, std::uint64_t> best{0, 0};
  for (unsigned a = 1; a <= 12; ++a) {
    const std::uint64_t b = std::max<std::uint64_t>(static_cast<std::uint64_t>(k - 1) * (a - 1) + 1, a);
    try {
      digit_perm_set(a, b, p, k);
      best = {a, b};
    } catch (const InvalidArgument&) {
      if (best.first != 0 && a > best.first) break;
    }
  }
  if (best.first == 0) throw InvalidArgument("no valid digit set for p = " + std::to_string(p));
  return best;
}

// Exhaustively checks that every k-tuple with x_1+..+x_{k-1} = (k-1)x_k mod p
// is constant.
inline bool verify_sum_property(std::span<const std::uint64_t> X, std::uint64_t p, unsigned k,
                                std::uint64_t cap = 100'000'000) {
  if (k < 2 || p < 2) throw InvalidArgument("need k >= 2 and p >= 2");
  const std::size_t s = X.size();
  double total = std::pow(static_cast<double>(s), static_cast<double>(k));
  if (total > static_cast<double>(cap)) {
    throw WorkCapExceeded("verify_sum_property would check " + std::to_string(total) + " tuples");
  }
  if (s == 0) return true;
  std::vector<std::size_t> idx(k - 1, 0);
  while (true) {
    std::uint64_t sum = 0;
    bool constant = true;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      sum = (sum + X[idx[i]] % p) % p;
      constant = constant && idx[i] == idx[0];
    }
    for (std::size_t last = 0; last < s; ++last) {
      const std::uint64_t rhs = detail::mul_mod((k - 1) % p, X[last] % p, p);
      if (rhs == sum && !(constant && idx[0] == last)) return false;
    }
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == s) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return true;
}

enum class LayeredKind { Cycle, Clique };

inline const char* to_string(LayeredKind kind) { return kind == LayeredKind::Cycle ? "bc" : "bk"; }

struct LayeredGraph {
  Graph graph;
  LayeredKind kind = LayeredKind::Cycle;
  unsigned k = 0;
  std::uint64_t p = 0;
  DigitSet digit_set;
  // Vertex sets of the planted copies, ordered by (i, x); each lists
  // u^0_i, u^1_{i+x}, ..., u^{k-1}_{i+(k-1)x}.
  std::vector<std::vector<Vertex>> planted;

  Vertex vertex(unsigned layer, std::uint64_t i) const noexcept {
    return static_cast<Vertex>(layer * p + i % p);
  }
};

namespace detail {

inline LayeredGraph build_layered(unsigned k, const DigitSet& set, LayeredKind kind) {
  if (set.k != 0 && set.k != k) throw InvalidArgument("digit set was validated for a different k");
  const DigitSet checked = digit_perm_set(set.a, set.b, set.p, k);
  if (checked.X != set.X) throw InvalidArgument("digit set does not match its parameters");
  const std::uint64_t p = set.p;
  if (static_cast<double>(k) * static_cast<double>(p) > 4e9) throw InvalidArgument("graph too large");
  LayeredGraph out;
  out.kind = kind;
  out.k = k;
  out.p = p;
  out.digit_set = set;
  std::vector<Edge> edges;
  for (std::uint64_t i = 0; i < p; ++i) {
    for (std::uint64_t x : set.X) {
      std::vector<Vertex> nodes(k);
      for (unsigned l = 0; l < k; ++l) nodes[l] = static_cast<Vertex>(l * p + (i + l * x) % p);
      if (kind == LayeredKind::Cycle) {
        for (unsigned l = 0; l < k; ++l) edges.push_back({nodes[l], nodes[(l + 1) % k]});
      } else {
        for (unsigned l = 0; l < k; ++l) {
          for (unsigned r = l + 1; r < k; ++r) edges.push_back({nodes[l], nodes[r]});
        }
      }
      out.planted.push_back(std::move(nodes));
    }
  }
  out.graph = Graph(static_cast<std::size_t>(k * p), edges);
  return out;
}

}  // namespace detail

// BC(k,p): planted k-cycles; k odd, k >= 5.
inline LayeredGraph build_bc(unsigned k, const DigitSet& set) {
  if (k < 5 || k % 2 == 0) throw InvalidArgument("BC(k,p) needs odd k >= 5");
  return detail::build_layered(k, set, LayeredKind::Cycle);
}

inline LayeredGraph build_bk(unsigned k, const DigitSet& set) {
  if (k < 4) throw InvalidArgument("BK(k,p) needs k >= 4");
  return detail::build_layered(k, set, LayeredKind::Clique);
}

// JSON sidecar written next to generated edge lists.
inline nlohmann::ordered_json sidecar(const LayeredGraph& g) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(g.kind);
  j["k"] = g.k;
  j["p"] = g.p;
  j["a"] = g.digit_set.a;
  j["b"] = g.digit_set.b;
  j["X"] = g.digit_set.X;
  j["planted_count"] = g.planted.size();
  return j;
}

}  // namespace hfree
