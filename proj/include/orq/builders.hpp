#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "orq/game.hpp"
#include "orq/rational.hpp"

namespace orq {

inline constexpr int kUnlimitedRestarts = -1;

// ---- Online Ramsey builders ------------------------------------------------

struct BranchingConfig {
  int m = 3;
  int n = 3;
  double L = 1.0;  // savings parameter
  int m0 = -1;     // -1: floor(m/2)+1
  int n0 = -1;     // -1: floor(sqrt(n))
  /// Upper bounds on classical r(s,t). Required when L > 1.
  std::function<long long(int, int)> ramsey_upper;

  int stop_m() const;
  int stop_n() const;
  /// ceil(C(a+b-2, a-1) / L).
  long long f(int a, int b) const;
  /// (m+n) f(m,n) + max(f(m0,n)^2, f(m,n0)^2).
  long long budget() const;
  /// Throws std::invalid_argument on bad sizes and std::domain_error when an
  /// L > 1 table does not certify the stopping sets.
  void validate() const;
};

/// Pivot-and-branch builder. From the current set it builds edges from one
/// pivot to the next f(m-i, n-j) - 1 vertices and moves into the red
/// neighbourhood once f(m-i-1, n-j) of them are red, or into the blue
/// neighbourhood once f(m-i, n-j-1) are blue. When m-i reaches m0 or n-j
/// reaches n0 it builds every pair of the surviving set.
std::unique_ptr<BuilderPolicy> branching_builder(const BranchingConfig& cfg);

/// Random pairs inside a fixed pool; stops when the pool is exhausted.
std::unique_ptr<BuilderPolicy> random_builder(int pool);
/// Picks the unused pool pair with the most red common neighbours, ties at
/// random. Aimed at triangle-avoiding painters.
std::unique_ptr<BuilderPolicy> red_greedy_builder(int pool);
/// Plays the given pairs in order, then stops.
std::unique_ptr<BuilderPolicy> scripted_builder(std::vector<Edge> edges);

// ---- Query-game builders ---------------------------------------------------

struct AbSplit {
  int a = 0;
  int b = 0;
  friend bool operator==(const AbSplit&, const AbSplit&) = default;
};

AbSplit choose_ab(int m);
/// min(1, b(2a+3-b) / (2(b-1))).
Rational alpha(int a, int b);
/// -(2a+b+1)/2 + alpha(a,b)/b, the exponent of p in the turn scale T.
Rational bnf_turn_exponent(int a, int b);

/// Queries pairs from one centre; every new neighbour is immediately
/// queried against the earlier ones. After ceil(c_T p^{-3/2}) centre queries
/// it restarts from a fresh centre.
std::unique_ptr<BuilderPolicy> triangle_builder(double p, double c_T = 4.0,
                                                int restarts = kUnlimitedRestarts);

struct BranchAndFillConfig {
  int m = 4;
  int a = -1;  // -1: choose_ab(m)
  int b = -1;
  double c_T = 1.0;
  int restarts = 3;  // extra attempts after the first; kUnlimitedRestarts
  AbSplit split() const;
  void validate() const;
};

/// Seed clique U on a vertices, harvest ceil(p^a T) common neighbours W,
/// then ceil(p^{-alpha}) rounds of pick w, probe W, fill N(w) in W.
/// T = c_T p^{bnf_turn_exponent(a,b)}. With a = 0 the seed is empty and W is
/// T fresh vertices. m = 3 delegates to triangle_builder.
std::unique_ptr<BuilderPolicy> branch_and_fill_builder(const BranchAndFillConfig& cfg,
                                                       double p);

/// Nested probing for H_k with N = the game's turn cap. U_1 is N/k fresh
/// vertices; stage i probes N/(k|U_i|) vertices of U_i against the rest of U_i
/// and keeps their common neighbourhood. Stops early if |U_i| < sqrt(N).
std::unique_ptr<BuilderPolicy> nested_halfgraph_builder(int k);

/// All pairs of vertices 0..v-1 in lexicographic order.
std::unique_ptr<BuilderPolicy> clique_fill_builder(int v);

/// Disjoint fresh pairs, one after another.
std::unique_ptr<BuilderPolicy> fresh_pair_builder();

}  // namespace orq
