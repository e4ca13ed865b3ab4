#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orq/game.hpp"
#include "orq/graph.hpp"

namespace orq {

inline constexpr int kExactMaxVertices = 11;  // 55 pairs * 2 bits fit in 128
inline constexpr int kOnlineVertexCap = 9;
inline constexpr int kQueryVertexCap = 8;
inline constexpr int kQueryBudgetCap = 14;

/// Two-coloured graph on at most kExactMaxVertices vertices. In the query
/// game red means built and blue means failed.
struct ColoredGraph {
  int n = 0;
  std::array<std::uint16_t, kExactMaxVertices> red{};
  std::array<std::uint16_t, kExactMaxVertices> blue{};

  /// 0 untouched pair, 1 red, 2 blue.
  int label(int a, int b) const {
    if (red[a] >> b & 1) return 1;
    if (blue[a] >> b & 1) return 2;
    return 0;
  }
  void set(int a, int b, Color c);
  ColoredGraph permuted(const std::vector<int>& perm) const;  // v -> perm[v]
};

struct CanonicalForm {
  int n = 0;
  unsigned __int128 code = 0;
  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

/// Canonical labelling by colour refinement and individualisation, keeping
/// the smallest pair code over the leaves of the search tree.
CanonicalForm canonical_form(const ColoredGraph& g);

/// Reference isomorphism test over all permutations (n <= 8).
bool brute_force_isomorphic(const ColoredGraph& a, const ColoredGraph& b);

struct CanonicalColoredState {
  CanonicalForm form;
  int pool = 0;
  friend bool operator==(const CanonicalColoredState&,
                         const CanonicalColoredState&) = default;
};

struct CanonicalQueryState {
  CanonicalForm form;
  int pool = 0;
  int budget = 0;
  friend bool operator==(const CanonicalQueryState&,
                         const CanonicalQueryState&) = default;
};

struct SolverStats {
  std::int64_t nodes = 0;
  std::int64_t memo_entries = 0;
  std::int64_t memo_hits = 0;
  std::int64_t canonicalisations = 0;
};

// ---- Online Ramsey, adversarial painter -----------------------------------

struct OnlineRamseyResult {
  std::optional<int> value;  // nullopt: no forced win within the turn cap
  std::vector<Move> principal_variation;
  SolverStats stats;
};

/// Minimax turns for Builder to force a red K_m or blue K_n with at most
/// vertex_budget vertices in play.
OnlineRamseyResult solve_online_ramsey(int m, int n, int vertex_budget, int turn_cap,
                                       bool memo = true);
std::optional<int> exact_online_ramsey(int m, int n, int vertex_budget, int turn_cap);

/// Classical r(s,t) by exhaustive search over colourings of K_k for k up to
/// max_k; nullopt when every colouring of K_max_k still avoids both cliques.
std::optional<int> classical_ramsey_number(int s, int t, int max_k = 10);

// ---- Chance games -----------------------------------------------------------

/// Optimal success probability when every built pair is red with probability
/// p. Builder wins on a red copy of red_target or, when blue_clique > 0, a blue
/// K_blue_clique. The query game is blue_clique = 0.
class ChanceSolver {
 public:
  ChanceSolver(SimpleGraph red_target, int blue_clique, double p, int vertex_budget);
  ~ChanceSolver();
  ChanceSolver(ChanceSolver&&) noexcept;
  ChanceSolver& operator=(ChanceSolver&&) noexcept;

  double value(int budget);
  /// Best first pair under the given budget, in root labels (0, 1, ...).
  std::optional<Edge> best_first_move(int budget);
  const SolverStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double exact_query_value(const SimpleGraph& h, double p, int budget, int vertex_budget);

/// Expectimax over raw labelled states: no pool collapse, no canonical forms,
/// no memo. Test oracle for tiny budgets.
double brute_query_value(const SimpleGraph& h, double p, int budget, int vertex_budget);

struct ExactF {
  int budget = 0;
  double probability = 0.0;
};

ExactF exact_f(const SimpleGraph& h, double p, int vertex_budget);

struct SandwichReport {
  int m = 0, n = 0;
  double p = 0.0;
  int vertex_budget = 0;
  int r_random = 0;       // least budget with success >= 1/2 against chance colours
  double r_probability = 0.0;
  int f_red = 0;          // f(K_m, p)
  int f_blue = 0;         // f(K_n, 1-p)
  bool f_red_capped = false;   // scan stopped at min(f_red, f_blue)
  bool f_blue_capped = false;
  bool lower_holds = false;    // r_random <= min(f_red, f_blue)
  bool upper_holds = false;    // min(f_red, f_blue) <= 3 r_random
  bool holds() const { return lower_holds && upper_holds; }
};

/// Interleaved budget scan: r~(m,n;p) first, then f(K_m,p) and f(K_n,1-p)
/// side by side up to the first of them to reach 1/2.
SandwichReport sandwich_check(int m, int n, double p, int vertex_budget);

// ---- Adversarial check of a deterministic builder --------------------------

struct AdversarialReport {
  bool builder_always_wins = false;
  int worst_case_turns = 0;
  std::int64_t nodes = 0;
  std::int64_t memo_hits = 0;
  std::vector<Move> losing_line;  // a painter line that defeats the builder
};

/// Depth-first search over every painter reply to a deterministic builder.
/// Positions where the builder reports a transposition key are memoised.
AdversarialReport adversarial_check(const BuilderPolicy& prototype, int m, int n,
                                    int turn_cap, bool memo = true);

}  // namespace orq
