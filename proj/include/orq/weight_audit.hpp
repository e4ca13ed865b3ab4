#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orq/board.hpp"
#include "orq/game.hpp"

namespace orq {

// Weights are written for the red side. The blue mirror is the same code with
// side = Color::blue and p replaced by 1-p.

inline constexpr double kAuditSubsetCap = 1e6;

/// p^{C(|U|,2) - e_side(U)} if no pair inside U carries the other colour,
/// else 0. Vertices of U need not be touched yet.
double red_weight(const Board& board, std::span<const Vertex> U, double p,
                  Color side = Color::red);

/// Minimum vertex cover of the side-coloured graph induced on U.
int red_cover(const Board& board, std::span<const Vertex> U, Color side = Color::red);

/// Sum of red_weight over k-sets U of a `universe`-vertex pool whose red cover
/// is at least c. The pool is 0..universe-1; universe < 0 means
/// board.vertex_count(). Pool vertices beyond the board are untouched and are
/// counted combinatorially. Throws CapExceeded when C(vertex_count, k) > 1e6.
double aggregate_weight(const Board& board, int k, int c, double p, int universe = -1,
                        Color side = Color::red);

struct SubsetRecord {
  std::vector<Vertex> U;
  double weight = 0;
  int cover = 0;
};

/// Full recomputation over every k-subset of 0..universe-1. Test oracle and
/// debugging aid; no combinatorial shortcut.
struct WeightSnapshot {
  int k = 0;
  int c = 0;
  double p = 0;
  std::vector<SubsetRecord> subsets;  // colex order
  double aggregate = 0;               // sum of weights with cover >= c
};
WeightSnapshot weight_snapshot(const Board& board, int k, int c, double p, int universe = -1,
                               Color side = Color::red);

/// k-sets (within 0..universe-1) whose red cover reached c on the move just
/// played. Only sets containing both endpoints of the new edge can change, so
/// only those are examined. Empty unless the edge has colour `side`.
std::vector<std::vector<Vertex>> c_critical_events(const Board& after, const PlacedEdge& e,
                                                   int c, int k, int universe = -1,
                                                   Color side = Color::red);

struct AuditReport {
  std::string builder_id;
  int m = 0;
  int c = 0;
  double p = 0;
  int N = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int universe = 0;  // 2N
  double mean = 0;
  double std_error = 0;
  double bound = 0;  // p^{C(m,2)-c(c-1)} (2N)^{m-c}
  bool verdict = false;  // mean + 3 SE <= bound
  double max_sample = 0;
  /// Games where w_{m, floor(m/2)}(N) fell below the number of red K_m.
  int clique_count_violations = 0;

  std::string to_json() const;
};

double audit_bound(int m, int c, double p, int N);

/// Plays `trials` online Ramsey games of clones of `builder` against
/// random_painter(p) for N turns each (no stop at a monochromatic clique) and
/// records w_{m,c}(N) over a pool of 2N vertices.
AuditReport audit_run(const BuilderPolicy& builder, int m, int c, double p, int N, int trials,
                      std::uint64_t seed);

}  // namespace orq
