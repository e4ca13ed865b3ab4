#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orq/board.hpp"
#include "orq/graph.hpp"
#include "orq/random.hpp"

namespace orq {

/// A policy made an illegal move. The message names the policy.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builder side of either game. Instances carry per-game state; use clone()
/// on an unplayed prototype to get a fresh instance per game.
class BuilderPolicy {
 public:
  virtual ~BuilderPolicy() = default;
  virtual std::string id() const = 0;
  /// Next pair to build or query; nullopt means the builder has nothing more
  /// to try.
  virtual std::optional<Edge> next_edge(const Board& board, RandomStream& rng) = 0;
  virtual std::unique_ptr<BuilderPolicy> clone() const = 0;
  /// Why the builder stopped, if it stopped on its own.
  virtual std::string stop_reason() const { return {}; }
  /// Optional key for the position reached once the builder has seen
  /// `board`: equal keys promise the same future play up to an isomorphism of
  /// the boards. Used to memoise adversarial searches. Empty when the builder
  /// makes no such promise.
  virtual std::string transposition_key(const Board& board) const {
    (void)board;
    return {};
  }
};

class PainterPolicy {
 public:
  virtual ~PainterPolicy() = default;
  virtual std::string id() const = 0;
  /// Colour for edge e, which is not yet on the board.
  virtual Color paint(const Board& board, Edge e, RandomStream& rng) = 0;
  virtual std::unique_ptr<PainterPolicy> clone() const = 0;
};

enum class GameKind { online_ramsey, subgraph_query };

enum class Outcome {
  ongoing,
  red_clique,
  blue_clique,
  found,
  budget_exhausted,
  builder_stopped,
};

std::string to_string(GameKind k);
std::string to_string(Outcome o);
GameKind game_kind_from_string(const std::string& s);
Outcome outcome_from_string(const std::string& s);

struct Move {
  int turn = 0;  // 1-based
  Edge edge;
  char result = 'R';  // R/B painted, S/F query success/failure
  friend bool operator==(const Move&, const Move&) = default;
};

struct Transcript {
  GameKind kind = GameKind::online_ramsey;
  std::uint64_t seed = 0;
  std::string builder_id;
  std::string painter_id;  // "chance(p=...)" for the query game
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Move> moves;
  Outcome outcome = Outcome::ongoing;
  std::string stop_reason;

  std::string param(const std::string& key) const;
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

void write_transcript(std::ostream& out, const Transcript& t);
std::string to_text(const Transcript& t);
Transcript read_transcript(std::istream& in);
Transcript parse_transcript(const std::string& text);

/// Rebuild the final board of a transcript (R/S as red, B/F as blue).
Board replay_board(const Transcript& t, int turn_cap);

struct GameOptions {
  /// Stop at the first target hit. When false the game runs until the cap or
  /// until the builder stops, and the outcome records whether the target
  /// appeared at any point.
  bool stop_at_target = true;
  /// Called after every move with the board already updated.
  std::function<void(const Board&, const PlacedEdge&)> on_move;
  /// Receives the final board when set.
  Board* final_board = nullptr;
};

Transcript play_online_ramsey(BuilderPolicy& builder, PainterPolicy& painter,
                              int m, int n, int turn_cap, std::uint64_t seed,
                              const GameOptions& options = {});

Transcript play_subgraph_query(BuilderPolicy& builder, const SimpleGraph& target,
                               double p, int turn_cap, std::uint64_t seed,
                               const GameOptions& options = {});

int success_indicator(const Transcript& t);
int turns_used(const Transcript& t);

/// Short label for a target graph: "K<m>" for cliques, "H<k>" for half-graph
/// splits, otherwise "G<n>:u-w,...".
std::string graph_code(const SimpleGraph& g);
SimpleGraph graph_from_code(const std::string& code);

/// Shortest decimal form that round-trips through strtod.
std::string format_real(double x);

}  // namespace orq
