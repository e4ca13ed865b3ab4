#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "orq/graph.hpp"

namespace orq {

/// Two-valued edge mark. In the online Ramsey game these are the paint
/// colours; in the query game red marks a built edge and blue a failed query.
enum class Color : std::uint8_t { red = 0, blue = 1 };

inline Color opposite(Color c) { return c == Color::red ? Color::blue : Color::red; }

struct PlacedEdge {
  Edge edge;
  Color color;
};

/// Sparse two-coloured graph over a lazily allocated vertex pool. Vertices
/// are allocated by touching them; vertex_count() is one past the largest
/// touched index and never exceeds vertex_cap().
class Board {
 public:
  explicit Board(int turn_cap);
  Board(int turn_cap, int vertex_cap);

  int turn_cap() const { return turn_cap_; }
  int vertex_cap() const { return vertex_cap_; }
  int turn() const { return static_cast<int>(history_.size()); }
  int vertex_count() const { return vertex_count_; }
  /// Lowest never-touched vertex.
  Vertex fresh_vertex() const { return vertex_count_; }

  std::optional<Color> color(Edge e) const;
  bool queried(Edge e) const { return marks_.contains(e.key()); }
  bool has(Edge e, Color c) const {
    auto it = marks_.find(e.key());
    return it != marks_.end() && it->second == c;
  }

  std::span<const Vertex> neighbors(Vertex v, Color c) const;
  int degree(Vertex v) const;
  int degree(Vertex v, Color c) const {
    return static_cast<int>(neighbors(v, c).size());
  }

  /// Why add() would reject this edge, or nullopt if legal.
  std::optional<std::string> illegal_reason(Edge e) const;
  void add(Edge e, Color c);
  void undo();

  const std::vector<PlacedEdge>& history() const { return history_; }

  std::vector<Vertex> common_neighbors(Vertex a, Vertex b, Color c) const;
  /// A clique of `size` vertices in colour c that contains edge e.
  std::optional<std::vector<Vertex>> find_clique_through(Edge e, Color c,
                                                         int size) const;
  bool has_clique_through(Edge e, Color c, int size) const {
    return find_clique_through(e, c, size).has_value();
  }
  /// Whether the colour-c layer contains a copy of h that uses edge e.
  bool has_copy_through(const SimpleGraph& h, Edge e, Color c) const;

  /// The colour-c layer as a SimpleGraph on vertex_count() vertices.
  SimpleGraph layer(Color c) const;

 private:
  int turn_cap_;
  int vertex_cap_;
  int vertex_count_ = 0;
  std::vector<std::vector<Vertex>> adj_[2];
  std::unordered_map<std::uint64_t, Color> marks_;
  std::vector<PlacedEdge> history_;
  std::vector<int> count_before_;
};

}  // namespace orq
