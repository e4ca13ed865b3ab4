#include "orq/board.hpp"

#include <algorithm>
#include <stdexcept>

namespace orq {

namespace {

int index_of(Color c) { return c == Color::red ? 0 : 1; }

}  // namespace

Board::Board(int turn_cap) : Board(turn_cap, 2 * turn_cap) {}

Board::Board(int turn_cap, int vertex_cap)
    : turn_cap_(turn_cap), vertex_cap_(vertex_cap) {
  if (turn_cap < 0 || vertex_cap < 0)
    throw std::invalid_argument("Board: negative cap");
}

std::optional<Color> Board::color(Edge e) const {
  auto it = marks_.find(e.key());
  if (it == marks_.end()) return std::nullopt;
  return it->second;
}

std::span<const Vertex> Board::neighbors(Vertex v, Color c) const {
  const auto& adj = adj_[index_of(c)];
  if (v < 0 || v >= static_cast<Vertex>(adj.size())) return {};
  return adj[v];
}

int Board::degree(Vertex v) const {
  return degree(v, Color::red) + degree(v, Color::blue);
}

std::optional<std::string> Board::illegal_reason(Edge e) const {
  if (e.u == e.w) return "self-loop at vertex " + std::to_string(e.u);
  if (e.u < 0 || e.w >= vertex_cap_)
    return "pair (" + std::to_string(e.u) + "," + std::to_string(e.w) +
           ") outside vertex pool of " + std::to_string(vertex_cap_);
  if (queried(e))
    return "pair (" + std::to_string(e.u) + "," + std::to_string(e.w) +
           ") already used";
  return std::nullopt;
}

void Board::add(Edge e, Color c) {
  if (auto why = illegal_reason(e)) throw std::invalid_argument(*why);
  count_before_.push_back(vertex_count_);
  vertex_count_ = std::max(vertex_count_, e.w + 1);
  for (auto& adj : adj_)
    if (static_cast<int>(adj.size()) < vertex_count_) adj.resize(vertex_count_);
  auto& adj = adj_[index_of(c)];
  adj[e.u].push_back(e.w);
  adj[e.w].push_back(e.u);
  marks_.emplace(e.key(), c);
  history_.push_back({e, c});
}

void Board::undo() {
  if (history_.empty()) throw std::logic_error("Board::undo on empty board");
  auto [e, c] = history_.back();
  history_.pop_back();
  auto& adj = adj_[index_of(c)];
  adj[e.u].pop_back();
  adj[e.w].pop_back();
  marks_.erase(e.key());
  vertex_count_ = count_before_.back();
  count_before_.pop_back();
}

std::vector<Vertex> Board::common_neighbors(Vertex a, Vertex b, Color c) const {
  if (degree(a, c) > degree(b, c)) std::swap(a, b);
  std::vector<Vertex> out;
  for (Vertex x : neighbors(a, c))
    if (x != b && has(Edge(x, b), c)) out.push_back(x);
  return out;
}

std::optional<std::vector<Vertex>> Board::find_clique_through(Edge e, Color c,
                                                              int size) const {
  if (size < 2 || !has(e, c)) return std::nullopt;
  std::vector<Vertex> base{e.u, e.w};
  if (size == 2) return base;
  auto common = common_neighbors(e.u, e.w, c);
  if (static_cast<int>(common.size()) < size - 2) return std::nullopt;
  if (size == 3) {
    base.push_back(common.front());
    return base;
  }
  std::sort(common.begin(), common.end());
  SimpleGraph local(static_cast<int>(common.size()));
  for (std::size_t i = 0; i < common.size(); ++i)
    for (std::size_t j = i + 1; j < common.size(); ++j)
      if (has(Edge(common[i], common[j]), c))
        local.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
  auto rest = find_clique(local, size - 2);
  if (!rest) return std::nullopt;
  for (Vertex i : *rest) base.push_back(common[i]);
  return base;
}

namespace {

struct AnchoredSearch {
  const Board& board;
  const std::vector<std::vector<Vertex>>& adj;  // pattern adjacency
  Color c;
  std::vector<Vertex> order;     // pattern vertices, anchors first
  std::vector<Vertex> image;     // pattern vertex -> board vertex, -1 if free

  bool taken(Vertex v) const { return std::find(image.begin(), image.end(), v) != image.end(); }

  bool extend(std::size_t pos) {
    if (pos == order.size()) return true;
    Vertex x = order[pos];
    const int need = static_cast<int>(adj[x].size());
    // Candidates come from the colour-c neighbourhood of some mapped pattern
    // neighbour when one exists; otherwise any board vertex.
    Vertex anchor = -1;
    for (Vertex y : adj[x])
      if (image[y] >= 0) { anchor = y; break; }
    auto try_vertex = [&](Vertex v) {
      // degree pruning matters on stars: most leaves can never host x
      if (board.degree(v, c) < need || taken(v)) return false;
      for (Vertex y : adj[x])
        if (image[y] >= 0 && !board.has(Edge(v, image[y]), c)) return false;
      image[x] = v;
      bool ok = extend(pos + 1);
      image[x] = -1;
      return ok;
    };
    if (anchor >= 0) {
      for (Vertex v : board.neighbors(image[anchor], c))
        if (try_vertex(v)) return true;
    } else {
      for (Vertex v = 0; v < board.vertex_count(); ++v)
        if (try_vertex(v)) return true;
    }
    return false;
  }
};

}  // namespace

bool Board::has_copy_through(const SimpleGraph& h, Edge e, Color c) const {
  if (!has(e, c)) return false;
  const int k = h.vertex_count();
  if (h.edge_count() == static_cast<std::int64_t>(k) * (k - 1) / 2)
    return has_clique_through(e, c, k);
  if (k > vertex_count()) return false;
  std::vector<std::vector<Vertex>> adj(k);
  for (Vertex z = 0; z < k; ++z) adj[z] = h.neighbors(z);
  for (const Edge& he : h.edges()) {
    for (int flip = 0; flip < 2; ++flip) {
      Vertex x = flip ? he.w : he.u;
      Vertex y = flip ? he.u : he.w;
      if (degree(e.u, c) < static_cast<int>(adj[x].size()) ||
          degree(e.w, c) < static_cast<int>(adj[y].size()))
        continue;
      AnchoredSearch s{*this, adj, c, {}, std::vector<Vertex>(k, -1)};
      s.image[x] = e.u;
      s.image[y] = e.w;
      // Breadth-first order from the anchor edge keeps candidate lists small.
      std::vector<char> seen(k, 0);
      seen[x] = seen[y] = 1;
      std::vector<Vertex> queue{x, y};
      for (std::size_t q = 0; q < queue.size(); ++q)
        for (Vertex z : adj[queue[q]])
          if (!seen[z]) { seen[z] = 1; queue.push_back(z); s.order.push_back(z); }
      for (Vertex z = 0; z < k; ++z)
        if (!seen[z]) s.order.push_back(z);
      if (s.extend(0)) return true;
    }
  }
  return false;
}

SimpleGraph Board::layer(Color c) const {
  SimpleGraph g(vertex_count_);
  for (const auto& [e, col] : history_)
    if (col == c) g.add_edge(e.u, e.w);
  return g;
}

}  // namespace orq
