#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orq {

using Vertex = std::int32_t;

/// Unordered vertex pair, stored with u < w.
struct Edge {
  Vertex u = 0;
  Vertex w = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), w(a < b ? b : a) {}

  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(w);
  }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple undirected graph with adjacency stored as fixed-width bit rows.
/// Values are immutable once built except through add_edge on an owned copy.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(int vertex_count);
  SimpleGraph(int vertex_count, std::span<const Edge> edges);

  int vertex_count() const { return n_; }
  std::int64_t edge_count() const { return edge_count_; }

  bool adjacent(Vertex a, Vertex b) const {
    return (row_ptr(a)[b >> 6] >> (b & 63)) & 1U;
  }
  void add_edge(Vertex a, Vertex b);

  int degree(Vertex v) const;
  std::vector<Vertex> neighbors(Vertex v) const;
  std::vector<Edge> edges() const;

  /// Raw adjacency row of v; words() 64-bit words, bit b set iff v~b.
  std::span<const std::uint64_t> row(Vertex v) const {
    return {row_ptr(v), static_cast<std::size_t>(words_)};
  }
  int words() const { return words_; }

  SimpleGraph induced(std::span<const Vertex> vertices) const;

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

 private:
  const std::uint64_t* row_ptr(Vertex v) const {
    return bits_.data() + static_cast<std::size_t>(v) * words_;
  }
  std::uint64_t* row_ptr(Vertex v) {
    return bits_.data() + static_cast<std::size_t>(v) * words_;
  }

  int n_ = 0;
  int words_ = 0;
  std::int64_t edge_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Named constructors.
SimpleGraph complete_graph(int n);
SimpleGraph cycle_graph(int n);
SimpleGraph star_graph(int leaves);
SimpleGraph empty_graph(int n);

/// H_k: clique a_1..a_k, independent set b_1..b_k, a_i ~ b_j iff i <= j.
/// a_i is vertex i-1 and b_j is vertex k+j-1.
struct HalfGraphSplit {
  int k = 0;
  SimpleGraph graph;

  Vertex a(int i) const { return i - 1; }
  Vertex b(int j) const { return k + j - 1; }
};

HalfGraphSplit make_half_graph_split(int k);

struct DegeneracyResult {
  std::vector<Vertex> ordering;  // v_1 .. v_n
  std::vector<int> back_degree;  // indexed by position in ordering
  int max_back_degree = 0;
};

int max_matching_size(const SimpleGraph& g);

inline constexpr int kVertexCoverCap = 24;
int min_vertex_cover_size(const SimpleGraph& g);
/// Same, for a graph given as bitmask rows (bit w of rows[v] set iff v~w).
int min_vertex_cover_size(std::span<const std::uint32_t> rows);

bool contains_clique(const SimpleGraph& g, int m);
/// Vertices of some m-clique, if one exists.
std::optional<std::vector<Vertex>> find_clique(const SimpleGraph& g, int m);

DegeneracyResult degeneracy_peel(const SimpleGraph& g);

inline constexpr int kJumbledExhaustiveCap = 20;
bool is_jumbled(const SimpleGraph& g, double p, int min_size, double eps);

/// Sampled jumbledness check for graphs above the exhaustive cap. The verdict
/// only covers the sampled sets and is never authoritative.
struct SampledJumbleVerdict {
  bool jumbled = true;
  bool authoritative = false;
  std::int64_t sets_checked = 0;
};
class RandomStream;
SampledJumbleVerdict is_jumbled_sampled(const SimpleGraph& g, double p,
                                        int min_size, double eps,
                                        std::int64_t samples,
                                        RandomStream& rng);

/// Injective vertex-ordered embeddings of K_m (m! times the clique count).
std::uint64_t count_labeled_clique_copies(int m, const SimpleGraph& g);

/// Injective labeled embeddings of H_2, a triangle with a pendant edge:
/// the sum over v of 2 t(v) (deg v - 2), t(v) the triangles at v.
std::uint64_t count_labeled_h2_copies(const SimpleGraph& g);

inline constexpr int kSubgraphPatternCap = 8;
/// Injective labeled embeddings of h into g.
std::uint64_t count_labeled_subgraph_copies(const SimpleGraph& h,
                                            const SimpleGraph& g);

// Edge-list text format: "v=<n>" then one "u w" pair per line.
void write_edge_list(std::ostream& out, const SimpleGraph& g);
std::string to_edge_list(const SimpleGraph& g);
SimpleGraph read_edge_list(std::istream& in);
SimpleGraph parse_edge_list(const std::string& text);

}  // namespace orq
