#include "orq/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <queue>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "orq/random.hpp"

namespace orq {

namespace {

int word_count(int n) { return (n + 63) / 64; }

void check_vertex(const SimpleGraph& g, Vertex v) {
  if (v < 0 || v >= g.vertex_count()) {
    throw std::out_of_range("vertex " + std::to_string(v) +
                            " outside [0, " + std::to_string(g.vertex_count()) +
                            ")");
  }
}

}  // namespace

SimpleGraph::SimpleGraph(int vertex_count)
    : n_(vertex_count), words_(word_count(vertex_count)) {
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
  bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

SimpleGraph::SimpleGraph(int vertex_count, std::span<const Edge> edges)
    : SimpleGraph(vertex_count) {
  for (const Edge& e : edges) add_edge(e.u, e.w);
}

void SimpleGraph::add_edge(Vertex a, Vertex b) {
  check_vertex(*this, a);
  check_vertex(*this, b);
  if (a == b) throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
  if (adjacent(a, b)) return;
  row_ptr(a)[b >> 6] |= std::uint64_t{1} << (b & 63);
  row_ptr(b)[a >> 6] |= std::uint64_t{1} << (a & 63);
  ++edge_count_;
}

int SimpleGraph::degree(Vertex v) const {
  int d = 0;
  for (std::uint64_t word : row(v)) d += std::popcount(word);
  return d;
}

std::vector<Vertex> SimpleGraph::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  auto r = row(v);
  for (int i = 0; i < words_; ++i) {
    std::uint64_t word = r[i];
    while (word) {
      out.push_back(i * 64 + std::countr_zero(word));
      word &= word - 1;
    }
  }
  return out;
}

std::vector<Edge> SimpleGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (Vertex v = 0; v < n_; ++v) {
    for (Vertex w : neighbors(v)) {
      if (w > v) out.emplace_back(v, w);
    }
  }
  return out;
}

SimpleGraph SimpleGraph::induced(std::span<const Vertex> vertices) const {
  SimpleGraph out(static_cast<int>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (adjacent(vertices[i], vertices[j])) {
        out.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
      }
    }
  }
  return out;
}

SimpleGraph complete_graph(int n) {
  SimpleGraph g(n);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) g.add_edge(a, b);
  return g;
}

SimpleGraph cycle_graph(int n) {
  SimpleGraph g(n);
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  for (Vertex a = 0; a < n; ++a) g.add_edge(a, (a + 1) % n);
  return g;
}

SimpleGraph star_graph(int leaves) {
  SimpleGraph g(leaves + 1);
  for (Vertex v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

SimpleGraph empty_graph(int n) { return SimpleGraph(n); }

HalfGraphSplit make_half_graph_split(int k) {
  if (k < 1) throw std::invalid_argument("H_k needs k >= 1");
  HalfGraphSplit h{k, SimpleGraph(2 * k)};
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) h.graph.add_edge(h.a(i), h.a(j));
    for (int j = i; j <= k; ++j) h.graph.add_edge(h.a(i), h.b(j));
  }
  return h;
}

int max_matching_size(const SimpleGraph& g) {
  using BoostGraph =
      boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BoostGraph bg(static_cast<std::size_t>(g.vertex_count()));
  for (const Edge& e : g.edges()) boost::add_edge(e.u, e.w, bg);
  std::vector<boost::graph_traits<BoostGraph>::vertex_descriptor> mate(
      static_cast<std::size_t>(g.vertex_count()));
  boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
  return static_cast<int>(boost::matching_size(bg, &mate[0]));
}

namespace {

int cover_search(std::span<const std::uint32_t> rows, int start_k) {
  const int n = static_cast<int>(rows.size());
  const std::uint32_t all = (n == 32) ? ~0U : ((1U << n) - 1U);
  auto covers = [&](std::uint32_t cover) {
    std::uint32_t outside = all & ~cover;
    while (outside) {
      const int v = std::countr_zero(outside);
      outside &= outside - 1;
      if (rows[v] & ~cover) return false;
    }
    return true;
  };
  for (int k = std::max(start_k, 0); k <= n; ++k) {
    if (k == 0) {
      if (covers(0)) return 0;
      continue;
    }
    // Gosper's hack over all k-subsets.
    std::uint32_t s = (k == 32) ? ~0U : ((1U << k) - 1U);
    while (s <= all) {
      if (covers(s)) return k;
      const std::uint32_t c = s & (~s + 1U);
      const std::uint32_t r = s + c;
      if (r == 0) break;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  return n;
}

}  // namespace

int min_vertex_cover_size(std::span<const std::uint32_t> rows) {
  if (rows.size() > static_cast<std::size_t>(kVertexCoverCap)) {
    throw CapExceeded("min_vertex_cover_size: " + std::to_string(rows.size()) +
                      " vertices exceeds exhaustive cap of " +
                      std::to_string(kVertexCoverCap));
  }
  return cover_search(rows, 0);
}

int min_vertex_cover_size(const SimpleGraph& g) {
  const int n = g.vertex_count();
  if (n > kVertexCoverCap) {
    throw CapExceeded("min_vertex_cover_size: " + std::to_string(n) +
                      " vertices exceeds exhaustive cap of " +
                      std::to_string(kVertexCoverCap));
  }
  if (g.edge_count() == 0) return 0;
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) rows[v] = static_cast<std::uint32_t>(g.row(v)[0]);
  // A maximum matching lower-bounds every cover.
  return cover_search(rows, max_matching_size(g));
}

namespace {

// Bitset clique search. `needed` counts vertices still to choose; candidates
// are restricted to vertices above the last chosen one so each clique is
// visited once.
class CliqueCounter {
 public:
  CliqueCounter(const SimpleGraph& g, int target, bool stop_at_first)
      : g_(g), target_(target), stop_(stop_at_first),
        scratch_(static_cast<std::size_t>(target + 1) * g.words()) {}

  std::uint64_t run() {
    const int w = g_.words();
    std::uint64_t* all = scratch_.data();
    std::fill(all, all + w, 0);
    for (Vertex v = 0; v < g_.vertex_count(); ++v) all[v >> 6] |= std::uint64_t{1} << (v & 63);
    extend(0, target_);
    return found_;
  }

 private:
  int popcount(const std::uint64_t* set) const {
    int c = 0;
    for (int i = 0; i < g_.words(); ++i) c += std::popcount(set[i]);
    return c;
  }

  void extend(int level, int needed) {
    const int w = g_.words();
    const std::uint64_t* cand = scratch_.data() + static_cast<std::size_t>(level) * w;
    if (needed == 0) {
      ++found_;
      return;
    }
    if (needed == 1) {
      found_ += static_cast<std::uint64_t>(popcount(cand));
      return;
    }
    if (popcount(cand) < needed) return;
    std::uint64_t* next = scratch_.data() + static_cast<std::size_t>(level + 1) * w;
    for (int i = 0; i < w; ++i) {
      std::uint64_t word = cand[i];
      while (word) {
        const Vertex v = i * 64 + std::countr_zero(word);
        word &= word - 1;
        auto row = g_.row(v);
        // Keep only neighbours of v above v.
        for (int j = 0; j < w; ++j) {
          std::uint64_t mask = cand[j] & row[j];
          if (j < i) mask = 0;
          else if (j == i) mask &= word;
          next[j] = mask;
        }
        extend(level + 1, needed - 1);
        if (stop_ && found_ > 0) return;
      }
    }
  }

  const SimpleGraph& g_;
  int target_;
  bool stop_;
  std::vector<std::uint64_t> scratch_;
  std::uint64_t found_ = 0;
};

}  // namespace

bool contains_clique(const SimpleGraph& g, int m) {
  if (m < 1) throw std::invalid_argument("contains_clique needs m >= 1");
  if (m > g.vertex_count()) return false;
  return CliqueCounter(g, m, true).run() > 0;
}

std::optional<std::vector<Vertex>> find_clique(const SimpleGraph& g, int m) {
  if (m < 1) throw std::invalid_argument("find_clique needs m >= 1");
  if (m > g.vertex_count()) return std::nullopt;
  std::vector<Vertex> chosen;
  auto search = [&](auto&& self, std::vector<Vertex> cand) -> bool {
    if (static_cast<int>(chosen.size()) == m) return true;
    if (static_cast<int>(chosen.size() + cand.size()) < m) return false;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      std::vector<Vertex> next;
      for (std::size_t j = i + 1; j < cand.size(); ++j)
        if (g.adjacent(cand[i], cand[j])) next.push_back(cand[j]);
      chosen.push_back(cand[i]);
      if (self(self, std::move(next))) return true;
      chosen.pop_back();
    }
    return false;
  };
  std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  if (search(search, std::move(all))) return chosen;
  return std::nullopt;
}

std::uint64_t count_labeled_clique_copies(int m, const SimpleGraph& g) {
  if (m < 2) throw std::invalid_argument("count_labeled_clique_copies needs m >= 2");
  if (m > g.vertex_count()) return 0;
  std::uint64_t count = CliqueCounter(g, m, false).run();
  for (int i = 2; i <= m; ++i) count *= static_cast<std::uint64_t>(i);
  return count;
}

std::uint64_t count_labeled_h2_copies(const SimpleGraph& g) {
  const int n = g.vertex_count();
  // tri[v] collects each triangle at v twice, once per edge at v.
  std::vector<std::uint64_t> tri(static_cast<std::size_t>(n), 0);
  for (Vertex u = 0; u < n; ++u) {
    auto ru = g.row(u);
    for (Vertex w : g.neighbors(u)) {
      if (w < u) continue;
      auto rw = g.row(w);
      std::uint64_t common = 0;
      for (int i = 0; i < g.words(); ++i) common += std::popcount(ru[i] & rw[i]);
      tri[u] += common;
      tri[w] += common;
    }
  }
  std::uint64_t total = 0;
  for (Vertex v = 0; v < n; ++v) {
    const std::uint64_t d = static_cast<std::uint64_t>(g.degree(v));
    if (d >= 2) total += tri[v] * (d - 2);  // 2 t(v) (d - 2)
  }
  return total;
}

DegeneracyResult degeneracy_peel(const SimpleGraph& g) {
  const int n = g.vertex_count();
  DegeneracyResult result;
  result.ordering.assign(static_cast<std::size_t>(n), 0);
  result.back_degree.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> degree(static_cast<std::size_t>(n));
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  using Item = std::pair<int, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (Vertex v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    heap.emplace(degree[v], v);
  }
  // Peel a minimum-degree vertex; it takes the last free slot of the ordering.
  for (int slot = n - 1; slot >= 0; --slot) {
    Vertex v;
    for (;;) {
      auto [d, cand] = heap.top();
      heap.pop();
      if (!removed[cand] && d == degree[cand]) {
        v = cand;
        break;
      }
    }
    removed[v] = 1;
    result.ordering[slot] = v;
    result.back_degree[slot] = degree[v];
    result.max_back_degree = std::max(result.max_back_degree, degree[v]);
    for (Vertex w : g.neighbors(v)) {
      if (!removed[w]) heap.emplace(--degree[w], w);
    }
  }
  return result;
}

namespace {

bool within_band(std::int64_t edges, int size, double p, double eps) {
  const double expected = p * (static_cast<double>(size) * (size - 1) / 2.0);
  const double slack = 1e-9 * std::max(1.0, expected);
  return edges >= (1.0 - eps) * expected - slack &&
         edges <= (1.0 + eps) * expected + slack;
}

}  // namespace

bool is_jumbled(const SimpleGraph& g, double p, int min_size, double eps) {
  const int n = g.vertex_count();
  if (n > kJumbledExhaustiveCap) {
    throw CapExceeded("is_jumbled: " + std::to_string(n) +
                      " vertices exceeds exhaustive cap of " +
                      std::to_string(kJumbledExhaustiveCap) +
                      "; use is_jumbled_sampled");
  }
  const std::uint32_t total = 1U << n;
  std::vector<std::uint16_t> edges_in(total, 0);
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    const int v = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    edges_in[mask] = static_cast<std::uint16_t>(
        edges_in[rest] + std::popcount(static_cast<std::uint32_t>(g.row(v)[0]) & rest));
    const int size = std::popcount(mask);
    if (size >= min_size && !within_band(edges_in[mask], size, p, eps)) return false;
  }
  return true;
}

SampledJumbleVerdict is_jumbled_sampled(const SimpleGraph& g, double p,
                                        int min_size, double eps,
                                        std::int64_t samples,
                                        RandomStream& rng) {
  SampledJumbleVerdict verdict;
  const int n = g.vertex_count();
  if (min_size > n) return verdict;
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (std::int64_t s = 0; s < samples; ++s) {
    const int size = min_size + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - min_size + 1)));
    for (int i = 0; i < size; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(perm[i], perm[j]);
    }
    std::int64_t e = 0;
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) e += g.adjacent(perm[i], perm[j]);
    ++verdict.sets_checked;
    if (!within_band(e, size, p, eps)) {
      verdict.jumbled = false;
      return verdict;
    }
  }
  return verdict;
}

std::uint64_t count_labeled_subgraph_copies(const SimpleGraph& h,
                                            const SimpleGraph& g) {
  const int k = h.vertex_count();
  if (k > kSubgraphPatternCap) {
    throw CapExceeded("count_labeled_subgraph_copies: pattern has " +
                      std::to_string(k) + " vertices, cap is " +
                      std::to_string(kSubgraphPatternCap));
  }
  if (k == 0) return 1;
  if (k > g.vertex_count()) return 0;

  // Greedy order: each next pattern vertex has the most already-placed
  // neighbours, so candidate sets shrink quickly.
  std::vector<Vertex> order;
  std::vector<char> placed(static_cast<std::size_t>(k), 0);
  for (int step = 0; step < k; ++step) {
    Vertex best = -1;
    int best_links = -1, best_deg = -1;
    for (Vertex v = 0; v < k; ++v) {
      if (placed[v]) continue;
      int links = 0;
      for (Vertex u : order) links += h.adjacent(u, v);
      const int deg = h.degree(v);
      if (links > best_links || (links == best_links && deg > best_deg)) {
        best = v;
        best_links = links;
        best_deg = deg;
      }
    }
    placed[best] = 1;
    order.push_back(best);
  }
  std::vector<std::vector<int>> back_links(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < i; ++j)
      if (h.adjacent(order[i], order[j])) back_links[i].push_back(j);

  const int w = g.words();
  std::vector<std::uint64_t> full(static_cast<std::size_t>(w), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) full[v >> 6] |= std::uint64_t{1} << (v & 63);
  std::vector<std::uint64_t> cand(static_cast<std::size_t>(k) * w);
  std::vector<std::uint64_t> used(static_cast<std::size_t>(w), 0);
  std::vector<Vertex> image(static_cast<std::size_t>(k));
  std::uint64_t total = 0;

  auto recurse = [&](auto&& self, int i) -> void {
    std::uint64_t* c = cand.data() + static_cast<std::size_t>(i) * w;
    for (int j = 0; j < w; ++j) {
      std::uint64_t word = full[j] & ~used[j];
      for (int link : back_links[i]) word &= g.row(image[link])[j];
      c[j] = word;
    }
    if (i == k - 1) {
      for (int j = 0; j < w; ++j) total += static_cast<std::uint64_t>(std::popcount(c[j]));
      return;
    }
    for (int j = 0; j < w; ++j) {
      std::uint64_t word = c[j];
      while (word) {
        const Vertex v = j * 64 + std::countr_zero(word);
        word &= word - 1;
        image[i] = v;
        used[j] |= std::uint64_t{1} << (v & 63);
        self(self, i + 1);
        used[j] &= ~(std::uint64_t{1} << (v & 63));
      }
    }
  };
  recurse(recurse, 0);
  return total;
}

void write_edge_list(std::ostream& out, const SimpleGraph& g) {
  out << "v=" << g.vertex_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.w << '\n';
}

std::string to_edge_list(const SimpleGraph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

SimpleGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("v=", 0) != 0) {
    throw std::invalid_argument("edge list must start with 'v=<n>'");
  }
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(line.substr(2), &used);
    if (used != line.size() - 2) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad vertex count line: '" + line + "'");
  }
  SimpleGraph g(n);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long a = -1, b = -1;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'u w'");
    }
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad pair");
    }
    if (g.adjacent(static_cast<Vertex>(a), static_cast<Vertex>(b))) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": duplicate edge");
    }
    g.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  return g;
}

SimpleGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

}  // namespace orq
