#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "orq/graph.hpp"
#include "orq/random.hpp"

using namespace orq;

namespace {

// Brute-force oracles. Deliberately naive.

int brute_matching(const SimpleGraph& g) {
  auto edges = g.edges();
  int best = 0;
  const std::size_t m = edges.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<int> used(g.vertex_count(), 0);
    bool ok = true;
    int size = 0;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      if (used[edges[i].u]++ || used[edges[i].w]++) ok = false;
      ++size;
    }
    if (ok) best = std::max(best, size);
  }
  return best;
}

int brute_cover(const SimpleGraph& g) {
  const int n = g.vertex_count();
  int best = n;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    bool ok = true;
    for (const Edge& e : g.edges())
      if (!(mask >> e.u & 1) && !(mask >> e.w & 1)) ok = false;
    if (ok) best = std::min(best, std::popcount(mask));
  }
  return best;
}

std::uint64_t brute_embeddings(const SimpleGraph& h, const SimpleGraph& g) {
  const int k = h.vertex_count();
  const int n = g.vertex_count();
  std::uint64_t count = 0;
  std::vector<Vertex> map(k);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == k) {
      for (const Edge& e : h.edges())
        if (!g.adjacent(map[e.u], map[e.w])) return;
      ++count;
      return;
    }
    for (Vertex v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      map[i] = v;
      self(self, i + 1);
      used[v] = 0;
    }
  };
  rec(rec, 0);
  return count;
}

SimpleGraph graph_from_mask(int n, std::uint64_t mask) {
  SimpleGraph g(n);
  int bit = 0;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b, ++bit)
      if (mask >> bit & 1) g.add_edge(a, b);
  return g;
}

SimpleGraph random_graph(int n, double p, RandomStream& rng) {
  SimpleGraph g(n);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (rng.bernoulli(p)) g.add_edge(a, b);
  return g;
}

SimpleGraph k4_minus_edge() {
  SimpleGraph g = complete_graph(4);
  SimpleGraph out(4);
  for (const Edge& e : g.edges())
    if (!(e.u == 0 && e.w == 1)) out.add_edge(e.u, e.w);
  return out;
}

}  // namespace

TEST_CASE("storage basics") {
  SimpleGraph g(70);
  g.add_edge(3, 69);
  g.add_edge(69, 3);
  CHECK(g.edge_count() == 1);
  CHECK(g.adjacent(69, 3));
  CHECK(g.degree(69) == 1);
  CHECK_THROWS_AS(g.add_edge(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 70), std::out_of_range);
  auto sub = g.induced(std::vector<Vertex>{3, 69, 5});
  CHECK(sub.vertex_count() == 3);
  CHECK(sub.adjacent(0, 1));
  CHECK(sub.edge_count() == 1);
}

TEST_CASE("max matching") {
  CHECK(max_matching_size(complete_graph(3)) == 1);
  CHECK(max_matching_size(make_half_graph_split(2).graph) == 2);
  CHECK(max_matching_size(cycle_graph(5)) == brute_matching(cycle_graph(5)));
  CHECK(max_matching_size(cycle_graph(5)) == 2);
  CHECK(max_matching_size(empty_graph(0)) == 0);
}

TEST_CASE("min vertex cover") {
  SimpleGraph edge(2);
  edge.add_edge(0, 1);
  CHECK(min_vertex_cover_size(edge) == 1);
  CHECK(min_vertex_cover_size(star_graph(5)) == 1);
  CHECK(min_vertex_cover_size(cycle_graph(5)) == brute_cover(cycle_graph(5)));
  CHECK(min_vertex_cover_size(cycle_graph(5)) == 3);
  CHECK(min_vertex_cover_size(complete_graph(24)) == 23);
  CHECK_THROWS_AS(min_vertex_cover_size(empty_graph(25)), CapExceeded);
}

TEST_CASE("clique detection") {
  CHECK_FALSE(contains_clique(k4_minus_edge(), 4));
  CHECK(contains_clique(complete_graph(4), 3));
  CHECK_FALSE(contains_clique(cycle_graph(5), 3));
  CHECK(contains_clique(empty_graph(3), 1));
  auto c = find_clique(complete_graph(6), 4);
  REQUIRE(c);
  CHECK(c->size() == 4);
}

TEST_CASE("degeneracy") {
  CHECK(degeneracy_peel(complete_graph(4)).max_back_degree == 3);
  auto tri = degeneracy_peel(complete_graph(3));
  CHECK(tri.max_back_degree == 2);
  CHECK(tri.max_back_degree <= std::sqrt(6.0));
  CHECK(degeneracy_peel(empty_graph(5)).max_back_degree == 0);

  // Back-degrees must match the ordering.
  RandomStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_graph(12, 0.4, rng);
    auto d = degeneracy_peel(g);
    std::vector<int> pos(12);
    for (int i = 0; i < 12; ++i) pos[d.ordering[i]] = i;
    for (int i = 0; i < 12; ++i) {
      int back = 0;
      for (Vertex w : g.neighbors(d.ordering[i])) back += pos[w] < i;
      CHECK(back == d.back_degree[i]);
      CHECK(back <= d.max_back_degree);
    }
  }
}

TEST_CASE("jumbledness") {
  CHECK(is_jumbled(complete_graph(5), 1.0, 2, 0.01));
  CHECK_FALSE(is_jumbled(empty_graph(6), 0.5, 3, 0.5));
  CHECK(is_jumbled(cycle_graph(5), 0.5, 5, 0.1));
  CHECK_THROWS_AS(is_jumbled(empty_graph(21), 0.5, 3, 0.5), CapExceeded);
  RandomStream rng(5);
  auto v = is_jumbled_sampled(complete_graph(30), 1.0, 2, 0.01, 200, rng);
  CHECK(v.jumbled);
  CHECK_FALSE(v.authoritative);
  CHECK(v.sets_checked == 200);
}

TEST_CASE("labeled clique copies") {
  SimpleGraph edge(2);
  edge.add_edge(0, 1);
  CHECK(count_labeled_clique_copies(2, edge) == 2);
  CHECK(count_labeled_clique_copies(3, complete_graph(3)) == 6);
  CHECK(count_labeled_clique_copies(3, complete_graph(4)) ==
        brute_embeddings(complete_graph(3), complete_graph(4)));
  CHECK(count_labeled_clique_copies(3, complete_graph(4)) == 24);
}

TEST_CASE("labeled subgraph copies") {
  SimpleGraph edge(2);
  edge.add_edge(0, 1);
  CHECK(count_labeled_subgraph_copies(edge, complete_graph(3)) == 6);
  CHECK(count_labeled_subgraph_copies(make_half_graph_split(1).graph,
                                      complete_graph(2)) == 2);
  CHECK(count_labeled_subgraph_copies(make_half_graph_split(2).graph,
                                      complete_graph(4)) == 24);
  CHECK_THROWS_AS(count_labeled_subgraph_copies(empty_graph(9), complete_graph(9)),
                  CapExceeded);

  RandomStream rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_graph(7, 0.5, rng);
    auto h = random_graph(4, 0.5, rng);
    CHECK(count_labeled_subgraph_copies(h, g) == brute_embeddings(h, g));
  }
}

TEST_CASE("half graph split") {
  auto h1 = make_half_graph_split(1);
  CHECK(h1.graph.edge_count() == 1);
  CHECK(h1.graph.adjacent(h1.a(1), h1.b(1)));

  auto h2 = make_half_graph_split(2);
  std::vector<Edge> expect{{h2.a(1), h2.a(2)}, {h2.a(1), h2.b(1)},
                           {h2.a(1), h2.b(2)}, {h2.a(2), h2.b(2)}};
  std::sort(expect.begin(), expect.end());
  CHECK(h2.graph.edges() == expect);
  CHECK(make_half_graph_split(3).graph.edge_count() == 9);

  for (int k = 1; k <= 5; ++k) {
    auto h = make_half_graph_split(k);
    CHECK(h.graph.edge_count() == k * k);
    CHECK(max_matching_size(h.graph) == k);
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j) {
        CHECK(h.graph.adjacent(h.a(i), h.b(j)) == (i <= j));
        if (i != j) {
          CHECK(h.graph.adjacent(h.a(i), h.a(j)));
          CHECK_FALSE(h.graph.adjacent(h.b(i), h.b(j)));
        }
      }
  }
}

TEST_CASE("property: matching <= cover <= 2 matching, all graphs on <= 6 vertices") {
  for (int n = 1; n <= 6; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
      auto g = graph_from_mask(n, mask);
      int nu = max_matching_size(g);
      int tau = min_vertex_cover_size(g);
      REQUIRE(nu <= tau);
      REQUIRE(tau <= 2 * nu);
    }
  }
}

TEST_CASE("property: matching and cover agree with brute force on 5 vertices") {
  for (std::uint64_t mask = 0; mask < (1U << 10); mask += 7) {
    auto g = graph_from_mask(5, mask);
    REQUIRE(max_matching_size(g) == brute_matching(g));
    REQUIRE(min_vertex_cover_size(g) == brute_cover(g));
  }
}

TEST_CASE("property: degeneracy <= sqrt(2E), all graphs on <= 6 vertices and sampled 7-8") {
  for (int n = 1; n <= 6; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
      auto g = graph_from_mask(n, mask);
      REQUIRE(degeneracy_peel(g).max_back_degree <=
              std::sqrt(2.0 * static_cast<double>(g.edge_count())) + 1e-12);
    }
  }
  RandomStream rng(17);
  for (int trial = 0; trial < 20000; ++trial) {
    int n = 7 + static_cast<int>(rng.below(2));
    auto g = random_graph(n, rng.uniform(), rng);
    REQUIRE(degeneracy_peel(g).max_back_degree <=
            std::sqrt(2.0 * static_cast<double>(g.edge_count())) + 1e-12);
  }
}

TEST_CASE("property: labeled clique copies of K_v are falling factorials") {
  for (int v = 2; v <= 7; ++v)
    for (int m = 2; m <= v; ++m) {
      std::uint64_t ff = 1;
      for (int i = 0; i < m; ++i) ff *= static_cast<std::uint64_t>(v - i);
      CHECK(count_labeled_clique_copies(m, complete_graph(v)) == ff);
    }
}

TEST_CASE("property: subgraphs of jumbled graphs have bounded degeneracy") {
  RandomStream rng(23);
  int jumbled_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 8 + static_cast<int>(rng.below(9));  // 8..16
    const double p = 0.3 + 0.4 * rng.uniform();
    const int M = 3 + static_cast<int>(rng.below(3));
    const double eps = 0.6 + 0.4 * rng.uniform();
    auto g = random_graph(n, p, rng);
    if (!is_jumbled(g, p, M, eps)) continue;
    ++jumbled_seen;
    for (int sub = 0; sub < 5; ++sub) {
      SimpleGraph h(n);
      const double keep = rng.uniform();
      for (const Edge& e : g.edges())
        if (rng.bernoulli(keep)) h.add_edge(e.u, e.w);
      const double bound = std::max(
          (1 + eps) * M * std::sqrt(p),
          (1 + eps) * std::sqrt(2 * p * static_cast<double>(h.edge_count())));
      REQUIRE(degeneracy_peel(h).max_back_degree <= bound + 1e-9);
    }
  }
  CHECK(jumbled_seen > 20);
}

TEST_CASE("edge list round trip and validation") {
  auto g = make_half_graph_split(3).graph;
  auto text = to_edge_list(g);
  CHECK(text.rfind("v=6\n", 0) == 0);
  CHECK(parse_edge_list(text) == g);
  CHECK_THROWS(parse_edge_list("0 1\n"));
  CHECK_THROWS(parse_edge_list("v=3\n0 1\n1 0\n"));
  CHECK_THROWS(parse_edge_list("v=3\n0 3\n"));
  CHECK_THROWS(parse_edge_list("v=3\n0 x\n"));
  CHECK(parse_edge_list("v=4\n\n0 1\n").edge_count() == 1);
}

TEST_CASE("property: H2 closed-form count matches the generic embedding count") {
  const SimpleGraph h2 = make_half_graph_split(2).graph;
  RandomStream rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 3 + static_cast<int>(rng.below(12 + (rep % 3) * 10));
    const double p = 0.1 + 0.8 * rng.uniform();
    SimpleGraph g(n);
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        if (rng.bernoulli(p)) g.add_edge(a, b);
    REQUIRE(count_labeled_h2_copies(g) == count_labeled_subgraph_copies(h2, g));
  }
  CHECK(count_labeled_h2_copies(complete_graph(4)) == 24);
  CHECK(count_labeled_h2_copies(complete_graph(3)) == 0);
}
