#include <doctest.h>

#include <cmath>
#include <numeric>

#include "orq/builders.hpp"
#include "orq/exact.hpp"

using namespace orq;

namespace {

ColoredGraph random_colored(RandomStream& rng, int n, double density) {
  ColoredGraph g;
  g.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bernoulli(density)) g.set(a, b, rng.bernoulli(0.5) ? Color::red : Color::blue);
  return g;
}

std::vector<int> random_perm(RandomStream& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

}  // namespace

TEST_CASE("canonical form agrees with exhaustive isomorphism") {
  RandomStream rng(20240611);
  int iso_pairs = 0, non_iso_pairs = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(7));
    ColoredGraph g = random_colored(rng, n, 0.2 + 0.6 * rng.uniform());
    ColoredGraph h = g;
    if (rng.bernoulli(0.5) && n >= 2) {
      // Perturb one pair so that roughly half of the pairs are not isomorphic.
      int a = static_cast<int>(rng.below(n)), b = static_cast<int>(rng.below(n - 1));
      if (b >= a) ++b;
      ColoredGraph k;
      k.n = n;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
          int l = g.label(u, v);
          if (Edge(u, v) == Edge(a, b)) l = (l + 1 + static_cast<int>(rng.below(2))) % 3;
          if (l) k.set(u, v, l == 1 ? Color::red : Color::blue);
        }
      h = k;
    }
    h = h.permuted(random_perm(rng, n));
    const bool same = canonical_form(g) == canonical_form(h);
    const bool iso = brute_force_isomorphic(g, h);
    REQUIRE(same == iso);
    (iso ? iso_pairs : non_iso_pairs)++;
  }
  CHECK(iso_pairs > 3000);
  CHECK(non_iso_pairs > 3000);
}

TEST_CASE("canonical form on symmetric graphs up to nine vertices") {
  RandomStream rng(7);
  auto check_family = [&](const ColoredGraph& g) {
    const CanonicalForm f = canonical_form(g);
    for (int i = 0; i < 50; ++i) REQUIRE(canonical_form(g.permuted(random_perm(rng, g.n))) == f);
  };
  ColoredGraph star;
  for (int v = 1; v < 9; ++v) star.set(0, v, Color::red);
  check_family(star);
  ColoredGraph matching;
  for (int v = 0; v < 8; v += 2) matching.set(v, v + 1, v % 4 ? Color::blue : Color::red);
  matching.n = 9;
  check_family(matching);
  ColoredGraph bip;
  for (int a = 0; a < 4; ++a)
    for (int b = 4; b < 9; ++b) bip.set(a, b, (a + b) % 2 ? Color::red : Color::blue);
  check_family(bip);
  ColoredGraph cycle;
  for (int v = 0; v < 9; ++v) cycle.set(v, (v + 1) % 9, Color::red);
  check_family(cycle);
  // Red and blue versions of the same shape differ.
  ColoredGraph blue_star;
  for (int v = 1; v < 9; ++v) blue_star.set(0, v, Color::blue);
  CHECK_FALSE(canonical_form(star) == canonical_form(blue_star));
}

TEST_CASE("classical Ramsey numbers from exhaustive colourings") {
  CHECK(classical_ramsey_number(3, 3) == 6);
  CHECK(classical_ramsey_number(3, 4) == 9);
  CHECK(classical_ramsey_number(2, 5) == 5);
  CHECK(classical_ramsey_number(1, 4) == 1);
  CHECK_FALSE(classical_ramsey_number(4, 4, 8).has_value());
}

TEST_CASE("online Ramsey exact values") {
  for (int vb = 2; vb <= 6; ++vb) CHECK(exact_online_ramsey(2, 2, vb, 1) == 1);
  CHECK(exact_online_ramsey(2, 3, 5, 10) == 3);
  CHECK(exact_online_ramsey(2, 4, 6, 10) == 6);  // Builder must build a blue K4

  const int r33 = *classical_ramsey_number(3, 3);
  CHECK(*exact_online_ramsey(3, 3, 6, 15) * 2 >= r33);

  // Budget 5 is below r(3,3): Painter colours all of K5 without a triangle.
  CHECK_FALSE(exact_online_ramsey(3, 3, 5, 10).has_value());
  std::optional<int> prev;
  for (int vb = 6; vb <= 9; ++vb) {
    auto v = exact_online_ramsey(3, 3, vb, 12);
    REQUIRE(v.has_value());
    if (prev) CHECK(*v <= *prev);
    prev = v;
  }
  CHECK(*prev == 8);
  CHECK(*prev * 2 >= r33);
  CHECK(*prev <= r33 * (r33 - 1) / 2);
}

TEST_CASE("online Ramsey memo and plain minimax agree") {
  struct Case { int m, n, vb, cap; };
  for (Case c : {Case{2, 3, 5, 10}, Case{3, 3, 5, 6}, Case{3, 3, 6, 8}, Case{2, 4, 6, 8},
                 Case{3, 3, 6, 7}}) {
    auto a = solve_online_ramsey(c.m, c.n, c.vb, c.cap, true);
    auto b = solve_online_ramsey(c.m, c.n, c.vb, c.cap, false);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("online Ramsey principal variation is a legal winning line") {
  auto r = solve_online_ramsey(3, 3, 7, 12);
  REQUIRE(r.value == 8);
  REQUIRE(static_cast<int>(r.principal_variation.size()) == 8);
  Board board(8, 7);
  for (std::size_t i = 0; i < r.principal_variation.size(); ++i) {
    const Move& mv = r.principal_variation[i];
    const Color c = mv.result == 'R' ? Color::red : Color::blue;
    REQUIRE_FALSE(board.illegal_reason(mv.edge).has_value());
    board.add(mv.edge, c);
    const bool done = board.has_clique_through(mv.edge, c, 3);
    CHECK(done == (i + 1 == r.principal_variation.size()));
  }
  CHECK(r.stats.memo_entries > 0);
}

TEST_CASE("exact solver caps") {
  CHECK_THROWS_AS(exact_online_ramsey(5, 3, 6, 5), CapExceeded);
  CHECK_THROWS_AS(exact_online_ramsey(3, 3, 10, 5), CapExceeded);
  CHECK_THROWS_AS(exact_online_ramsey(3, 3, 6, 16), CapExceeded);
  const SimpleGraph k3 = graph_from_code("K3");
  CHECK_THROWS_AS(exact_query_value(k3, 0.5, 15, 8), CapExceeded);
  CHECK_THROWS_AS(exact_query_value(k3, 0.5, 3, 9), CapExceeded);
  CHECK_THROWS_AS(exact_query_value(graph_from_code("K5"), 0.5, 3, 8), CapExceeded);
}

TEST_CASE("query value of a single edge") {
  const SimpleGraph k2 = graph_from_code("K2");
  for (double p : {0.3, 0.5, 0.8})
    for (int b = 0; b <= 6; ++b)
      CHECK(exact_query_value(k2, p, b, 8) ==
            doctest::Approx(1.0 - std::pow(1.0 - p, b)).epsilon(1e-12));
  auto f = exact_f(k2, 0.5, 8);
  CHECK(f.budget == 1);
  CHECK(f.probability == 0.5);
}

TEST_CASE("query value of a triangle, small cases") {
  const SimpleGraph k3 = graph_from_code("K3");
  CHECK(exact_query_value(k3, 1.0, 3, 8) == 1.0);
  CHECK(exact_query_value(k3, 1.0, 2, 8) == 0.0);
  // Three pairs on three vertices: success iff all three are present.
  CHECK(exact_query_value(k3, 0.5, 3, 3) == 0.125);
}

TEST_CASE("canonical expectimax matches the raw enumerator") {
  const SimpleGraph k3 = graph_from_code("K3");
  // Dyadic p keeps every partial sum exact in double precision.
  for (double p : {0.5, 0.25, 0.75})
    for (int vb = 3; vb <= 7; ++vb)
      for (int b = 0; b <= 5; ++b) {
        CAPTURE(p);
        CAPTURE(vb);
        CAPTURE(b);
        REQUIRE(exact_query_value(k3, p, b, vb) == brute_query_value(k3, p, b, vb));
      }
  for (int b = 0; b <= 4; ++b)
    REQUIRE(exact_query_value(k3, 0.5, b, 8) == brute_query_value(k3, 0.5, b, 8));
  for (int b = 0; b <= 5; ++b)
    CHECK(exact_query_value(k3, 0.3, b, 6) ==
          doctest::Approx(brute_query_value(k3, 0.3, b, 6)).epsilon(1e-12));
  // A non-clique target goes through the general embedding search.
  const SimpleGraph path = graph_from_code("G4:0-1,1-2,2-3");
  for (int b = 0; b <= 5; ++b)
    REQUIRE(exact_query_value(path, 0.5, b, 6) == brute_query_value(path, 0.5, b, 6));
}

TEST_CASE("query value is monotone in budget and in p") {
  const SimpleGraph k3 = graph_from_code("K3");
  const std::vector<double> ps{0.2, 0.35, 0.5, 0.65, 0.8};
  std::vector<std::vector<double>> v(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ChanceSolver s(k3, 0, ps[i], 7);
    for (int b = 0; b <= 7; ++b) v[i].push_back(s.value(b));
  }
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (int b = 1; b <= 7; ++b) CHECK(v[i][b] >= v[i][b - 1] - 1e-15);
  for (std::size_t i = 1; i < ps.size(); ++i)
    for (int b = 0; b <= 7; ++b) CHECK(v[i][b] >= v[i - 1][b] - 1e-15);
}

TEST_CASE("exact f for the triangle") {
  const SimpleGraph k3 = graph_from_code("K3");
  auto half = exact_f(k3, 0.5, 8);
  CHECK(half.budget >= 3);
  CHECK(half.budget >= static_cast<int>(std::ceil(0.25 * std::pow(0.5, -1.5))));
  CHECK(half.budget == 6);
  CHECK(half.probability >= 0.5);
  ChanceSolver s(k3, 0, 0.5, 8);
  CHECK(s.value(half.budget - 1) < 0.5);
  auto high = exact_f(k3, 0.9, 8);
  CHECK(high.budget <= half.budget);
  CHECK(high.budget >= 3);
}

TEST_CASE("random Ramsey sandwich at tiny scale") {
  for (double p : {0.3, 0.5, 0.7}) {
    CAPTURE(p);
    auto r = sandwich_check(3, 3, p, 8);
    CHECK(r.lower_holds);
    CHECK(r.upper_holds);
    CHECK(r.r_probability >= 0.5);
    if (p == 0.5) {
      CHECK(r.f_red == r.f_blue);
      CHECK_FALSE(r.f_red_capped);
      CHECK_FALSE(r.f_blue_capped);
    }
  }
  // The red-only bound on its own: treat red edges as built.
  ChanceSolver rr(graph_from_code("K3"), 3, 0.5, 8);
  ChanceSolver fr(graph_from_code("K3"), 0, 0.5, 8);
  for (int b = 0; b <= 6; ++b) CHECK(rr.value(b) >= fr.value(b) - 1e-15);
}

TEST_CASE("branching builder beats every painter") {
  for (int m = 2; m <= 4; ++m)
    for (int n = 2; n <= 4; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      BranchingConfig cfg;
      cfg.m = m;
      cfg.n = n;
      auto builder = branching_builder(cfg);
      auto rep = adversarial_check(*builder, m, n, static_cast<int>(cfg.budget()));
      CHECK(rep.builder_always_wins);
      CHECK(rep.worst_case_turns <= cfg.budget());
      CHECK(rep.losing_line.empty());
      if (m == 2 || n == 2) CHECK(rep.worst_case_turns <= std::max(m, n) * (std::max(m, n) - 1) / 2);
    }
}

TEST_CASE("adversarial memo agrees with the plain search") {
  for (auto [m, n] : {std::pair{3, 3}, std::pair{3, 4}, std::pair{4, 3}}) {
    BranchingConfig cfg;
    cfg.m = m;
    cfg.n = n;
    auto builder = branching_builder(cfg);
    auto a = adversarial_check(*builder, m, n, static_cast<int>(cfg.budget()), true);
    auto b = adversarial_check(*builder, m, n, static_cast<int>(cfg.budget()), false);
    CHECK(a.builder_always_wins == b.builder_always_wins);
    CHECK(a.worst_case_turns == b.worst_case_turns);
    CHECK(a.nodes <= b.nodes);
  }
}

TEST_CASE("adversarial check finds a losing line") {
  // Two pairs of a triangle, then nothing: Painter colours them differently.
  auto builder = scripted_builder({Edge(0, 1), Edge(1, 2)});
  auto rep = adversarial_check(*builder, 3, 3, 10);
  CHECK_FALSE(rep.builder_always_wins);
  CHECK(rep.losing_line.size() == 2);
}
