#include "orq/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace orq {

void ColoredGraph::set(int a, int b, Color c) {
  auto& rows = c == Color::red ? red : blue;
  rows[a] |= static_cast<std::uint16_t>(1U << b);
  rows[b] |= static_cast<std::uint16_t>(1U << a);
  n = std::max(n, std::max(a, b) + 1);
}

ColoredGraph ColoredGraph::permuted(const std::vector<int>& perm) const {
  ColoredGraph out;
  out.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int l = label(a, b);
      if (l) out.set(perm[a], perm[b], l == 1 ? Color::red : Color::blue);
    }
  return out;
}

// ---- canonical form ---------------------------------------------------------

namespace {

using Sig = std::array<std::int16_t, kExactMaxVertices + 1>;

class Canonicalizer {
 public:
  explicit Canonicalizer(const ColoredGraph& g) : n_(g.n) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) lab_[a][b] = a == b ? 0 : g.label(a, b);
  }

  CanonicalForm run() {
    std::array<int, kExactMaxVertices> col{};
    refine(col);
    search(col);
    return {n_, best_};
  }

 private:
  // Split cells by the multiset of (neighbour colour, pair label) until
  // stable. Colours become ranks of sorted signatures, so the result depends
  // only on the isomorphism class of (graph, input colouring).
  void refine(std::array<int, kExactMaxVertices>& col) const {
    std::array<Sig, kExactMaxVertices> sig;
    std::array<int, kExactMaxVertices> idx;
    int cells = -1;
    while (true) {
      for (int v = 0; v < n_; ++v) {
        sig[v].fill(-1);
        sig[v][0] = static_cast<std::int16_t>(col[v]);
        int k = 1;
        for (int u = 0; u < n_; ++u)
          if (u != v) sig[v][k++] = static_cast<std::int16_t>(col[u] * 3 + lab_[v][u]);
        std::sort(sig[v].begin() + 1, sig[v].begin() + n_);
      }
      std::iota(idx.begin(), idx.begin() + n_, 0);
      std::sort(idx.begin(), idx.begin() + n_,
                [&](int a, int b) { return sig[a] < sig[b]; });
      int rank = 0;
      for (int i = 0; i < n_; ++i) {
        if (i > 0 && sig[idx[i]] != sig[idx[i - 1]]) ++rank;
        col[idx[i]] = rank;
      }
      if (rank + 1 == cells) return;
      cells = rank + 1;
    }
  }

  bool twins(int u, int v) const {
    for (int w = 0; w < n_; ++w)
      if (w != u && w != v && lab_[u][w] != lab_[v][w]) return false;
    return true;
  }

  void search(const std::array<int, kExactMaxVertices>& col) {
    std::array<int, kExactMaxVertices> size{};
    for (int v = 0; v < n_; ++v) ++size[col[v]];
    int target = -1;
    for (int c = 0; c < n_; ++c)
      if (size[c] > 1) { target = c; break; }
    if (target < 0) {
      std::array<int, kExactMaxVertices> inv{};
      for (int v = 0; v < n_; ++v) inv[col[v]] = v;
      unsigned __int128 code = 0;
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
          code = (code << 2) | static_cast<unsigned>(lab_[inv[i]][inv[j]]);
      if (!have_ || code < best_) best_ = code;
      have_ = true;
      return;
    }
    // Twins in the target cell are swapped by an automorphism that fixes the
    // current colouring, so one branch per twin class is enough.
    std::array<int, kExactMaxVertices> reps{};
    int nreps = 0;
    for (int v = 0; v < n_; ++v) {
      if (col[v] != target) continue;
      bool dup = false;
      for (int r = 0; r < nreps && !dup; ++r) dup = twins(reps[r], v);
      if (dup) continue;
      reps[nreps++] = v;
      std::array<int, kExactMaxVertices> next{};
      for (int u = 0; u < n_; ++u)
        next[u] = 2 * col[u] + (col[u] == target && u != v ? 1 : 0);
      refine(next);
      search(next);
    }
  }

  int n_;
  int lab_[kExactMaxVertices][kExactMaxVertices]{};
  unsigned __int128 best_ = 0;
  bool have_ = false;
};

}  // namespace

CanonicalForm canonical_form(const ColoredGraph& g) {
  if (g.n < 0 || g.n > kExactMaxVertices)
    throw CapExceeded("canonical_form: " + std::to_string(g.n) + " vertices");
  return Canonicalizer(g).run();
}

bool brute_force_isomorphic(const ColoredGraph& a, const ColoredGraph& b) {
  if (a.n != b.n) return false;
  if (a.n > 8) throw CapExceeded("brute_force_isomorphic: more than 8 vertices");
  std::vector<int> perm(a.n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int u = 0; u < a.n && ok; ++u)
      for (int v = u + 1; v < a.n && ok; ++v)
        ok = a.label(u, v) == b.label(perm[u], perm[v]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// ---- small-graph helpers ------------------------------------------------------

namespace {

using Rows = std::array<std::uint16_t, kExactMaxVertices>;

bool has_clique(unsigned mask, int k, const Rows& rows) {
  if (k <= 0) return true;
  if (std::popcount(mask) < k) return false;
  while (mask) {
    int v = std::countr_zero(mask);
    mask &= mask - 1;
    if (has_clique(mask & rows[v], k - 1, rows)) return true;
  }
  return false;
}

struct Pattern {
  int k = 0;
  bool clique = false;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj;
  std::vector<int> order;  // breadth-first from vertex 0

  Pattern() = default;
  explicit Pattern(const SimpleGraph& h) : k(h.vertex_count()) {
    if (k < 2 || k > 4 || h.edge_count() == 0)
      throw std::invalid_argument("exact solver: target needs 2..4 vertices");
    adj.resize(k);
    for (const Edge& e : h.edges()) {
      edges.emplace_back(e.u, e.w);
      adj[e.u].push_back(e.w);
      adj[e.w].push_back(e.u);
    }
    for (int v = 0; v < k; ++v)
      if (adj[v].empty())
        throw std::invalid_argument("exact solver: target has an isolated vertex");
    clique = h.edge_count() == static_cast<std::int64_t>(k) * (k - 1) / 2;
    std::vector<char> seen(k, 0);
    order.push_back(0);
    seen[0] = 1;
    for (std::size_t q = 0; q < order.size(); ++q)
      for (int z : adj[order[q]])
        if (!seen[z]) { seen[z] = 1; order.push_back(z); }
    for (int z = 0; z < k; ++z)
      if (!seen[z]) order.push_back(z);
  }

  static Pattern complete(int k) {
    SimpleGraph g(k);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) g.add_edge(a, b);
    return Pattern(g);
  }
};

// Whether rows (one colour layer on n vertices) has a copy of h using a-b.
bool copy_through(const Pattern& h, const Rows& rows, int n, int a, int b) {
  if (h.clique) return has_clique(rows[a] & rows[b], h.k - 2, rows);
  std::array<int, 4> img{};
  auto extend = [&](auto&& self, std::size_t pos, unsigned used,
                    const std::vector<int>& order) -> bool {
    if (pos == order.size()) return true;
    int z = order[pos];
    unsigned cand = ((1U << n) - 1) & ~used;
    for (int y : h.adj[z])
      if (img[y] >= 0) cand &= rows[img[y]];
    while (cand) {
      int v = std::countr_zero(cand);
      cand &= cand - 1;
      img[z] = v;
      if (self(self, pos + 1, used | 1U << v, order)) return true;
      img[z] = -1;
    }
    return false;
  };
  for (auto [x, y] : h.edges)
    for (int flip = 0; flip < 2; ++flip) {
      img.fill(-1);
      int xs = flip ? y : x, ys = flip ? x : y;
      img[xs] = a;
      img[ys] = b;
      std::vector<int> rest;
      for (int z : h.order)
        if (z != xs && z != ys) rest.push_back(z);
      if (extend(extend, 0, 1U << a | 1U << b, rest)) return true;
    }
  return false;
}

// Whether some copy of h avoiding the `other` layer needs at most `budget`
// new pairs, with up to `pool` fresh vertices available.
bool reachable(const Pattern& h, const Rows& own, const Rows& other, int n, int pool,
               int budget) {
  if (budget >= static_cast<int>(h.edges.size()) && pool >= h.k) return true;
  std::array<int, 4> img{};
  img.fill(-2);  // -2 unmapped, -1 fresh vertex
  auto go = [&](auto&& self, int pos, unsigned used, int fresh, int missing) -> bool {
    if (missing > budget) return false;
    if (pos == h.k) return true;
    int z = h.order[pos];
    for (int v = 0; v < n; ++v) {
      if (used >> v & 1) continue;
      int add = 0;
      bool ok = true;
      for (int y : h.adj[z]) {
        if (img[y] == -2) continue;
        if (img[y] == -1) { ++add; continue; }
        if (other[v] >> img[y] & 1) { ok = false; break; }
        if (!(own[v] >> img[y] & 1)) ++add;
      }
      if (!ok) continue;
      img[z] = v;
      if (self(self, pos + 1, used | 1U << v, fresh, missing + add)) return true;
      img[z] = -2;
    }
    if (fresh < pool) {
      int add = 0;
      for (int y : h.adj[z])
        if (img[y] != -2) ++add;
      img[z] = -1;
      if (self(self, pos + 1, used, fresh + 1, missing + add)) return true;
      img[z] = -2;
    }
    return false;
  };
  return go(go, 0, 0U, 0, 0);
}

struct MemoKey {
  std::uint64_t lo = 0, hi = 0;
  std::uint32_t meta = 0;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::uint64_t h = splitmix64(k.lo ^ splitmix64(k.hi ^ splitmix64(k.meta)));
    return static_cast<std::size_t>(h);
  }
};

MemoKey make_key(const CanonicalForm& f, int pool, int budget) {
  MemoKey k;
  k.lo = static_cast<std::uint64_t>(f.code);
  k.hi = static_cast<std::uint64_t>(f.code >> 64);
  k.meta = static_cast<std::uint32_t>(f.n | pool << 4 | budget << 8);
  return k;
}

template <class F>
void for_each_move(const ColoredGraph& g, int pool, F&& f) {
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b)
      if (!g.label(a, b)) f(a, b);
  if (pool >= 1 && g.n < kExactMaxVertices)
    for (int a = 0; a < g.n; ++a) f(a, g.n);
  if (pool >= 2 && g.n + 1 < kExactMaxVertices) f(g.n, g.n + 1);
}

ColoredGraph with_edge(const ColoredGraph& g, int a, int b, Color c) {
  ColoredGraph out = g;
  out.set(a, b, c);
  return out;
}

}  // namespace

// ---- online Ramsey --------------------------------------------------------------

namespace {

class OnlineSolver {
 public:
  OnlineSolver(int m, int n, int vertex_budget, bool memo)
      : red_(Pattern::complete(m)), blue_(Pattern::complete(n)), m_(m), n_(n),
        vb_(vertex_budget), memo_(memo) {}

  bool hit(const ColoredGraph& g, int a, int b, Color c) const {
    return c == Color::red ? has_clique(g.red[a] & g.red[b], m_ - 2, g.red)
                           : has_clique(g.blue[a] & g.blue[b], n_ - 2, g.blue);
  }

  // Builder can force a target within d more turns.
  bool can_win(const ColoredGraph& g, int d) {
    ++stats.nodes;
    if (d <= 0) return false;
    const int pool = vb_ - g.n;
    if (!reachable(red_, g.red, g.blue, g.n, pool, d) &&
        !reachable(blue_, g.blue, g.red, g.n, pool, d))
      return false;
    MemoKey key;
    if (memo_) {
      ++stats.canonicalisations;
      key = make_key(canonical_form(g), pool, 0);
      if (auto it = table_.find(key); it != table_.end()) {
        if (d >= it->second.win_at) { ++stats.memo_hits; return true; }
        if (d <= it->second.fail_at) { ++stats.memo_hits; return false; }
      }
    }
    bool win = false;
    for_each_move(g, pool, [&](int a, int b) {
      if (win) return;
      win = true;
      for (Color c : {Color::red, Color::blue}) {
        ColoredGraph next = with_edge(g, a, b, c);
        if (!hit(next, a, b, c) && !can_win(next, d - 1)) { win = false; break; }
      }
    });
    if (memo_) {
      Entry& e = table_[key];
      if (win) e.win_at = std::min(e.win_at, d);
      else e.fail_at = std::max(e.fail_at, d);
      stats.memo_entries = static_cast<std::int64_t>(table_.size());
    }
    return win;
  }

  // Least d <= cap with can_win, or -1.
  int value(const ColoredGraph& g, int cap) {
    for (int d = 0; d <= cap; ++d)
      if (can_win(g, d)) return d;
    return -1;
  }

  SolverStats stats;

 private:
  struct Entry {
    int win_at = 1 << 20;
    int fail_at = 0;
  };
  Pattern red_, blue_;
  int m_, n_, vb_;
  bool memo_;
  std::unordered_map<MemoKey, Entry, MemoHash> table_;
};

}  // namespace

OnlineRamseyResult solve_online_ramsey(int m, int n, int vertex_budget, int turn_cap,
                                       bool memo) {
  if (m < 2 || n < 2) throw std::invalid_argument("exact_online_ramsey: m, n >= 2");
  if (m > 4 || n > 4 || vertex_budget > kOnlineVertexCap)
    throw CapExceeded("exact_online_ramsey: caps are m, n <= 4 and budget <= 9");
  if (vertex_budget < 2) throw std::invalid_argument("exact_online_ramsey: budget >= 2");
  if (turn_cap < 0 || turn_cap > vertex_budget * (vertex_budget - 1) / 2)
    throw CapExceeded("exact_online_ramsey: turn_cap above C(budget, 2)");
  OnlineSolver solver(m, n, vertex_budget, memo);
  OnlineRamseyResult out;
  ColoredGraph g;
  int d = solver.value(g, turn_cap);
  if (d >= 0) {
    out.value = d;
    // Principal variation: a winning move, answered by the colour that keeps
    // the game going longest.
    int turn = 0;
    while (d > 0) {
      std::optional<Move> chosen;
      int rest = 0;
      for_each_move(g, vertex_budget - g.n, [&](int a, int b) {
        if (chosen) return;
        int worst = 0;
        Color worst_c = Color::red;
        for (Color c : {Color::red, Color::blue}) {
          ColoredGraph next = with_edge(g, a, b, c);
          int v = solver.hit(next, a, b, c) ? 0 : solver.value(next, d - 1);
          if (v < 0) return;
          if (v > worst || (v == worst && c == Color::red)) {
            worst = v;
            worst_c = c;
          }
        }
        chosen = Move{turn + 1, Edge(a, b), worst_c == Color::red ? 'R' : 'B'};
        rest = worst;
      });
      if (!chosen) break;  // cannot happen for a proven value
      out.principal_variation.push_back(*chosen);
      g = with_edge(g, chosen->edge.u, chosen->edge.w,
                    chosen->result == 'R' ? Color::red : Color::blue);
      ++turn;
      d = rest;
    }
  }
  out.stats = solver.stats;
  return out;
}

std::optional<int> exact_online_ramsey(int m, int n, int vertex_budget, int turn_cap) {
  return solve_online_ramsey(m, n, vertex_budget, turn_cap).value;
}

std::optional<int> classical_ramsey_number(int s, int t, int max_k) {
  if (s < 1 || t < 1) throw std::invalid_argument("classical_ramsey_number: s, t >= 1");
  if (max_k > kExactMaxVertices + 5) throw CapExceeded("classical_ramsey_number: max_k");
  if (s == 1 || t == 1) return 1;
  for (int k = 2; k <= max_k; ++k) {
    // Search for a colouring of K_k with no red K_s and no blue K_t, pairs in
    // colex order so that each new vertex is checked against earlier ones.
    std::vector<std::pair<int, int>> pairs;
    for (int b = 1; b < k; ++b)
      for (int a = 0; a < b; ++a) pairs.emplace_back(a, b);
    std::array<std::uint32_t, 16> red{}, blue{};
    auto clique = [](std::uint32_t mask, int need, const std::array<std::uint32_t, 16>& rows,
                     auto&& self) -> bool {
      if (need <= 0) return true;
      if (std::popcount(mask) < need) return false;
      while (mask) {
        int v = std::countr_zero(mask);
        mask &= mask - 1;
        if (self(mask & rows[v], need - 1, rows, self)) return true;
      }
      return false;
    };
    auto go = [&](auto&& self, std::size_t i) -> bool {
      if (i == pairs.size()) return true;
      auto [a, b] = pairs[i];
      for (int c = 0; c < 2; ++c) {
        auto& rows = c == 0 ? red : blue;
        int need = (c == 0 ? s : t) - 2;
        if (clique(rows[a] & rows[b], need, rows, clique)) continue;
        rows[a] |= 1U << b;
        rows[b] |= 1U << a;
        bool ok = self(self, i + 1);
        rows[a] &= ~(1U << b);
        rows[b] &= ~(1U << a);
        if (ok) return true;
      }
      return false;
    };
    if (!go(go, 0)) return k;
  }
  return std::nullopt;
}

// ---- chance games ------------------------------------------------------------------

struct ChanceSolver::Impl {
  Pattern red;
  Pattern blue;  // k == 0 when there is no blue target
  bool has_blue = false;
  double p;
  int vb;
  SolverStats stats;
  std::unordered_map<MemoKey, double, MemoHash> table;

  bool hit(const ColoredGraph& g, int a, int b, Color c) const {
    if (c == Color::red) return copy_through(red, g.red, g.n, a, b);
    return has_blue && copy_through(blue, g.blue, g.n, a, b);
  }

  double move_value(const ColoredGraph& g, int a, int b, int budget) {
    ColoredGraph r = with_edge(g, a, b, Color::red);
    double vr = hit(r, a, b, Color::red) ? 1.0 : value(r, budget - 1);
    ColoredGraph f = with_edge(g, a, b, Color::blue);
    double vf = hit(f, a, b, Color::blue) ? 1.0 : value(f, budget - 1);
    return p * vr + (1.0 - p) * vf;
  }

  double value(const ColoredGraph& g, int budget) {
    ++stats.nodes;
    if (budget <= 0) return 0.0;
    const int pool = vb - g.n;
    if (!reachable(red, g.red, g.blue, g.n, pool, budget) &&
        !(has_blue && reachable(blue, g.blue, g.red, g.n, pool, budget)))
      return 0.0;
    ++stats.canonicalisations;
    const MemoKey key = make_key(canonical_form(g), pool, budget);
    if (auto it = table.find(key); it != table.end()) {
      ++stats.memo_hits;
      return it->second;
    }
    double best = 0.0;
    for_each_move(g, pool, [&](int a, int b) {
      if (best < 1.0) best = std::max(best, move_value(g, a, b, budget));
    });
    table.emplace(key, best);
    stats.memo_entries = static_cast<std::int64_t>(table.size());
    return best;
  }
};

ChanceSolver::ChanceSolver(SimpleGraph red_target, int blue_clique, double p,
                           int vertex_budget)
    : impl_(std::make_unique<Impl>()) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("exact solver: p outside [0,1]");
  if (vertex_budget < 2) throw std::invalid_argument("exact solver: vertex budget >= 2");
  if (vertex_budget > kQueryVertexCap)
    throw CapExceeded("exact solver: vertex budget above " + std::to_string(kQueryVertexCap));
  if (red_target.vertex_count() > 4) throw CapExceeded("exact solver: v(H) > 4");
  impl_->red = Pattern(red_target);
  if (blue_clique > 4) throw CapExceeded("exact solver: blue clique above 4");
  if (blue_clique >= 2) {
    impl_->blue = Pattern::complete(blue_clique);
    impl_->has_blue = true;
  }
  impl_->p = p;
  impl_->vb = vertex_budget;
}

ChanceSolver::~ChanceSolver() = default;
ChanceSolver::ChanceSolver(ChanceSolver&&) noexcept = default;
ChanceSolver& ChanceSolver::operator=(ChanceSolver&&) noexcept = default;

double ChanceSolver::value(int budget) {
  if (budget < 0) throw std::invalid_argument("exact solver: negative budget");
  if (budget > kQueryBudgetCap)
    throw CapExceeded("exact solver: budget above " + std::to_string(kQueryBudgetCap));
  return impl_->value(ColoredGraph{}, budget);
}

std::optional<Edge> ChanceSolver::best_first_move(int budget) {
  if (budget <= 0) return std::nullopt;
  ColoredGraph g;
  double best = -1.0;
  std::optional<Edge> out;
  for_each_move(g, impl_->vb, [&](int a, int b) {
    double v = impl_->move_value(g, a, b, budget);
    if (v > best) { best = v; out = Edge(a, b); }
  });
  return out;
}

const SolverStats& ChanceSolver::stats() const { return impl_->stats; }

double exact_query_value(const SimpleGraph& h, double p, int budget, int vertex_budget) {
  ChanceSolver s(h, 0, p, vertex_budget);
  return s.value(budget);
}

double brute_query_value(const SimpleGraph& h, double p, int budget, int vertex_budget) {
  if (vertex_budget > kQueryVertexCap) throw CapExceeded("brute_query_value: vertex budget");
  const Pattern pat(h);
  ColoredGraph g;
  g.n = vertex_budget;
  auto go = [&](auto&& self, int left) -> double {
    if (left == 0) return 0.0;
    double best = 0.0;
    for (int a = 0; a < g.n; ++a)
      for (int b = a + 1; b < g.n; ++b) {
        if (g.label(a, b)) continue;
        const ColoredGraph saved = g;
        g.set(a, b, Color::red);
        double vr = copy_through(pat, g.red, g.n, a, b) ? 1.0 : self(self, left - 1);
        g = saved;
        g.set(a, b, Color::blue);
        double vf = self(self, left - 1);
        g = saved;
        best = std::max(best, p * vr + (1.0 - p) * vf);
      }
    return best;
  };
  return go(go, budget);
}

ExactF exact_f(const SimpleGraph& h, double p, int vertex_budget) {
  ChanceSolver s(h, 0, p, vertex_budget);
  for (int b = 0; b <= kQueryBudgetCap; ++b) {
    double v = s.value(b);
    if (v >= 0.5 - 1e-12) return {b, v};
  }
  throw CapExceeded("exact_f: no budget up to " + std::to_string(kQueryBudgetCap) +
                    " reaches 1/2");
}

SandwichReport sandwich_check(int m, int n, double p, int vertex_budget) {
  if (m < 2 || n < 2 || m > 4 || n > 4)
    throw CapExceeded("sandwich_check: m, n must lie in 2..4");
  SandwichReport rep;
  rep.m = m;
  rep.n = n;
  rep.p = p;
  rep.vertex_budget = vertex_budget;
  const SimpleGraph km = graph_from_code("K" + std::to_string(m));
  const SimpleGraph kn = graph_from_code("K" + std::to_string(n));
  ChanceSolver rr(km, n, p, vertex_budget);
  bool found = false;
  for (int b = 0; b <= kQueryBudgetCap && !found; ++b) {
    double v = rr.value(b);
    if (v >= 0.5 - 1e-12) {
      rep.r_random = b;
      rep.r_probability = v;
      found = true;
    }
  }
  if (!found) throw CapExceeded("sandwich_check: r~(m,n;p) above the budget cap");
  ChanceSolver fr(km, 0, p, vertex_budget);
  ChanceSolver fb(kn, 0, 1.0 - p, vertex_budget);
  for (int b = 0; b <= kQueryBudgetCap; ++b) {
    bool red_ok = fr.value(b) >= 0.5 - 1e-12;
    bool blue_ok = fb.value(b) >= 0.5 - 1e-12;
    if (red_ok || blue_ok) {
      rep.f_red = rep.f_blue = b;
      rep.f_red_capped = !red_ok;
      rep.f_blue_capped = !blue_ok;
      const int fmin = b;
      rep.lower_holds = rep.r_random <= fmin;
      rep.upper_holds = fmin <= 3 * rep.r_random;
      return rep;
    }
  }
  throw CapExceeded("sandwich_check: both f values above the budget cap");
}

// ---- adversarial check ------------------------------------------------------------------

namespace {

class Adversary {
 public:
  Adversary(int m, int n, int cap, bool memo) : m_(m), n_(n), cap_(cap), memo_(memo),
      board_(cap, std::max(2 * cap, 64)) {}

  // Worst-case number of further turns until a target, or -1 if some painter
  // line makes the builder stop or run past the cap.
  int dfs(BuilderPolicy& builder) {
    ++report.nodes;
    std::string key = memo_ ? builder.transposition_key(board_) : std::string();
    if (!key.empty()) {
      if (auto it = table_.find(key); it != table_.end()) {
        ++report.memo_hits;
        return it->second;
      }
    }
    if (board_.turn() >= cap_) return lose();
    RandomStream rng(0);
    auto e = builder.next_edge(board_, rng);
    if (!e) return lose();
    if (auto why = board_.illegal_reason(*e))
      throw ProtocolViolation(builder.id() + ": " + *why);
    auto other = builder.clone();
    int worst = 0;
    for (Color c : {Color::red, Color::blue}) {
      BuilderPolicy& who = c == Color::red ? builder : *other;
      board_.add(*e, c);
      const bool done = board_.has_clique_through(*e, c, c == Color::red ? m_ : n_);
      int r = done ? 1 : dfs(who);
      if (!done && r >= 0) ++r;
      board_.undo();
      if (r < 0) return -1;
      worst = std::max(worst, r);
    }
    if (!key.empty()) table_.emplace(std::move(key), worst);
    return worst;
  }

  AdversarialReport report;

 private:
  int lose() {
    if (report.losing_line.empty()) {
      int t = 0;
      for (const auto& pe : board_.history())
        report.losing_line.push_back({++t, pe.edge, pe.color == Color::red ? 'R' : 'B'});
    }
    return -1;
  }

  int m_, n_, cap_;
  bool memo_;
  Board board_;
  std::unordered_map<std::string, int> table_;
};

}  // namespace

AdversarialReport adversarial_check(const BuilderPolicy& prototype, int m, int n,
                                    int turn_cap, bool memo) {
  if (m < 2 || n < 2) throw std::invalid_argument("adversarial_check: m, n >= 2");
  Adversary adv(m, n, turn_cap, memo);
  auto builder = prototype.clone();
  int worst = adv.dfs(*builder);
  adv.report.builder_always_wins = worst >= 0;
  adv.report.worst_case_turns = worst;
  if (worst >= 0 && worst > turn_cap) adv.report.builder_always_wins = false;
  return adv.report;
}

}  // namespace orq
