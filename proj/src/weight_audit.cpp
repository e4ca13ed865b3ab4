#include "orq/weight_audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "orq/painters.hpp"
#include "orq/random.hpp"

namespace orq {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int resolve_universe(const Board& board, int universe) {
  if (universe < 0) return board.vertex_count();
  if (universe < board.vertex_count())
    throw std::invalid_argument("weight audit: universe smaller than the board");
  return universe;
}

void check_cap(int n, int k, const char* who) {
  if (binom(n, k) > kAuditSubsetCap)
    throw CapExceeded(std::string(who) + ": C(" + std::to_string(n) + "," + std::to_string(k) +
                      ") exceeds the subset cap");
}

// Pair labels over the touched vertices: 0 none, 1 side colour, 2 other.
struct Labels {
  int n;
  std::vector<std::uint8_t> lab;

  Labels(const Board& board, Color side) : n(board.vertex_count()),
      lab(static_cast<std::size_t>(n) * n, 0) {
    for (const PlacedEdge& pe : board.history()) {
      const std::uint8_t v = pe.color == side ? 1 : 2;
      lab[pe.edge.u * n + pe.edge.w] = v;
      lab[pe.edge.w * n + pe.edge.u] = v;
    }
  }
  std::uint8_t at(Vertex a, Vertex b) const {
    if (a >= n || b >= n) return 0;
    return lab[static_cast<std::size_t>(a) * n + b];
  }
};

// Cover of the side-coloured graph on U, optionally ignoring one pair.
int cover_of(const Labels& L, std::span<const Vertex> U, const Edge* skip = nullptr) {
  std::vector<std::uint32_t> rows(U.size(), 0);
  bool any = false;
  for (std::size_t i = 0; i < U.size(); ++i)
    for (std::size_t j = i + 1; j < U.size(); ++j) {
      if (L.at(U[i], U[j]) != 1) continue;
      if (skip && Edge(U[i], U[j]) == *skip) continue;
      rows[i] |= 1U << j;
      rows[j] |= 1U << i;
      any = true;
    }
  return any ? min_vertex_cover_size(rows) : 0;
}

double weight_of(const Labels& L, std::span<const Vertex> U, double p) {
  long long built = 0;
  for (std::size_t i = 0; i < U.size(); ++i)
    for (std::size_t j = i + 1; j < U.size(); ++j) {
      auto l = L.at(U[i], U[j]);
      if (l == 2) return 0.0;
      built += l;
    }
  const long long k = static_cast<long long>(U.size());
  return std::pow(p, static_cast<double>(k * (k - 1) / 2 - built));
}

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("weight audit: p in (0,1]");
}

// Advance a sorted k-combination of 0..n-1 in colex order.
bool next_colex(std::vector<Vertex>& s, int n) {
  const int k = static_cast<int>(s.size());
  for (int i = 0; i < k; ++i) {
    const Vertex limit = i + 1 < k ? s[i + 1] : n;
    if (s[i] + 1 < limit) {
      ++s[i];
      for (int j = 0; j < i; ++j) s[j] = j;
      return true;
    }
  }
  return false;
}

}  // namespace

double red_weight(const Board& board, std::span<const Vertex> U, double p, Color side) {
  check_p(p);
  return weight_of(Labels(board, side), U, p);
}

int red_cover(const Board& board, std::span<const Vertex> U, Color side) {
  return cover_of(Labels(board, side), U);
}

double aggregate_weight(const Board& board, int k, int c, double p, int universe, Color side) {
  check_p(p);
  if (k < 1 || c < 0 || 2 * c > k) throw std::invalid_argument("aggregate_weight: need k >= 2c");
  const int V = board.vertex_count();
  const int pool = resolve_universe(board, universe);
  check_cap(V, k, "aggregate_weight");
  const Labels L(board, side);
  const int spare = pool - V;
  const long long full = static_cast<long long>(k) * (k - 1) / 2;

  // DFS over subsets S of touched vertices free of the other colour; the
  // remaining k-|S| vertices come from the untouched part of the pool.
  double total = 0.0;
  std::vector<Vertex> S;
  auto dfs = [&](auto&& self, Vertex from, long long built) -> void {
    const int j = static_cast<int>(S.size());
    if (k - j <= spare && cover_of(L, S) >= c)
      total += binom(spare, k - j) * std::pow(p, static_cast<double>(full - built));
    if (j == k) return;
    for (Vertex v = from; v < V; ++v) {
      long long add = 0;
      bool clean = true;
      for (Vertex u : S) {
        auto l = L.at(u, v);
        if (l == 2) { clean = false; break; }
        add += l;
      }
      if (!clean) continue;
      S.push_back(v);
      self(self, v + 1, built + add);
      S.pop_back();
    }
  };
  dfs(dfs, 0, 0);
  return total;
}

WeightSnapshot weight_snapshot(const Board& board, int k, int c, double p, int universe,
                               Color side) {
  check_p(p);
  if (k < 1 || c < 0 || 2 * c > k) throw std::invalid_argument("weight_snapshot: need k >= 2c");
  const int pool = resolve_universe(board, universe);
  check_cap(pool, k, "weight_snapshot");
  const Labels L(board, side);
  WeightSnapshot snap;
  snap.k = k;
  snap.c = c;
  snap.p = p;
  if (k > pool) return snap;
  std::vector<Vertex> U(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) U[i] = i;
  do {
    SubsetRecord r{U, weight_of(L, U, p), cover_of(L, U)};
    if (r.cover >= c) snap.aggregate += r.weight;
    snap.subsets.push_back(std::move(r));
  } while (next_colex(U, pool));
  return snap;
}

std::vector<std::vector<Vertex>> c_critical_events(const Board& after, const PlacedEdge& e,
                                                   int c, int k, int universe, Color side) {
  if (k < 2 || c < 0 || 2 * c > k) throw std::invalid_argument("c_critical_events: need k >= 2c");
  std::vector<std::vector<Vertex>> out;
  if (e.color != side || c == 0) return out;
  const int pool = resolve_universe(after, universe);
  check_cap(pool - 2, k - 2, "c_critical_events");
  const Labels L(after, side);
  std::vector<Vertex> others;
  for (Vertex v = 0; v < pool; ++v)
    if (v != e.edge.u && v != e.edge.w) others.push_back(v);
  const int r = k - 2;
  if (r > static_cast<int>(others.size())) return out;
  std::vector<Vertex> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[i] = i;
  std::vector<Vertex> U;
  for (;;) {
    U.assign({e.edge.u, e.edge.w});
    for (Vertex i : idx) U.push_back(others[i]);
    std::sort(U.begin(), U.end());
    if (cover_of(L, U) >= c && cover_of(L, U, &e.edge) < c) out.push_back(U);
    if (!next_colex(idx, static_cast<int>(others.size()))) break;
  }
  return out;
}

double audit_bound(int m, int c, double p, int N) {
  if (m < 2 || c < 0 || 2 * c > m || N < 1) throw std::invalid_argument("audit_bound: domain");
  const double e = static_cast<double>(m) * (m - 1) / 2 - static_cast<double>(c) * (c - 1);
  return std::pow(p, e) * std::pow(2.0 * N, m - c);
}

AuditReport audit_run(const BuilderPolicy& builder, int m, int c, double p, int N, int trials,
                      std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("audit_run: trials >= 2");
  AuditReport rep;
  rep.builder_id = builder.id();
  rep.m = m;
  rep.c = c;
  rep.p = p;
  rep.N = N;
  rep.trials = trials;
  rep.seed = seed;
  rep.universe = 2 * N;
  rep.bound = audit_bound(m, c, p, N);
  const int half = m / 2;
  double factorial = 1;
  for (int i = 2; i <= m; ++i) factorial *= i;

  double sum = 0, sumsq = 0;
  for (int t = 0; t < trials; ++t) {
    auto b = builder.clone();
    auto painter = random_painter(p);
    Board final(N);
    GameOptions opt;
    opt.stop_at_target = false;
    opt.final_board = &final;
    play_online_ramsey(*b, *painter, m, m, N, derive_seed(seed, StreamRole::trial, t), opt);
    const double w = aggregate_weight(final, m, c, p, rep.universe);
    const double w_half = c == half ? w : aggregate_weight(final, m, half, p, rep.universe);
    const double cliques =
        static_cast<double>(count_labeled_clique_copies(m, final.layer(Color::red))) / factorial;
    if (w_half < cliques * (1 - 1e-12)) ++rep.clique_count_violations;
    sum += w;
    sumsq += w * w;
    rep.max_sample = std::max(rep.max_sample, w);
  }
  rep.mean = sum / trials;
  const double var = std::max(0.0, (sumsq - trials * rep.mean * rep.mean) / (trials - 1));
  rep.std_error = std::sqrt(var / trials);
  rep.verdict = rep.mean + 3 * rep.std_error <= rep.bound;
  return rep;
}

std::string AuditReport::to_json() const {
  nlohmann::json j;
  j["parameters"] = {{"builder", builder_id}, {"m", m}, {"c", c}, {"p", p}, {"N", N},
                     {"universe", universe}, {"seed", seed}};
  j["trials"] = trials;
  j["mean"] = mean;
  j["stderr"] = std_error;
  j["bound"] = bound;
  j["verdict"] = verdict;
  j["max_sample"] = max_sample;
  j["clique_count_violations"] = clique_count_violations;
  return j.dump();
}

}  // namespace orq
