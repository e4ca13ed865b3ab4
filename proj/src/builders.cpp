#include "orq/builders.hpp"

#include <algorithm>
#include <cmath>
#include <coroutine>
#include <exception>
#include <stdexcept>

namespace orq {

namespace {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Lazily evaluated move sequence. Strategies written as coroutines read the
// result of their previous query straight off the board when resumed.
class MoveStream {
 public:
  struct promise_type {
    std::optional<Edge> current;
    std::exception_ptr error;

    MoveStream get_return_object() {
      return MoveStream(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    std::suspend_always yield_value(Edge e) noexcept {
      current = e;
      return {};
    }
    void return_void() noexcept {}
    void unhandled_exception() { error = std::current_exception(); }
  };
  using Handle = std::coroutine_handle<promise_type>;

  MoveStream() = default;
  explicit MoveStream(Handle h) : h_(h) {}
  MoveStream(MoveStream&& o) noexcept : h_(std::exchange(o.h_, {})) {}
  MoveStream& operator=(MoveStream&& o) noexcept {
    if (this != &o) {
      if (h_) h_.destroy();
      h_ = std::exchange(o.h_, {});
    }
    return *this;
  }
  MoveStream(const MoveStream&) = delete;
  MoveStream& operator=(const MoveStream&) = delete;
  ~MoveStream() {
    if (h_) h_.destroy();
  }

  std::optional<Edge> next() {
    if (!h_ || h_.done()) return std::nullopt;
    h_.promise().current.reset();
    h_.resume();
    if (h_.promise().error) std::rethrow_exception(h_.promise().error);
    if (h_.done()) return std::nullopt;
    return h_.promise().current;
  }

 private:
  Handle h_;
};

struct Ctx {
  const Board* board = nullptr;
  RandomStream* rng = nullptr;
  Vertex next_vertex = 0;
  std::string stop_reason;

  Vertex fresh() { return next_vertex++; }
  bool built(Edge e) const { return board->has(e, Color::red); }
};

// Base for builders written as coroutines. clone() is only meaningful before
// the first move; afterwards the coroutine frame cannot be copied.
class CoroutineBuilder : public BuilderPolicy {
 public:
  std::optional<Edge> next_edge(const Board& board, RandomStream& rng) final {
    ctx_.board = &board;
    ctx_.rng = &rng;
    if (!started_) {
      started_ = true;
      ctx_.next_vertex = board.fresh_vertex();
      stream_ = program(ctx_);
    }
    return stream_.next();
  }
  std::string stop_reason() const override { return ctx_.stop_reason; }

 protected:
  virtual MoveStream program(Ctx& ctx) = 0;
  void require_unstarted() const {
    if (started_) throw std::logic_error(id() + ": clone() after the game started");
  }

 private:
  Ctx ctx_;
  MoveStream stream_;
  bool started_ = false;
};

// ---- query-game programs ---------------------------------------------------

MoveStream triangle_moves(Ctx& ctx, long long star_len, int restarts) {
  for (int attempt = 0; restarts < 0 || attempt <= restarts; ++attempt) {
    const Vertex centre = ctx.fresh();
    std::vector<Vertex> found;
    for (long long s = 0; s < star_len; ++s) {
      const Vertex x = ctx.fresh();
      co_yield Edge(centre, x);
      if (!ctx.built(Edge(centre, x))) continue;
      for (Vertex y : found) co_yield Edge(y, x);
      found.push_back(x);
    }
  }
  ctx.stop_reason = "restarts exhausted";
}

MoveStream fresh_pair_moves(Ctx& ctx) {
  for (;;) {
    Vertex x = ctx.fresh();
    Vertex y = ctx.fresh();
    co_yield Edge(x, y);
  }
}

long long triangle_star_length(double p, double c_T) {
  return std::max(1LL, static_cast<long long>(std::ceil(c_T * std::pow(p, -1.5))));
}

MoveStream clique_moves(Ctx& ctx, int size, double p, double c_T);

MoveStream bnf_moves(Ctx& ctx, int a, int b, double p, double c_T, int restarts) {
  const int m = a + b + 1;
  const double T = c_T * std::pow(p, to_double(bnf_turn_exponent(a, b)));
  const long long rounds = std::max(
      1LL, static_cast<long long>(std::ceil(std::pow(p, -to_double(alpha(a, b))) - 1e-9)));
  const long long w_target = std::max(
      1LL, static_cast<long long>(std::ceil(std::pow(p, a) * T - 1e-9)));

  for (int attempt = 0; restarts < 0 || attempt <= restarts; ++attempt) {
    // Phase 1: a clique U on a vertices.
    std::vector<Vertex> U;
    if (a == 1) {
      U.push_back(ctx.fresh());
    } else if (a >= 2) {
      auto sub = clique_moves(ctx, a, p, c_T);
      while (auto e = sub.next()) {
        co_yield *e;
        if (!ctx.built(*e)) continue;
        if (auto c = ctx.board->find_clique_through(*e, Color::red, a)) {
          U = *c;
          break;
        }
      }
      if (U.empty()) {
        ctx.stop_reason = "seed clique search stopped";
        co_return;
      }
      std::sort(U.begin(), U.end());
    }

    // Phase 2: common neighbours of U, abandoning a candidate at its first
    // failed edge.
    std::vector<Vertex> W;
    if (a == 0) {
      for (long long i = 0; i < w_target; ++i) W.push_back(ctx.fresh());
    } else {
      while (static_cast<long long>(W.size()) < w_target) {
        const Vertex v = ctx.fresh();
        bool joined = true;
        for (Vertex u : U) {
          co_yield Edge(u, v);
          if (!ctx.built(Edge(u, v))) {
            joined = false;
            break;
          }
        }
        if (joined) W.push_back(v);
      }
    }

    // Phase 3: probe and fill.
    for (long long round = 0; round < rounds && !W.empty(); ++round) {
      const Vertex w = W.front();
      W.erase(W.begin());
      std::vector<Vertex> Wi;
      for (Vertex x : W) {
        co_yield Edge(w, x);
        if (ctx.built(Edge(w, x))) Wi.push_back(x);
      }
      for (std::size_t i = 0; i < Wi.size(); ++i)
        for (std::size_t j = i + 1; j < Wi.size(); ++j) co_yield Edge(Wi[i], Wi[j]);
      std::erase_if(W, [&](Vertex x) {
        return std::binary_search(Wi.begin(), Wi.end(), x);
      });
    }
  }
  ctx.stop_reason = "restarts exhausted without K" + std::to_string(m);
}

// Unlimited-restart program for a seed clique of the given size.
MoveStream clique_moves(Ctx& ctx, int size, double p, double c_T) {
  if (size == 2) return fresh_pair_moves(ctx);
  if (size == 3)
    return triangle_moves(ctx, triangle_star_length(p, c_T), kUnlimitedRestarts);
  auto [a, b] = choose_ab(size);
  return bnf_moves(ctx, a, b, p, c_T, kUnlimitedRestarts);
}

class TriangleBuilder : public CoroutineBuilder {
 public:
  TriangleBuilder(double p, double c_T, int restarts)
      : p_(p), c_T_(c_T), restarts_(restarts) {}
  std::string id() const override {
    return "triangle(p=" + format_real(p_) + ",cT=" + format_real(c_T_) +
           ",restarts=" + std::to_string(restarts_) + ")";
  }
  std::unique_ptr<BuilderPolicy> clone() const override {
    require_unstarted();
    return std::make_unique<TriangleBuilder>(p_, c_T_, restarts_);
  }

 protected:
  MoveStream program(Ctx& ctx) override {
    return triangle_moves(ctx, triangle_star_length(p_, c_T_), restarts_);
  }

 private:
  double p_, c_T_;
  int restarts_;
};

class BranchAndFillBuilder : public CoroutineBuilder {
 public:
  BranchAndFillBuilder(const BranchAndFillConfig& cfg, double p) : cfg_(cfg), p_(p) {
    auto s = cfg_.split();
    cfg_.a = s.a;
    cfg_.b = s.b;
  }
  std::string id() const override {
    return "bnf(m=" + std::to_string(cfg_.m) + ",a=" + std::to_string(cfg_.a) +
           ",b=" + std::to_string(cfg_.b) + ",cT=" + format_real(cfg_.c_T) +
           ",restarts=" + std::to_string(cfg_.restarts) + ",p=" + format_real(p_) + ")";
  }
  std::unique_ptr<BuilderPolicy> clone() const override {
    require_unstarted();
    return std::make_unique<BranchAndFillBuilder>(cfg_, p_);
  }

 protected:
  MoveStream program(Ctx& ctx) override {
    return bnf_moves(ctx, cfg_.a, cfg_.b, p_, cfg_.c_T, cfg_.restarts);
  }

 private:
  BranchAndFillConfig cfg_;
  double p_;
};

class NestedHalfgraphBuilder : public CoroutineBuilder {
 public:
  explicit NestedHalfgraphBuilder(int k) : k_(k) {}
  std::string id() const override { return "nested_halfgraph(k=" + std::to_string(k_) + ")"; }
  std::unique_ptr<BuilderPolicy> clone() const override {
    require_unstarted();
    return std::make_unique<NestedHalfgraphBuilder>(k_);
  }

 protected:
  MoveStream program(Ctx& ctx) override { return moves(ctx, k_); }

 private:
  static MoveStream moves(Ctx& ctx, int k) {
    const long long N = ctx.board->turn_cap();
    std::vector<Vertex> U;
    for (long long i = 0; i < N / k; ++i) U.push_back(ctx.fresh());
    for (int stage = 1; stage <= k; ++stage) {
      const long long size = static_cast<long long>(U.size());
      if (static_cast<double>(size) < std::sqrt(static_cast<double>(N))) {
        ctx.stop_reason = "stage " + std::to_string(stage) + " aborted: |U| = " +
                          std::to_string(size) + " < sqrt(N)";
        co_return;
      }
      const long long probes = std::min(size, std::max(1LL, N / (k * size)));
      for (long long i = 0; i < probes; ++i)
        for (Vertex x : U)
          if (x != U[i] && !ctx.board->queried(Edge(U[i], x))) co_yield Edge(U[i], x);
      std::vector<Vertex> next;
      for (long long j = probes; j < size; ++j) {
        bool common = true;
        for (long long i = 0; i < probes && common; ++i)
          common = ctx.built(Edge(U[i], U[j]));
        if (common) next.push_back(U[j]);
      }
      U = std::move(next);
    }
    ctx.stop_reason = "all stages complete";
  }

  int k_;
};

class CliqueFillBuilder : public CoroutineBuilder {
 public:
  explicit CliqueFillBuilder(int v) : v_(v) {}
  std::string id() const override { return "clique_fill(v=" + std::to_string(v_) + ")"; }
  std::unique_ptr<BuilderPolicy> clone() const override {
    require_unstarted();
    return std::make_unique<CliqueFillBuilder>(v_);
  }

 protected:
  MoveStream program(Ctx& ctx) override { return moves(ctx, v_); }

 private:
  static MoveStream moves(Ctx& ctx, int v) {
    for (Vertex a = 0; a < v; ++a)
      for (Vertex b = a + 1; b < v; ++b) co_yield Edge(a, b);
    ctx.stop_reason = "all pairs built";
  }

  int v_;
};

class FreshPairBuilder : public CoroutineBuilder {
 public:
  std::string id() const override { return "fresh_pairs"; }
  std::unique_ptr<BuilderPolicy> clone() const override {
    require_unstarted();
    return std::make_unique<FreshPairBuilder>();
  }

 protected:
  MoveStream program(Ctx& ctx) override { return fresh_pair_moves(ctx); }
};

// ---- online Ramsey builders --------------------------------------------------

class PoolBuilder : public BuilderPolicy {
 public:
  PoolBuilder(int pool, bool greedy) : pool_(pool), greedy_(greedy) {
    if (pool < 2) throw std::invalid_argument("pool builder needs at least 2 vertices");
  }
  std::string id() const override {
    return std::string(greedy_ ? "red_greedy" : "random") + "(pool=" +
           std::to_string(pool_) + ")";
  }
  std::optional<Edge> next_edge(const Board& board, RandomStream& rng) override {
    std::optional<Edge> pick;
    long long best = -1;
    long long ties = 0;
    const Vertex pool = std::min<Vertex>(pool_, board.vertex_cap());
    for (Vertex a = 0; a < pool; ++a)
      for (Vertex b = a + 1; b < pool; ++b) {
        Edge e(a, b);
        if (board.queried(e)) continue;
        long long score = greedy_ ? static_cast<long long>(
                                        board.common_neighbors(a, b, Color::red).size())
                                  : 0;
        if (score > best) {
          best = score;
          ties = 0;
        }
        if (score == best && rng.below(static_cast<std::uint64_t>(++ties)) == 0) pick = e;
      }
    if (!pick) stop_ = "pool exhausted";
    return pick;
  }
  std::unique_ptr<BuilderPolicy> clone() const override {
    return std::make_unique<PoolBuilder>(*this);
  }
  std::string stop_reason() const override { return stop_; }

 private:
  int pool_;
  bool greedy_;
  std::string stop_;
};

class ScriptedBuilder : public BuilderPolicy {
 public:
  explicit ScriptedBuilder(std::vector<Edge> edges) : edges_(std::move(edges)) {}
  std::string id() const override {
    std::string s = "scripted(";
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(edges_[i].u) + "-" + std::to_string(edges_[i].w);
    }
    return s + ")";
  }
  std::optional<Edge> next_edge(const Board&, RandomStream&) override {
    if (pos_ >= edges_.size()) return std::nullopt;
    return edges_[pos_++];
  }
  std::unique_ptr<BuilderPolicy> clone() const override {
    return std::make_unique<ScriptedBuilder>(*this);
  }
  std::string stop_reason() const override {
    return pos_ >= edges_.size() ? "script finished" : "";
  }

 private:
  std::vector<Edge> edges_;
  std::size_t pos_ = 0;
};

class BranchingBuilder : public BuilderPolicy {
 public:
  explicit BranchingBuilder(const BranchingConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

  std::string id() const override {
    return "branching(m=" + std::to_string(cfg_.m) + ",n=" + std::to_string(cfg_.n) +
           ",L=" + format_real(cfg_.L) + ",m0=" + std::to_string(cfg_.stop_m()) +
           ",n0=" + std::to_string(cfg_.stop_n()) + ")";
  }

  std::optional<Edge> next_edge(const Board& board, RandomStream&) override {
    absorb(board);
    if (phase_ == Phase::stage_start) begin_stage(board);
    if (phase_ == Phase::pivot) {
      last_ = Edge(pivot_, targets_[next_target_++]);
      pending_ = true;
      return last_;
    }
    while (phase_ == Phase::fill && fill_pos_ < fill_.size()) {
      Edge e = fill_[fill_pos_++];
      if (!board.queried(e)) return e;
    }
    phase_ = Phase::done;
    stop_ = "surviving set filled";
    return std::nullopt;
  }

  std::unique_ptr<BuilderPolicy> clone() const override {
    return std::make_unique<BranchingBuilder>(*this);
  }
  std::string stop_reason() const override { return stop_; }

  // Stage boundaries are the only positions with a key. There the surviving
  // set is exactly the threshold-sized neighbourhood of the last pivot, its
  // vertices are pairwise untouched and each sees every earlier pivot in the
  // same colour, so (i, j) pins the position up to isomorphism.
  std::string transposition_key(const Board& board) const override {
    BranchingBuilder copy(*this);
    copy.absorb(board);
    if (copy.phase_ != Phase::stage_start) return {};
    return "branching:" + std::to_string(copy.i_) + "," + std::to_string(copy.j_);
  }

 private:
  enum class Phase { stage_start, pivot, fill, done };

  Vertex fresh() { return next_vertex_++; }

  void absorb(const Board& board) {
    if (!pending_) return;
    pending_ = false;
    const Vertex x = targets_[next_target_ - 1];
    (board.has(last_, Color::red) ? red_ : blue_).push_back(x);
    const long long need_red = cfg_.f(cfg_.m - i_ - 1, cfg_.n - j_);
    const long long need_blue = cfg_.f(cfg_.m - i_, cfg_.n - j_ - 1);
    bool go_red = static_cast<long long>(red_.size()) >= need_red;
    bool go_blue = static_cast<long long>(blue_.size()) >= need_blue;
    if (!go_red && !go_blue && next_target_ == targets_.size()) {
      // Only reachable when rounding at L > 1 breaks Pascal's identity.
      go_red = red_.size() * need_blue >= blue_.size() * need_red;
      go_blue = !go_red;
    }
    if (go_red) {
      set_ = red_;
      ++i_;
    } else if (go_blue) {
      set_ = blue_;
      ++j_;
    } else {
      return;
    }
    from_pool_ = false;
    phase_ = Phase::stage_start;
  }

  void begin_stage(const Board& board) {
    const int mi = cfg_.m - i_;
    const int nj = cfg_.n - j_;
    const long long size = cfg_.f(mi, nj);
    if (from_pool_) {
      set_.clear();
      if (next_vertex_ < board.fresh_vertex()) next_vertex_ = board.fresh_vertex();
    }
    if (mi <= cfg_.stop_m() || nj <= cfg_.stop_n()) {
      if (from_pool_)
        for (long long k = 0; k < size; ++k) set_.push_back(fresh());
      std::sort(set_.begin(), set_.end());
      // Colex order: each new vertex is joined to all earlier ones, so a
      // monochromatic clique shows up as soon as the prefix forces one.
      fill_.clear();
      for (std::size_t b = 1; b < set_.size(); ++b)
        for (std::size_t a = 0; a < b; ++a)
          fill_.emplace_back(set_[a], set_[b]);
      fill_pos_ = 0;
      phase_ = Phase::fill;
      return;
    }
    targets_.clear();
    if (from_pool_) {
      pivot_ = fresh();
      for (long long k = 0; k + 1 < size; ++k) targets_.push_back(fresh());
    } else {
      pivot_ = set_[0];
      for (long long k = 1; k < size; ++k) targets_.push_back(set_[k]);
    }
    next_target_ = 0;
    red_.clear();
    blue_.clear();
    phase_ = Phase::pivot;
  }

  BranchingConfig cfg_;
  Phase phase_ = Phase::stage_start;
  int i_ = 0, j_ = 0;
  bool from_pool_ = true;
  std::vector<Vertex> set_;
  Vertex next_vertex_ = 0;

  Vertex pivot_ = 0;
  std::vector<Vertex> targets_;
  std::size_t next_target_ = 0;
  std::vector<Vertex> red_, blue_;
  Edge last_;
  bool pending_ = false;

  std::vector<Edge> fill_;
  std::size_t fill_pos_ = 0;
  std::string stop_;
};

}  // namespace

// ---- BranchingConfig -------------------------------------------------------

int BranchingConfig::stop_m() const { return m0 >= 0 ? m0 : m / 2 + 1; }

int BranchingConfig::stop_n() const {
  return n0 >= 0 ? n0 : static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
}

long long BranchingConfig::f(int a, int b) const {
  if (a < 1 || b < 1) return 0;
  const long long c = binomial(a + b - 2, a - 1);
  if (L == 1.0) return c;
  return static_cast<long long>(std::ceil(static_cast<double>(c) / L - 1e-12));
}

long long BranchingConfig::budget() const {
  const long long a = f(stop_m(), n);
  const long long b = f(m, stop_n());
  return (m + n) * f(m, n) + std::max(a * a, b * b);
}

void BranchingConfig::validate() const {
  if (m < 2 || n < 2) throw std::invalid_argument("branching: m, n must be >= 2");
  if (m + n > 60) throw std::invalid_argument("branching: m + n too large for f table");
  if (!(L >= 1.0)) throw std::invalid_argument("branching: L must be >= 1");
  if (L == 1.0) return;  // r(s,t) <= C(s+t-2, s-1) always holds
  if (!ramsey_upper)
    throw std::invalid_argument("branching: L > 1 needs a Ramsey upper-bound table");
  const int M0 = stop_m(), N0 = stop_n();
  for (int np = std::max(N0, 1); np <= n; ++np)
    if (ramsey_upper(M0, np) > f(M0, np))
      throw std::domain_error("branching: r(" + std::to_string(M0) + "," +
                              std::to_string(np) + ") exceeds f at L=" + format_real(L));
  for (int mp = M0; mp <= m; ++mp)
    if (ramsey_upper(mp, std::max(N0, 1)) > f(mp, std::max(N0, 1)))
      throw std::domain_error("branching: r(" + std::to_string(mp) + "," +
                              std::to_string(N0) + ") exceeds f at L=" + format_real(L));
}

std::unique_ptr<BuilderPolicy> branching_builder(const BranchingConfig& cfg) {
  return std::make_unique<BranchingBuilder>(cfg);
}

std::unique_ptr<BuilderPolicy> random_builder(int pool) {
  return std::make_unique<PoolBuilder>(pool, false);
}

std::unique_ptr<BuilderPolicy> red_greedy_builder(int pool) {
  return std::make_unique<PoolBuilder>(pool, true);
}

std::unique_ptr<BuilderPolicy> scripted_builder(std::vector<Edge> edges) {
  return std::make_unique<ScriptedBuilder>(std::move(edges));
}

// ---- Branch-and-Fill formulas ------------------------------------------------

AbSplit choose_ab(int m) {
  if (m < 4) throw std::invalid_argument("choose_ab: m must be >= 4");
  switch (m % 3) {
    case 0: return {(m - 3) / 3, 2 * m / 3};
    case 1: return {(m - 4) / 3, (2 * m + 1) / 3};
    default: return {(m - 2) / 3, (2 * m - 1) / 3};
  }
}

Rational alpha(int a, int b) {
  if (a < 0 || b < 2 || 2 * a + 3 - b < 0)
    throw std::invalid_argument("alpha: need a >= 0, b >= 2, 2a+3-b >= 0");
  Rational v(static_cast<long long>(b) * (2 * a + 3 - b), 2LL * (b - 1));
  return std::min(Rational(1), v);
}

Rational bnf_turn_exponent(int a, int b) {
  return Rational(-(2 * a + b + 1), 2) + alpha(a, b) / Rational(b);
}

AbSplit BranchAndFillConfig::split() const {
  if (a < 0 && b < 0) return choose_ab(m);
  return {a, b};
}

void BranchAndFillConfig::validate() const {
  if (m < 3) throw std::invalid_argument("branch_and_fill: m must be >= 3");
  if (!(c_T > 0)) throw std::invalid_argument("branch_and_fill: c_T must be positive");
  if (m == 3) return;
  auto [sa, sb] = split();
  if (sa + sb + 1 != m) throw std::invalid_argument("branch_and_fill: a + b + 1 != m");
  (void)alpha(sa, sb);
}

std::unique_ptr<BuilderPolicy> triangle_builder(double p, double c_T, int restarts) {
  if (!(p > 0 && p <= 1)) throw std::invalid_argument("triangle_builder: p outside (0,1]");
  if (!(c_T > 0)) throw std::invalid_argument("triangle_builder: c_T must be positive");
  return std::make_unique<TriangleBuilder>(p, c_T, restarts);
}

std::unique_ptr<BuilderPolicy> branch_and_fill_builder(const BranchAndFillConfig& cfg,
                                                       double p) {
  cfg.validate();
  if (!(p > 0 && p <= 1)) throw std::invalid_argument("branch_and_fill: p outside (0,1]");
  if (cfg.m == 3) return triangle_builder(p, cfg.c_T, cfg.restarts);
  return std::make_unique<BranchAndFillBuilder>(cfg, p);
}

std::unique_ptr<BuilderPolicy> nested_halfgraph_builder(int k) {
  if (k < 1) throw std::invalid_argument("nested_halfgraph: k must be >= 1");
  return std::make_unique<NestedHalfgraphBuilder>(k);
}

std::unique_ptr<BuilderPolicy> clique_fill_builder(int v) {
  if (v < 2) throw std::invalid_argument("clique_fill: v must be >= 2");
  return std::make_unique<CliqueFillBuilder>(v);
}

std::unique_ptr<BuilderPolicy> fresh_pair_builder() {
  return std::make_unique<FreshPairBuilder>();
}

}  // namespace orq
