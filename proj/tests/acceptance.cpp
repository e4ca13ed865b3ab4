// Acceptance gate: one PASS/FAIL line per criterion. Every criterion leaves a
// deterministic artifact plus a run manifest; criterion 12 replays them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "orq/bounds.hpp"
#include "orq/builders.hpp"
#include "orq/exact.hpp"
#include "orq/harness.hpp"
#include "orq/painters.hpp"
#include "orq/weight_audit.hpp"

using namespace orq;
namespace fs = std::filesystem;

namespace {

// ---- pinned tolerances -----------------------------------------------------

constexpr int kFuzzGames = 100000;
constexpr int kRandomPainterGames = 1000;
constexpr int kSlopeTrials = 2000;
constexpr double kK3SlopeLo = -1.7, kK3SlopeHi = -1.3;
constexpr double kK4SlopeLo = -2.3, kK4SlopeHi = -1.7;
constexpr int kFHatSlack = 1;
constexpr double kNonDyadicTol = 1e-12;
constexpr int kAuditTrials = 10000;
constexpr double kTriangleRelTol = 0.10;
constexpr double kDiagonalTol = 0.15;
constexpr int kHalfgraphSeeds = 50;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string summary;
  std::string artifact;  // deterministic bytes, compared on replay
  std::uint64_t seed = 0;
  int trials = 0;
  std::map<std::string, std::string> strategies;
  std::map<std::string, std::string> grid;
};

// ---- 1: alteration painter never lets a red triangle through ---------------

// Knows the painter's activation threshold. Pushes vertices over it, then
// goes for pairs with red common neighbours.
class TriangleHunter : public BuilderPolicy {
 public:
  TriangleHunter(int pool, double threshold) : pool_(pool), threshold_(threshold) {}
  std::string id() const override { return "triangle-hunter(" + std::to_string(pool_) + ")"; }
  std::unique_ptr<BuilderPolicy> clone() const override {
    return std::make_unique<TriangleHunter>(*this);
  }
  std::optional<Edge> next_edge(const Board& board, RandomStream& rng) override {
    std::optional<Edge> best;
    double best_score = -1;
    const Vertex pool = std::min<Vertex>(pool_, board.vertex_cap());
    for (Vertex u = 0; u < pool; ++u)
      for (Vertex w = u + 1; w < pool; ++w) {
        Edge e(u, w);
        if (u < board.vertex_count() && w < board.vertex_count() && board.color(e)) continue;
        auto deg = [&](Vertex v) { return v < board.vertex_count() ? board.degree(v) : 0; };
        double score = rng.uniform();
        if (w < board.vertex_count())
          score += 8.0 * static_cast<double>(board.common_neighbors(u, w, Color::red).size());
        const bool au = deg(u) >= threshold_, aw = deg(w) >= threshold_;
        score += au && aw ? 4.0 : 0.0;
        // nearly active endpoints are worth pushing over the edge
        if (!au && deg(u) + 1 >= threshold_) score += 2.0;
        if (!aw && deg(w) + 1 >= threshold_) score += 2.0;
        if (score > best_score) { best_score = score; best = e; }
      }
    return best;
  }

 private:
  int pool_;
  double threshold_;
};

Verdict criterion_1() {
  Verdict v;
  v.seed = 101;
  v.trials = kFuzzGames;
  RandomStream pick(derive_seed(v.seed, StreamRole::probe, 0));
  std::map<std::string, std::array<std::int64_t, 3>> tally;  // games, red edges, violations
  std::int64_t violations = 0, altered = 0;
  for (int game = 0; game < kFuzzGames; ++game) {
    AlterationPainterConfig cfg = default_alteration_config(game % 2 ? 50 : 20);
    cfg.r = 5 + static_cast<int>(pick.below(60));
    cfg.p = 0.1 + 0.4 * pick.uniform();
    cfg.activation_threshold = 1 + pick.uniform() * (cfg.activation_threshold - 1);
    cfg.lazy = pick.bernoulli(0.25);
    const int pool = 8 + static_cast<int>(pick.below(17));
    std::unique_ptr<BuilderPolicy> builder;
    switch (game % 3) {
      case 0: builder = random_builder(pool); break;
      case 1: builder = red_greedy_builder(pool); break;
      default: builder = std::make_unique<TriangleHunter>(pool, cfg.activation_threshold);
    }
    auto painter = alteration_painter(cfg, pick.next_u64());
    const int cap = std::max(1, cfg.safe_turns());
    Board board(cap);
    GameOptions opt;
    opt.stop_at_target = false;
    opt.final_board = &board;
    play_online_ramsey(*builder, *painter, 3, cfg.n, cap, pick.next_u64(), opt);
    const SimpleGraph red = board.layer(Color::red);
    const bool bad = contains_clique(red, 3);
    violations += bad;
    altered += painter->altered_count();
    auto& t = tally[builder->id().substr(0, builder->id().find('('))];
    t[0] += 1;
    t[1] += red.edge_count();
    t[2] += bad;
  }
  std::ostringstream a;
  a << "builder,games,red_edges,violations\n";
  for (const auto& [id, t] : tally) a << id << ',' << t[0] << ',' << t[1] << ',' << t[2] << '\n';
  a << "altered_edges," << altered << '\n';
  v.artifact = a.str();
  v.pass = violations == 0;
  v.summary = fmt("%d fuzzed games, %lld red triangles, %lld altered edges", kFuzzGames,
                  static_cast<long long>(violations), static_cast<long long>(altered));
  v.strategies = {{"painter", "alteration"}, {"builders", "random,red-greedy,triangle-hunter"}};
  v.grid = {{"n", "20,50"}, {"r", "5..64"}};
  return v;
}

// ---- 2: branching builder always wins within its budget --------------------

Verdict criterion_2() {
  Verdict v;
  v.seed = 202;
  v.trials = kRandomPainterGames;
  std::ostringstream a;
  a << "m,n,budget,painter,games,wins,worst_turns\n";
  bool ok = true;
  std::string worst;
  for (auto [m, n] : {std::pair{3, 3}, {3, 4}, {4, 4}}) {
    BranchingConfig cfg;
    cfg.m = m;
    cfg.n = n;
    const auto budget = static_cast<int>(cfg.budget());
    auto proto = branching_builder(cfg);
    auto adv = adversarial_check(*proto, m, n, budget);
    ok = ok && adv.builder_always_wins && adv.worst_case_turns <= budget;
    a << m << ',' << n << ',' << budget << ",adversarial,all," << adv.builder_always_wins << ','
      << adv.worst_case_turns << '\n';
    worst += fmt(" (%d,%d):%d/%d", m, n, adv.worst_case_turns, budget);
    for (double p : {0.1, 0.5, 0.9}) {
      int wins = 0, worst_turns = 0;
      auto painter = random_painter(p);
      for (int g = 0; g < kRandomPainterGames; ++g) {
        auto b = proto->clone();
        auto pt = painter->clone();
        auto tr = play_online_ramsey(*b, *pt, m, n, budget,
                                     derive_seed(v.seed, StreamRole::trial, g));
        const bool won = tr.outcome == Outcome::red_clique || tr.outcome == Outcome::blue_clique;
        wins += won && turns_used(tr) <= budget;
        worst_turns = std::max(worst_turns, turns_used(tr));
      }
      ok = ok && wins == kRandomPainterGames;
      a << m << ',' << n << ',' << budget << ",random:" << csv_real(p) << ','
        << kRandomPainterGames << ',' << wins << ',' << worst_turns << '\n';
    }
  }
  v.artifact = a.str();
  v.pass = ok;
  v.summary = "adversarial worst/budget" + worst + ", 1000 random painters per p";
  v.strategies = {{"builder", "branching L=1"}, {"painter", "exact adversary, random"}};
  v.grid = {{"mn", "(3,3),(3,4),(4,4)"}, {"p", "0.1,0.5,0.9"}};
  return v;
}

// ---- 3, 4: exponent of f(K_m, p) -------------------------------------------

Verdict slope_criterion(int m, const std::vector<double>& ps, double lo, double hi,
                        std::uint64_t seed,
                        const std::function<std::unique_ptr<BuilderPolicy>(double)>& make) {
  Verdict v;
  v.seed = seed;
  v.trials = kSlopeTrials;
  std::ostringstream a;
  a << "p,f_hat,probes,success_at_f,wilson_lo\n";
  std::vector<std::pair<double, double>> pts;
  bool converged = true;
  std::string id;
  for (double p : ps) {
    auto b = make(p);
    id = b->id();
    auto r = estimate_f_hat(*b, complete_graph(m), p, kSlopeTrials, seed);
    if (!r.N) { converged = false; a << csv_real(p) << ",,,,\n"; continue; }
    const EstimateReport* at = nullptr;
    for (const auto& pr : r.probes)
      if (pr.N == *r.N) at = &pr.report;
    a << csv_real(p) << ',' << *r.N << ',' << r.probes.size() << ','
      << csv_real(at ? at->estimate : NAN) << ',' << csv_real(at ? at->wilson.lo : NAN) << '\n';
    pts.push_back({std::log(p), std::log(static_cast<double>(*r.N))});
  }
  SlopeFit fit = converged ? slope_fit(pts) : SlopeFit{};
  a << "slope," << csv_real(fit.slope) << ",stderr," << csv_real(fit.stderr_slope) << '\n';
  v.artifact = a.str();
  v.pass = converged && fit.slope >= lo && fit.slope <= hi;
  v.summary = fmt("slope %.3f (se %.3f), accepted [%.1f, %.1f]", fit.slope, fit.stderr_slope, lo, hi);
  std::string grid;
  for (double p : ps) grid += (grid.empty() ? "" : ",") + csv_real(p);
  v.strategies = {{"builder", id.substr(0, id.find('('))}};
  v.grid = {{"p", grid}, {"target", "K" + std::to_string(m)}};
  return v;
}

Verdict criterion_3() {
  return slope_criterion(3, {0.4, 0.3, 0.2, 0.1, 0.05}, kK3SlopeLo, kK3SlopeHi, 303,
                         [](double p) { return triangle_builder(p, 4.0); });
}

Verdict criterion_4() {
  return slope_criterion(4, {0.5, 0.4, 0.3, 0.2}, kK4SlopeLo, kK4SlopeHi, 404, [](double p) {
    BranchAndFillConfig cfg;
    cfg.m = 4;
    cfg.c_T = 4.0;
    cfg.restarts = kUnlimitedRestarts;
    return branch_and_fill_builder(cfg, p);
  });
}

// ---- 5: Monte Carlo against the exact solver -------------------------------

bool dyadic(double p) {
  for (int k = 0; k < 30; ++k, p *= 2)
    if (p == std::floor(p)) return true;
  return false;
}

Verdict criterion_5() {
  Verdict v;
  v.seed = 505;
  v.trials = kSlopeTrials;
  const SimpleGraph k3 = complete_graph(3);
  std::ostringstream a;
  auto exact = exact_f(k3, 0.5, 8);
  auto b = triangle_builder(0.5, 4.0);
  auto est = estimate_f_hat(*b, k3, 0.5, kSlopeTrials, v.seed);
  const bool f_ok = est.N && std::abs(*est.N - exact.budget) <= kFHatSlack;
  a << "exact_f," << exact.budget << ',' << fmt("%.17g", exact.probability) << '\n';
  a << "f_hat," << (est.N ? std::to_string(*est.N) : "none") << '\n';
  a << "p,budget,vertex_budget,exact,brute\n";
  int instances = 0, mismatches = 0;
  for (double p : {0.5, 0.25, 0.3})
    for (int vb = 3; vb <= 8; ++vb)
      for (int budget = 0; budget <= 5; ++budget) {
        const double x = exact_query_value(k3, p, budget, vb);
        const double y = brute_query_value(k3, p, budget, vb);
        ++instances;
        mismatches += dyadic(p) ? x != y : std::abs(x - y) > kNonDyadicTol;
        a << csv_real(p) << ',' << budget << ',' << vb << ',' << fmt("%.17g", x) << ','
          << fmt("%.17g", y) << '\n';
      }
  v.artifact = a.str();
  v.pass = f_ok && mismatches == 0;
  v.summary = fmt("f_hat %s vs exact %d (slack %d); exact vs brute %d/%d agree",
                  est.N ? std::to_string(*est.N).c_str() : "none", exact.budget, kFHatSlack,
                  instances - mismatches, instances);
  v.strategies = {{"builder", "triangle"}};
  v.grid = {{"p", "0.5,0.25,0.3"}, {"budget", "0..5"}, {"vertex_budget", "3..8"}};
  return v;
}

// ---- 6: one-sided weight bound ---------------------------------------------

Verdict criterion_6() {
  Verdict v;
  v.seed = 606;
  v.trials = kAuditTrials;
  std::vector<std::unique_ptr<BuilderPolicy>> builders;
  builders.push_back(clique_fill_builder(8));
  builders.push_back(random_builder(12));
  builders.push_back(red_greedy_builder(10));
  std::ostringstream a;
  a << "builder,m,c,p,mean,stderr,bound,ok\n";
  int cells = 0, good = 0;
  double worst_ratio = 0;
  for (const auto& b : builders)
    for (auto [m, c] : {std::pair{3, 1}, {4, 1}, {4, 2}})
      for (double p : {0.3, 0.5}) {
        auto r = audit_run(*b, m, c, p, 20, kAuditTrials, v.seed);
        const double bound = std::pow(p, m * (m - 1) / 2 - c * (c - 1)) * std::pow(40.0, m - c);
        const bool ok = r.mean + 3 * r.std_error <= bound && r.clique_count_violations == 0;
        ++cells;
        good += ok;
        worst_ratio = std::max(worst_ratio, (r.mean + 3 * r.std_error) / bound);
        a << r.builder_id << ',' << m << ',' << c << ',' << csv_real(p) << ','
          << fmt("%.17g", r.mean) << ',' << fmt("%.17g", r.std_error) << ','
          << fmt("%.17g", bound) << ',' << ok << '\n';
      }
  v.artifact = a.str();
  v.pass = good == cells;
  v.summary = fmt("%d/%d cells with mean+3SE <= bound, worst ratio %.3f", good, cells, worst_ratio);
  v.strategies = {{"builders", "clique-fill(8),random(12),red-greedy(10)"}, {"painter", "random"}};
  v.grid = {{"mc", "(3,1),(4,1),(4,2)"}, {"p", "0.3,0.5"}, {"N", "20"}};
  return v;
}

// ---- 7: expected labeled triangles under clique filling --------------------

Verdict criterion_7() {
  Verdict v;
  v.seed = 707;
  v.trials = 100;
  const double p = 0.5;
  const int N = 5000;
  const double target = p * p * p * std::pow(2.0 * N, 1.5);
  std::ostringstream a;
  a << "seed,triangles\n";
  double sum = 0;
  auto proto = clique_fill_builder(100);
  for (int s = 0; s < v.trials; ++s) {
    auto b = proto->clone();
    Board board(N);
    GameOptions opt;
    opt.stop_at_target = false;
    opt.final_board = &board;
    play_subgraph_query(*b, complete_graph(3), p, N, derive_seed(v.seed, StreamRole::trial, s), opt);
    const auto t = count_labeled_clique_copies(3, board.layer(Color::red));
    sum += static_cast<double>(t);
    a << s << ',' << t << '\n';
  }
  const double mean = sum / v.trials;
  v.artifact = a.str();
  v.pass = std::abs(mean - target) <= kTriangleRelTol * target;
  v.summary = fmt("mean %.1f vs %.0f (within %.0f%%)", mean, target, 100 * kTriangleRelTol);
  v.strategies = {{"builder", "clique-fill(100)"}};
  v.grid = {{"p", "0.5"}, {"N", "5000"}};
  return v;
}

// ---- 8: certified lower bounds ---------------------------------------------

Verdict criterion_8() {
  Verdict v;
  std::ostringstream a;
  auto small = best_certified_lower_bound(3, 3);
  std::vector<std::optional<int>> ladder;
  for (int vb = 6; vb <= 9; ++vb) ladder.push_back(exact_online_ramsey(3, 3, vb, 12));
  const bool stable = ladder.back() && ladder[ladder.size() - 2] == ladder.back();
  const bool sound = stable && small.N_star <= static_cast<std::uint64_t>(*ladder.back());
  a << "N_star(3,3)," << small.N_star << '\n';
  for (std::size_t i = 0; i < ladder.size(); ++i)
    a << "exact_r(3,3) vb=" << 6 + i << ',' << (ladder[i] ? std::to_string(*ladder[i]) : "inf")
      << '\n';
  a << "n,N_star,log2N_over_n\n";
  const double target = 2 - std::sqrt(2.0);
  double worst = 0;
  for (int n = 20; n <= 60; ++n) {
    auto c = best_certified_lower_bound(n, n);
    const double e = std::log2(static_cast<double>(c.N_star)) / n;
    worst = std::max(worst, std::abs(e - target));
    a << n << ',' << c.N_star << ',' << fmt("%.12g", e) << '\n';
  }
  v.artifact = a.str();
  v.pass = sound && worst <= kDiagonalTol;
  v.summary = fmt("N*(3,3)=%llu <= exact %s; diagonal max |log2 N*/n - (2-sqrt2)| = %.3f",
                  static_cast<unsigned long long>(small.N_star),
                  stable ? std::to_string(*ladder.back()).c_str() : "unstable", worst);
  v.grid = {{"n", "20..60"}, {"vertex_budget", "6..9"}};
  return v;
}

// ---- 9: two routes to the clique exponent agree ----------------------------

Verdict criterion_9() {
  Verdict v;
  std::ostringstream a;
  a << "m,a,b,via_split,via_cm\n";
  int bad = 0;
  for (int m = 4; m <= 30; ++m) {
    AbSplit s = choose_ab(m);
    const Rational lhs = Rational(-(2 * s.a + s.b + 1), 2) + alpha(s.a, s.b) / Rational(s.b);
    const Rational rhs = Rational(-2 * m, 3) + cm(m);
    bad += lhs != rhs;
    a << m << ',' << s.a << ',' << s.b << ',' << to_string(lhs) << ',' << to_string(rhs) << '\n';
  }
  v.artifact = a.str();
  v.pass = bad == 0;
  v.summary = fmt("%d/27 values of m agree exactly", 27 - bad);
  v.grid = {{"m", "4..30"}};
  return v;
}

// ---- 10: nested half-graph copies ------------------------------------------

Verdict criterion_10() {
  Verdict v;
  v.seed = 1010;
  v.trials = kHalfgraphSeeds;
  const int k = 2, N = 10000;
  const double p = 0.3;
  const double need = 0.5 * (p * N) * (p * N) / std::pow(k, k);
  const SimpleGraph h2 = make_half_graph_split(k).graph;
  std::ostringstream a;
  a << "seed,turns,h2_copies\n";
  double sum = 0;
  for (int s = 0; s < kHalfgraphSeeds; ++s) {
    auto b = nested_halfgraph_builder(k);
    Board board(N);
    GameOptions opt;
    opt.stop_at_target = false;
    opt.final_board = &board;
    auto tr = play_subgraph_query(*b, h2, p, N, derive_seed(v.seed, StreamRole::trial, s), opt);
    const auto c = count_labeled_h2_copies(board.layer(Color::red));
    sum += static_cast<double>(c);
    a << s << ',' << turns_used(tr) << ',' << c << '\n';
  }
  const double mean = sum / kHalfgraphSeeds;
  v.artifact = a.str();
  v.pass = mean >= need;
  v.summary = fmt("mean labeled H2 copies %.4g >= %.4g", mean, need);
  v.strategies = {{"builder", "nested-halfgraph(2)"}};
  v.grid = {{"p", "0.3"}, {"N", "10000"}};
  return v;
}

// ---- 11: sandwich at tiny scale --------------------------------------------

Verdict criterion_11() {
  Verdict v;
  std::ostringstream a;
  a << "p,r_random,r_probability,f_red,f_blue,lower,upper\n";
  bool ok = true;
  std::string line;
  for (double p : {0.3, 0.5, 0.7}) {
    auto s = sandwich_check(3, 3, p, 8);
    ok = ok && s.holds();
    a << csv_real(p) << ',' << s.r_random << ',' << fmt("%.17g", s.r_probability) << ','
      << s.f_red << (s.f_red_capped ? "+" : "") << ',' << s.f_blue << (s.f_blue_capped ? "+" : "")
      << ',' << s.lower_holds << ',' << s.upper_holds << '\n';
    line += fmt(" p=%.1f:r=%d,min f=%d", p, s.r_random, std::min(s.f_red, s.f_blue));
  }
  v.artifact = a.str();
  v.pass = ok;
  v.summary = "r <= min(f_red, f_blue) <= 3r at" + line;
  v.grid = {{"p", "0.3,0.5,0.7"}, {"vertex_budget", "8"}};
  return v;
}

using Criterion = std::function<Verdict()>;

const std::map<int, Criterion>& criteria() {
  static const std::map<int, Criterion> table = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3},  {4, criterion_4},
      {5, criterion_5}, {6, criterion_6}, {7, criterion_7},  {8, criterion_8},
      {9, criterion_9}, {10, criterion_10}, {11, criterion_11}};
  return table;
}

std::vector<std::string> command_for(int id) {
  return {"orq_acceptance", "--only", std::to_string(id)};
}

void record(const ManifestRegistry& reg, const fs::path& dir, int id, const Verdict& v) {
  const std::string path = (dir / ("criterion-" + std::to_string(id) + ".csv")).string();
  write_file(path, v.artifact);
  RunManifest m;
  m.experiment = "criterion-" + std::to_string(id);
  m.command = command_for(id);
  m.id = manifest_id(m.experiment, m.command);
  m.schema = "acceptance/1";
  m.seed = v.seed;
  m.trials = v.trials;
  m.strategies = v.strategies;
  m.grid = v.grid;
  m.created = utc_now_iso8601();
  m.outputs.push_back({path, fnv1a_hex(v.artifact), v.artifact.size()});
  reg.save(m);
}

// ---- 12: replay every manifest ---------------------------------------------

Verdict criterion_12(const ManifestRegistry& reg) {
  Verdict v;
  int replayed = 0, identical = 0;
  std::set<int> seen;
  std::string diffs;
  for (const auto& id : reg.ids()) {
    RunManifest m = reg.load(id);
    if (m.schema != "acceptance/1" || m.command.size() != 3) continue;
    const int which = std::stoi(m.command[2]);
    auto it = criteria().find(which);
    if (it == criteria().end() || m.outputs.size() != 1) continue;
    ++replayed;
    seen.insert(which);
    const std::string again = it->second().artifact;
    const auto& out = m.outputs[0];
    std::string stored;
    try {
      stored = read_file(out.path);
    } catch (const std::exception&) {
    }
    if (again == stored && fnv1a_hex(again) == out.digest) ++identical;
    else diffs += " " + std::to_string(which);
  }
  v.pass = replayed > 0 && identical == replayed;
  v.summary = fmt("%d/%d manifests replay byte-identical", identical, replayed) +
              (diffs.empty() ? "" : ", differing:" + diffs);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string out_dir = "acceptance-out";
  std::vector<int> only;
  app.add_option("--out", out_dir, "directory for artifacts and manifests");
  app.add_option("--only", only, "run just these criteria (1-12)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  std::set<int> chosen(only.begin(), only.end());
  if (chosen.empty())
    for (int i = 1; i <= 12; ++i) chosen.insert(i);
  const fs::path dir = fs::absolute(out_dir);
  fs::create_directories(dir);
  ManifestRegistry reg((dir / "runs").string());

  bool all = true;
  auto report = [&](int id, const Verdict& v, double secs) {
    all = all && v.pass;
    std::cout << fmt("criterion %2d: %s  %s [%.1fs]", id, v.pass ? "PASS" : "FAIL",
                     v.summary.c_str(), secs)
              << std::endl;
  };
  auto clock = [] { return std::chrono::steady_clock::now(); };
  for (int id : chosen) {
    auto t0 = clock();
    Verdict v;
    if (id == 12) {
      v = criterion_12(reg);
    } else if (auto it = criteria().find(id); it != criteria().end()) {
      v = it->second();
      record(reg, dir, id, v);
    } else {
      std::cerr << "no criterion " << id << "\n";
      return 2;
    }
    report(id, v, std::chrono::duration<double>(clock() - t0).count());
  }
  return all ? 0 : 4;
}
