#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "orq/bounds.hpp"
#include "orq/builders.hpp"
#include "orq/exact.hpp"
#include "orq/harness.hpp"
#include "orq/painters.hpp"
#include "orq/random.hpp"
#include "orq/weight_audit.hpp"

namespace orq::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::pair<std::string, std::string> split_desc(const std::string& desc) {
  auto colon = desc.find(':');
  if (colon == std::string::npos) return {desc, ""};
  return {desc.substr(0, colon), desc.substr(colon + 1)};
}

double arg_real(const std::string& arg, double fallback) {
  if (arg.empty()) return fallback;
  std::size_t used = 0;
  double v = std::stod(arg, &used);
  if (used != arg.size()) throw std::invalid_argument("bad number in desc: " + arg);
  return v;
}

int arg_int(const std::string& arg, int fallback) {
  if (arg.empty()) return fallback;
  std::size_t used = 0;
  int v = std::stoi(arg, &used);
  if (used != arg.size()) throw std::invalid_argument("bad integer in desc: " + arg);
  return v;
}

int clique_order(const SimpleGraph& g) {
  const int v = g.vertex_count();
  if (g.edge_count() != static_cast<std::int64_t>(v) * (v - 1) / 2)
    throw std::invalid_argument("builder needs a clique target, got " + graph_code(g));
  return v;
}

// A table that renders as CSV (header row first) or as a JSON array.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(const std::string& format) const {
    if (format == "csv") {
      std::string s = csv_row(header);
      for (const auto& r : rows) s += csv_row(r);
      return s;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json o;
      for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string& cell = r[i];
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v))
          o[header[i]] = v;
        else
          o[header[i]] = cell;
      }
      arr.push_back(o);
    }
    return arr.dump(2) + "\n";
  }
};

struct Result {
  std::string bytes;
  std::string schema;
  std::map<std::string, std::string> strategies;
  std::map<std::string, std::string> grid;
  int trials = 0;
  int code = kOk;
};

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
  return s;
}

std::string exponent_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

std::unique_ptr<BuilderPolicy> make_builder(const std::string& desc, double p,
                                            const SimpleGraph& target, int m, int n) {
  auto [name, arg] = split_desc(desc);
  if (name == "triangle") {
    if (graph_code(target) != "K3") throw std::invalid_argument("triangle builder targets K3");
    return triangle_builder(p, arg_real(arg, 4.0));
  }
  if (name == "bnf") {
    BranchAndFillConfig cfg;
    cfg.m = clique_order(target);
    cfg.c_T = arg_real(arg, 4.0);
    cfg.restarts = kUnlimitedRestarts;
    return branch_and_fill_builder(cfg, p);
  }
  if (name == "nested") {
    const std::string code = graph_code(target);
    int k = code.size() > 1 && code[0] == 'H' ? std::stoi(code.substr(1)) : 0;
    return nested_halfgraph_builder(arg_int(arg, k));
  }
  if (name == "clique-fill") return clique_fill_builder(arg_int(arg, 8));
  if (name == "random") return random_builder(arg_int(arg, 12));
  if (name == "red-greedy") return red_greedy_builder(arg_int(arg, 10));
  if (name == "fresh-pairs") return fresh_pair_builder();
  if (name == "branching") {
    BranchingConfig cfg;
    cfg.m = m;
    cfg.n = n;
    return branching_builder(cfg);
  }
  throw std::invalid_argument("unknown builder: " + desc);
}

std::unique_ptr<PainterPolicy> make_painter(const std::string& desc, double p, int n,
                                            std::uint64_t seed) {
  auto [name, arg] = split_desc(desc);
  if (name == "random") return random_painter(p);
  if (name == "all-red") return all_red_painter();
  if (name == "all-blue") return all_blue_painter();
  if (name == "alteration") {
    AlterationPainterConfig cfg = default_alteration_config(n);
    cfg.r = arg_int(arg, cfg.r);
    return alteration_painter(cfg, derive_seed(seed, StreamRole::hidden));
  }
  throw std::invalid_argument("unknown painter: " + desc);
}

namespace {

struct Globals {
  std::uint64_t seed = 1;
  int trials = -1;
  std::string out;
  std::string format = "csv";
  std::string manifest;
  std::string registry = "runs";
  bool no_manifest = false;
};

int trials_or(const Globals& g, int fallback) { return g.trials > 0 ? g.trials : fallback; }

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string game = "ramsey";
  std::string builder;
  std::string painter = "random";
  int m = 3, n = 3;
  std::string target = "K3";
  double p = 0.5;
  int turns = -1;
};

Result do_simulate(const Globals& g, const SimulateArgs& a) {
  Result r;
  r.schema = "transcript/1";
  const SimpleGraph target = graph_from_code(a.target);
  if (a.game == "ramsey") {
    auto b = make_builder(a.builder.empty() ? "branching" : a.builder, a.p, target, a.m, a.n);
    auto painter = make_painter(a.painter, a.p, a.n, g.seed);
    int turns = a.turns;
    if (turns < 0) {
      BranchingConfig cfg;
      cfg.m = a.m;
      cfg.n = a.n;
      turns = static_cast<int>(std::min<long long>(cfg.budget(), 100000));
    }
    auto t = play_online_ramsey(*b, *painter, a.m, a.n, turns, g.seed);
    r.bytes = to_text(t);
    r.strategies = {{"builder", t.builder_id}, {"painter", t.painter_id}};
  } else if (a.game == "query") {
    auto b = make_builder(a.builder.empty() ? "triangle" : a.builder, a.p, target, a.m, a.n);
    auto t = play_subgraph_query(*b, target, a.p, a.turns < 0 ? 1000 : a.turns, g.seed);
    r.bytes = to_text(t);
    r.strategies = {{"builder", t.builder_id}};
  } else {
    throw std::invalid_argument("--game must be ramsey or query");
  }
  return r;
}

// ---- estimate-f -------------------------------------------------------------

struct EstimateArgs {
  std::string target = "K3";
  std::vector<double> ps;
  std::string builder;
  int hard_cap = 1 << 20;
};

Result do_estimate_f(const Globals& g, const EstimateArgs& a) {
  Result r;
  r.schema = "estimate-f/1";
  r.trials = trials_or(g, 2000);
  const SimpleGraph target = graph_from_code(a.target);
  std::string desc = a.builder;
  if (desc.empty()) {
    const std::string code = graph_code(target);
    desc = code == "K3" ? "triangle" : code[0] == 'H' ? "nested" : "bnf";
  }
  Table t;
  t.header = {"target", "builder", "p", "f_hat", "converged", "probes", "success_at_f",
              "wilson_lo", "wilson_hi", "median_turns", "trials", "seed"};
  FHatOptions opt;
  opt.hard_cap = a.hard_cap;
  for (double p : a.ps) {
    auto b = make_builder(desc, p, target, 0, 0);
    auto f = estimate_f_hat(*b, target, p, r.trials, g.seed, opt);
    const FHatProbe* at = nullptr;
    for (const auto& pr : f.probes)
      if (f.N && pr.N == *f.N) at = &pr;
    if (!at) at = &f.probes.back();
    t.rows.push_back({graph_code(target), b->id(), csv_real(p),
                      f.N ? std::to_string(*f.N) : "", f.N ? "1" : "0",
                      std::to_string(f.probes.size()), csv_real(at->report.estimate),
                      csv_real(at->report.wilson.lo), csv_real(at->report.wilson.hi),
                      csv_real(at->report.turns.median), std::to_string(r.trials),
                      std::to_string(g.seed)});
    if (!f.N) r.code = kCheckFailed;
  }
  r.bytes = t.render(g.format);
  r.strategies = {{"builder", desc}};
  r.grid = {{"p", join_reals(a.ps)}, {"target", graph_code(target)}};
  return r;
}

// ---- certify ----------------------------------------------------------------

Result do_certify(const Globals& g, int m, int n, int per_decade) {
  Result r;
  r.schema = "certificate/1";
  LowerBoundSearch opt;
  opt.per_decade = per_decade;
  auto b = best_certified_lower_bound(m, n, opt);
  const bool holds = b.N_star > 0 && certificate_holds(b.cert);
  Table t;
  t.header = {"m", "n", "N_star", "p", "c", "d", "log_lhs", "holds"};
  t.rows.push_back({std::to_string(m), std::to_string(n), std::to_string(b.N_star),
                    csv_real(b.cert.p), std::to_string(b.cert.c), std::to_string(b.cert.d),
                    csv_real(b.cert.log_lhs), holds ? "1" : "0"});
  if (g.format == "json") {
    ordered_json j;
    j["m"] = m;
    j["n"] = n;
    j["N_star"] = b.N_star;
    j["certificate"] = {{"N", b.cert.N}, {"p", b.cert.p}, {"c", b.cert.c}, {"d", b.cert.d},
                        {"log_lhs", b.cert.log_lhs}};
    j["holds"] = holds;
    r.bytes = j.dump(2) + "\n";
  } else {
    r.bytes = t.render("csv");
  }
  r.grid = {{"per_decade", std::to_string(per_decade)}};
  if (b.N_star > 0 && !holds) r.code = kCheckFailed;
  return r;
}

// ---- audit-weights ----------------------------------------------------------

struct AuditArgs {
  std::string builder = "clique-fill:8";
  int m = 4, c = 2, N = 20;
  double p = 0.5;
};

Result do_audit(const Globals& g, const AuditArgs& a) {
  Result r;
  r.schema = "audit/1";
  r.trials = trials_or(g, 10000);
  auto b = make_builder(a.builder, a.p, complete_graph(a.m), a.m, a.m);
  auto rep = audit_run(*b, a.m, a.c, a.p, a.N, r.trials, g.seed);
  if (g.format == "json") {
    r.bytes = rep.to_json() + "\n";
  } else {
    Table t;
    t.header = {"builder", "m", "c", "p", "N", "trials", "mean", "stderr", "bound", "verdict"};
    t.rows.push_back({rep.builder_id, std::to_string(a.m), std::to_string(a.c), csv_real(a.p),
                      std::to_string(a.N), std::to_string(r.trials), csv_real(rep.mean),
                      csv_real(rep.std_error), csv_real(rep.bound), rep.verdict ? "1" : "0"});
    r.bytes = t.render("csv");
  }
  r.strategies = {{"builder", rep.builder_id}};
  if (!rep.verdict || rep.clique_count_violations) r.code = kCheckFailed;
  return r;
}

// ---- solve-exact ------------------------------------------------------------

constexpr int kCacheVersion = 1;

struct ExactArgs {
  std::string game = "online";
  int m = 3, n = 3;
  int vertex_budget = 8;
  int turn_cap = -1;
  std::string target = "K3";
  double p = 0.5;
  int budget = -1;
  std::string cache_dir = ".orq-cache";
  bool no_cache = false;
};

std::string cache_key(const ExactArgs& a) {
  std::ostringstream k;
  k << a.game << "|m=" << a.m << "|n=" << a.n << "|vb=" << a.vertex_budget
    << "|cap=" << a.turn_cap << "|target=" << a.target << "|p=" << format_real(a.p)
    << "|budget=" << a.budget;
  return k.str();
}

ordered_json stats_json(const SolverStats& s) {
  return {{"nodes", s.nodes}, {"memo_entries", s.memo_entries}, {"memo_hits", s.memo_hits},
          {"canonicalisations", s.canonicalisations}};
}

std::string moves_text(const std::vector<Move>& moves) {
  std::string s;
  for (const Move& mv : moves)
    s += (s.empty() ? "" : " ") + std::to_string(mv.edge.u) + "-" + std::to_string(mv.edge.w) +
         mv.result;
  return s;
}

ordered_json compute_exact(ExactArgs a) {
  ordered_json j;
  j["game"] = a.game;
  if (a.game == "online") {
    if (a.turn_cap < 0) a.turn_cap = a.vertex_budget * (a.vertex_budget - 1) / 2;
    auto res = solve_online_ramsey(a.m, a.n, a.vertex_budget, a.turn_cap);
    j["parameters"] = {{"m", a.m}, {"n", a.n}, {"vertex_budget", a.vertex_budget},
                       {"turn_cap", a.turn_cap}};
    j["value"] = res.value ? ordered_json(*res.value) : ordered_json("inf");
    j["principal_variation"] = moves_text(res.principal_variation);
    j["stats"] = stats_json(res.stats);
  } else if (a.game == "query") {
    const SimpleGraph h = graph_from_code(a.target);
    j["parameters"] = {{"target", a.target}, {"p", a.p}, {"vertex_budget", a.vertex_budget}};
    ChanceSolver solver(h, 0, a.p, a.vertex_budget);
    if (a.budget >= 0) {
      j["parameters"]["budget"] = a.budget;
      j["value"] = solver.value(a.budget);
      if (auto e = solver.best_first_move(a.budget))
        j["principal_variation"] = std::to_string(e->u) + "-" + std::to_string(e->w);
    } else {
      auto f = exact_f(h, a.p, a.vertex_budget);
      j["value"] = f.budget;
      j["probability"] = f.probability;
      if (auto e = solver.best_first_move(f.budget))
        j["principal_variation"] = std::to_string(e->u) + "-" + std::to_string(e->w);
    }
    j["stats"] = stats_json(solver.stats());
  } else if (a.game == "classical") {
    j["parameters"] = {{"s", a.m}, {"t", a.n}};
    auto r = classical_ramsey_number(a.m, a.n);
    j["value"] = r ? ordered_json(*r) : ordered_json("unknown");
  } else if (a.game == "sandwich") {
    auto s = sandwich_check(a.m, a.n, a.p, a.vertex_budget);
    j["parameters"] = {{"m", a.m}, {"n", a.n}, {"p", a.p}, {"vertex_budget", a.vertex_budget}};
    j["value"] = {{"r_random", s.r_random}, {"r_probability", s.r_probability},
                  {"f_red", s.f_red}, {"f_blue", s.f_blue}, {"f_red_capped", s.f_red_capped},
                  {"f_blue_capped", s.f_blue_capped}, {"holds", s.holds()}};
  } else {
    throw std::invalid_argument("--game must be online, query, classical or sandwich");
  }
  return j;
}

Result do_solve_exact(const Globals& g, const ExactArgs& a, std::ostream& err) {
  Result r;
  r.schema = "exact/1";
  const std::string key = cache_key(a);
  const fs::path table = fs::path(a.cache_dir) / ("exact-v" + std::to_string(kCacheVersion) + ".json");
  nlohmann::json cache = {{"version", kCacheVersion}, {"entries", nlohmann::json::object()}};
  if (!a.no_cache && fs::is_regular_file(table)) {
    try {
      auto loaded = nlohmann::json::parse(read_file(table.string()));
      if (loaded.value("version", 0) == kCacheVersion) cache = loaded;
    } catch (const nlohmann::json::exception&) {
      err << "ignoring unreadable cache " << table << "\n";
    }
  }
  ordered_json j;
  if (!a.no_cache && cache["entries"].contains(key)) {
    j = ordered_json::parse(cache["entries"][key].get<std::string>());
    err << "cache hit: " << key << "\n";
  } else {
    j = compute_exact(a);
    if (!a.no_cache) {
      cache["entries"][key] = j.dump();
      write_file(table.string(), cache.dump(2) + "\n");
    }
  }
  if (g.format == "json") {
    r.bytes = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s << "game: " << j["game"].get<std::string>() << "\n";
    s << "parameters: " << j["parameters"].dump() << "\n";
    s << "value: " << j["value"].dump() << "\n";
    if (j.contains("probability")) s << "probability: " << j["probability"].dump() << "\n";
    if (j.contains("principal_variation"))
      s << "principal_variation: " << j["principal_variation"].get<std::string>() << "\n";
    if (j.contains("stats"))
      for (auto& [k, v] : j["stats"].items()) s << k << ": " << v.dump() << "\n";
    r.bytes = s.str();
  }
  if (a.game == "sandwich" && !j["value"]["holds"].get<bool>()) r.code = kCheckFailed;
  return r;
}

// ---- tabulate-bounds --------------------------------------------------------

Result do_tabulate(const Globals& g, const std::vector<int>& ms, const std::vector<int>& ns,
                   double p) {
  Result r;
  r.schema = "bounds/1";
  Table t;
  t.header = {"m", "n", "quantity", "exponent", "value_log10", "parameters"};
  for (int m : ms) {
    if (m < 3) throw std::invalid_argument("tabulate-bounds: m >= 3");
    const int c = f_lower_best_c(m);
    const Rational lo = f_lower_exponent(m, c);
    t.rows.push_back({std::to_string(m), "", "f_lower_exponent", csv_real(to_double(lo)),
                      csv_real(std::log10(f_lower_bound(m, c, p))),
                      "c=" + std::to_string(c) + ";p=" + csv_real(p) + ";exact=" + exponent_text(lo)});
    Rational up = m == 3 ? Rational(3, 2) : -cm_exponent(m);
    std::string params = "p=" + csv_real(p) + ";exact=" + exponent_text(up);
    if (m >= 4) {
      auto [a, b] = choose_ab(m);
      params = "a=" + std::to_string(a) + ";b=" + std::to_string(b) + ";" + params;
    }
    t.rows.push_back({std::to_string(m), "", "f_upper_exponent", csv_real(to_double(up)),
                      csv_real(to_double(up) * -std::log10(p)), params});
    for (int n : ns) {
      if (n < m) continue;
      auto b = best_certified_lower_bound(m, n);
      const double ln = std::log(static_cast<double>(n));
      t.rows.push_back(
          {std::to_string(m), std::to_string(n), "online_ramsey_lower",
           b.N_star ? csv_real(std::log(static_cast<double>(b.N_star)) / ln) : "",
           b.N_star ? csv_real(std::log10(static_cast<double>(b.N_star))) : "",
           "N=" + std::to_string(b.N_star) + ";p=" + csv_real(b.cert.p) +
               ";c=" + std::to_string(b.cert.c) + ";d=" + std::to_string(b.cert.d)});
      if (n > m)
        t.rows.push_back({std::to_string(m), std::to_string(n), "opt_p", "",
                          csv_real(std::log10(opt_p(m, n))), "C=1"});
    }
  }
  r.bytes = t.render(g.format);
  r.grid = {{"p", csv_real(p)}};
  return r;
}

// ---- dispatch ---------------------------------------------------------------

std::vector<std::string> strip_io(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    bool takes_value = a == "--out" || a == "--manifest" || a == "--registry";
    if (takes_value) {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--manifest=", 0) == 0 ||
        a.rfind("--registry=", 0) == 0 || a == "--no-manifest")
      continue;
    out.push_back(a);
  }
  return out;
}

int emit(const Globals& g, const std::string& experiment, const std::vector<std::string>& args,
         const Result& r, std::ostream& out) {
  if (g.out.empty()) {
    out << r.bytes;
  } else {
    write_file(g.out, r.bytes);
  }
  const bool want_manifest = !g.no_manifest && (!g.out.empty() || !g.manifest.empty());
  if (want_manifest) {
    RunManifest m;
    m.experiment = experiment;
    m.schema = r.schema;
    m.seed = g.seed;
    m.trials = r.trials;
    m.command = strip_io(args);
    m.id = manifest_id(experiment, m.command);
    m.strategies = r.strategies;
    m.grid = r.grid;
    m.created = utc_now_iso8601();
    m.outputs.push_back({g.out.empty() ? "-" : g.out, fnv1a_hex(r.bytes), r.bytes.size()});
    try {
      if (g.manifest.empty()) {
        ManifestRegistry(g.registry).save(m);
      } else {
        write_file(g.manifest, m.to_json());
      }
    } catch (...) {
      // No results on disk without a manifest.
      if (!g.out.empty()) fs::remove(g.out);
      throw;
    }
  }
  return r.code;
}

int do_replay(const Globals& g, std::ostream& out, std::ostream& err) {
  if (g.manifest.empty()) throw std::invalid_argument("replay needs --manifest <id|path>");
  const RunManifest m = ManifestRegistry(g.registry).load(g.manifest);
  if (m.outputs.size() != 1) throw std::invalid_argument("manifest: expected one output");
  const fs::path tmp = fs::temp_directory_path() /
                       ("orq-replay-" + m.id + "-" + std::to_string(::getpid()) + ".out");
  std::vector<std::string> args = m.command;
  args.insert(args.end(), {"--out", tmp.string(), "--no-manifest"});
  std::ostringstream sink;
  const int rc = run(args, sink, err);
  if (!fs::is_regular_file(tmp)) {
    err << "replay " << m.id << ": command produced no output (exit " << rc << ")\n";
    return kCheckFailed;
  }
  const std::string bytes = read_file(tmp.string());
  fs::remove(tmp);
  const auto& rec = m.outputs.front();
  bool same = fnv1a_hex(bytes) == rec.digest && bytes.size() == rec.bytes;
  if (same && rec.path != "-" && fs::is_regular_file(rec.path))
    same = read_file(rec.path) == bytes;
  out << "replay " << m.id << ": " << (same ? "identical" : "DIFFERENT") << " (" << bytes.size()
      << " bytes, digest " << fnv1a_hex(bytes) << ")\n";
  return same ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online Ramsey and subgraph query experiments", "orq"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "root seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials per estimate");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--manifest", g.manifest, "manifest path to write, or to replay");
  app.add_option("--registry", g.registry, "manifest registry directory");
  app.add_flag("--no-manifest", g.no_manifest)->group("");

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "play one game and print its transcript");
  s_sim->add_option("--game", sim.game, "ramsey or query");
  s_sim->add_option("--builder", sim.builder);
  s_sim->add_option("--painter", sim.painter);
  s_sim->add_option("--m", sim.m);
  s_sim->add_option("--n", sim.n);
  s_sim->add_option("--target", sim.target);
  s_sim->add_option("--p", sim.p);
  s_sim->add_option("--turns", sim.turns);

  EstimateArgs est;
  auto* s_est = app.add_subcommand("estimate-f", "empirical f over a grid of p");
  s_est->add_option("--target", est.target);
  s_est->add_option("--p", est.ps)->delimiter(',')->required();
  s_est->add_option("--builder", est.builder);
  s_est->add_option("--hard-cap", est.hard_cap);

  int cm_ = 3, cn_ = 40, per_decade = 200;
  auto* s_cert = app.add_subcommand("certify", "best certified online Ramsey lower bound");
  s_cert->add_option("--m", cm_)->required();
  s_cert->add_option("--n", cn_)->required();
  s_cert->add_option("--per-decade", per_decade);

  AuditArgs aud;
  auto* s_aud = app.add_subcommand("audit-weights", "Monte Carlo audit of the weight bound");
  s_aud->add_option("--builder", aud.builder);
  s_aud->add_option("--m", aud.m);
  s_aud->add_option("--c", aud.c);
  s_aud->add_option("--p", aud.p);
  s_aud->add_option("--N", aud.N);

  ExactArgs ex;
  auto* s_ex = app.add_subcommand("solve-exact", "exact values at desk scale");
  s_ex->add_option("--game", ex.game, "online, query, classical or sandwich");
  s_ex->add_option("--m", ex.m);
  s_ex->add_option("--n", ex.n);
  s_ex->add_option("--vertex-budget", ex.vertex_budget);
  s_ex->add_option("--turn-cap", ex.turn_cap);
  s_ex->add_option("--target", ex.target);
  s_ex->add_option("--p", ex.p);
  s_ex->add_option("--budget", ex.budget);
  s_ex->add_option("--cache-dir", ex.cache_dir);
  s_ex->add_flag("--no-cache", ex.no_cache);

  std::vector<int> tab_m{3, 4, 5, 6}, tab_n{10, 20, 40, 80};
  double tab_p = 0.1;
  auto* s_tab = app.add_subcommand("tabulate-bounds", "closed-form bounds as CSV");
  s_tab->add_option("--m", tab_m)->delimiter(',');
  s_tab->add_option("--n", tab_n)->delimiter(',');
  s_tab->add_option("--p", tab_p);

  auto* s_replay = app.add_subcommand("replay", "rerun a manifest and compare outputs");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (s_replay->parsed()) return do_replay(g, out, err);
    if (s_sim->parsed()) return emit(g, "simulate", args, do_simulate(g, sim), out);
    if (s_est->parsed()) return emit(g, "estimate-f", args, do_estimate_f(g, est), out);
    if (s_cert->parsed()) return emit(g, "certify", args, do_certify(g, cm_, cn_, per_decade), out);
    if (s_aud->parsed()) return emit(g, "audit-weights", args, do_audit(g, aud), out);
    if (s_ex->parsed()) return emit(g, "solve-exact", args, do_solve_exact(g, ex, err), out);
    if (s_tab->parsed())
      return emit(g, "tabulate-bounds", args, do_tabulate(g, tab_m, tab_n, tab_p), out);
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace orq::cli
