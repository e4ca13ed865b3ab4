#include "orq/game.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace orq {

std::string to_string(GameKind k) {
  return k == GameKind::online_ramsey ? "online_ramsey" : "subgraph_query";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::ongoing: return "ongoing";
    case Outcome::red_clique: return "red_clique";
    case Outcome::blue_clique: return "blue_clique";
    case Outcome::found: return "found";
    case Outcome::budget_exhausted: return "budget_exhausted";
    case Outcome::builder_stopped: return "builder_stopped";
  }
  return "?";
}

GameKind game_kind_from_string(const std::string& s) {
  if (s == "online_ramsey") return GameKind::online_ramsey;
  if (s == "subgraph_query") return GameKind::subgraph_query;
  throw std::invalid_argument("unknown game kind: " + s);
}

Outcome outcome_from_string(const std::string& s) {
  for (Outcome o : {Outcome::ongoing, Outcome::red_clique, Outcome::blue_clique,
                    Outcome::found, Outcome::budget_exhausted,
                    Outcome::builder_stopped})
    if (to_string(o) == s) return o;
  throw std::invalid_argument("unknown outcome: " + s);
}

std::string format_real(double x) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string Transcript::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  throw std::out_of_range("transcript has no parameter " + key);
}

// Format, one record per line:
//   orq-transcript 1
//   game <kind>
//   seed <u64>
//   builder <id>
//   painter <id>
//   param <key> <value>      (repeated)
//   t <turn> <u> <w> <R|B|S|F> (repeated)
//   stop <reason>            (optional)
//   outcome <outcome> <turns>
void write_transcript(std::ostream& out, const Transcript& t) {
  out << "orq-transcript 1\n";
  out << "game " << to_string(t.kind) << '\n';
  out << "seed " << t.seed << '\n';
  out << "builder " << t.builder_id << '\n';
  out << "painter " << t.painter_id << '\n';
  for (const auto& [k, v] : t.params) out << "param " << k << ' ' << v << '\n';
  for (const Move& mv : t.moves)
    out << "t " << mv.turn << ' ' << mv.edge.u << ' ' << mv.edge.w << ' '
        << mv.result << '\n';
  if (!t.stop_reason.empty()) out << "stop " << t.stop_reason << '\n';
  out << "outcome " << to_string(t.outcome) << ' ' << t.moves.size() << '\n';
}

std::string to_text(const Transcript& t) {
  std::ostringstream out;
  write_transcript(out, t);
  return out.str();
}

Transcript read_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  bool header = false;
  bool done = false;
  auto rest_of = [](const std::string& l, std::size_t skip) {
    return l.size() > skip ? l.substr(skip) : std::string{};
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "orq-transcript") {
      int version = 0;
      ls >> version;
      if (version != 1) throw std::invalid_argument("unsupported transcript version");
      header = true;
    } else if (tag == "game") {
      std::string k;
      ls >> k;
      t.kind = game_kind_from_string(k);
    } else if (tag == "seed") {
      ls >> t.seed;
    } else if (tag == "builder") {
      t.builder_id = rest_of(line, 8);
    } else if (tag == "painter") {
      t.painter_id = rest_of(line, 8);
    } else if (tag == "param") {
      std::string k, v;
      ls >> k >> v;
      t.params.emplace_back(k, v);
    } else if (tag == "t") {
      Move mv;
      Vertex u = 0, w = 0;
      ls >> mv.turn >> u >> w >> mv.result;
      if (!ls || (mv.result != 'R' && mv.result != 'B' && mv.result != 'S' &&
                  mv.result != 'F'))
        throw std::invalid_argument("bad move line: " + line);
      mv.edge = Edge(u, w);
      t.moves.push_back(mv);
    } else if (tag == "stop") {
      t.stop_reason = rest_of(line, 5);
    } else if (tag == "outcome") {
      std::string o;
      std::size_t turns = 0;
      ls >> o >> turns;
      t.outcome = outcome_from_string(o);
      if (turns != t.moves.size())
        throw std::invalid_argument("outcome turn count does not match moves");
      done = true;
    } else {
      throw std::invalid_argument("unknown transcript record: " + line);
    }
  }
  if (!header || !done) throw std::invalid_argument("truncated transcript");
  return t;
}

Transcript parse_transcript(const std::string& text) {
  std::istringstream in(text);
  return read_transcript(in);
}

Board replay_board(const Transcript& t, int turn_cap) {
  Board board(turn_cap);
  for (const Move& mv : t.moves)
    board.add(mv.edge, (mv.result == 'R' || mv.result == 'S') ? Color::red
                                                              : Color::blue);
  return board;
}

namespace {

std::optional<Edge> ask_builder(BuilderPolicy& builder, const Board& board,
                                RandomStream& rng) {
  auto e = builder.next_edge(board, rng);
  if (!e) return e;
  if (auto why = board.illegal_reason(*e))
    throw ProtocolViolation("builder " + builder.id() + " at turn " +
                            std::to_string(board.turn() + 1) + ": " + *why);
  return e;
}

Outcome finish(Outcome hit, BuilderPolicy& builder, bool stopped,
               Transcript& t) {
  if (hit != Outcome::ongoing) return hit;
  if (stopped) {
    t.stop_reason = builder.stop_reason();
    return Outcome::builder_stopped;
  }
  return Outcome::budget_exhausted;
}

}  // namespace

Transcript play_online_ramsey(BuilderPolicy& builder, PainterPolicy& painter,
                              int m, int n, int turn_cap, std::uint64_t seed,
                              const GameOptions& options) {
  if (m < 2 || n < 2) throw std::invalid_argument("clique targets must be >= 2");
  if (turn_cap < 1) throw std::invalid_argument("turn_cap must be >= 1");
  Transcript t;
  t.kind = GameKind::online_ramsey;
  t.seed = seed;
  t.builder_id = builder.id();
  t.painter_id = painter.id();
  t.params = {{"m", std::to_string(m)},
              {"n", std::to_string(n)},
              {"turn_cap", std::to_string(turn_cap)}};

  RandomStream builder_rng(derive_seed(seed, StreamRole::builder));
  RandomStream painter_rng(derive_seed(seed, StreamRole::painter));
  Board board(turn_cap);
  Outcome hit = Outcome::ongoing;
  bool stopped = false;
  while (board.turn() < turn_cap) {
    auto e = ask_builder(builder, board, builder_rng);
    if (!e) {
      stopped = true;
      break;
    }
    Color c = painter.paint(board, *e, painter_rng);
    board.add(*e, c);
    t.moves.push_back({board.turn(), *e, c == Color::red ? 'R' : 'B'});
    if (options.on_move) options.on_move(board, board.history().back());
    if (hit == Outcome::ongoing) {
      if (c == Color::red && board.has_clique_through(*e, Color::red, m))
        hit = Outcome::red_clique;
      else if (c == Color::blue && board.has_clique_through(*e, Color::blue, n))
        hit = Outcome::blue_clique;
      if (hit != Outcome::ongoing && options.stop_at_target) break;
    }
  }
  t.outcome = finish(hit, builder, stopped, t);
  if (options.final_board) *options.final_board = std::move(board);
  return t;
}

Transcript play_subgraph_query(BuilderPolicy& builder, const SimpleGraph& target,
                               double p, int turn_cap, std::uint64_t seed,
                               const GameOptions& options) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0,1]");
  if (turn_cap < 1) throw std::invalid_argument("turn_cap must be >= 1");
  if (target.edge_count() == 0)
    throw std::invalid_argument("target graph needs at least one edge");
  Transcript t;
  t.kind = GameKind::subgraph_query;
  t.seed = seed;
  t.builder_id = builder.id();
  t.painter_id = "chance(p=" + format_real(p) + ")";
  t.params = {{"target", graph_code(target)},
              {"p", format_real(p)},
              {"turn_cap", std::to_string(turn_cap)}};

  RandomStream builder_rng(derive_seed(seed, StreamRole::builder));
  RandomStream chance_rng(derive_seed(seed, StreamRole::chance));
  Board board(turn_cap);
  Outcome hit = Outcome::ongoing;
  bool stopped = false;
  while (board.turn() < turn_cap) {
    auto e = ask_builder(builder, board, builder_rng);
    if (!e) {
      stopped = true;
      break;
    }
    bool success = chance_rng.bernoulli(p);
    Color c = success ? Color::red : Color::blue;
    board.add(*e, c);
    t.moves.push_back({board.turn(), *e, success ? 'S' : 'F'});
    if (options.on_move) options.on_move(board, board.history().back());
    if (hit == Outcome::ongoing && success &&
        board.has_copy_through(target, *e, Color::red)) {
      hit = Outcome::found;
      if (options.stop_at_target) break;
    }
  }
  t.outcome = finish(hit, builder, stopped, t);
  if (options.final_board) *options.final_board = std::move(board);
  return t;
}

int success_indicator(const Transcript& t) {
  switch (t.outcome) {
    case Outcome::red_clique:
    case Outcome::blue_clique:
    case Outcome::found:
      return 1;
    case Outcome::ongoing:
      throw std::logic_error("success_indicator on a non-terminal transcript");
    default:
      return 0;
  }
}

int turns_used(const Transcript& t) { return static_cast<int>(t.moves.size()); }

std::string graph_code(const SimpleGraph& g) {
  const int n = g.vertex_count();
  if (g.edge_count() == static_cast<std::int64_t>(n) * (n - 1) / 2)
    return "K" + std::to_string(n);
  if (n % 2 == 0 && n > 0) {
    int k = n / 2;
    if (make_half_graph_split(k).graph == g) return "H" + std::to_string(k);
  }
  std::string code = "G" + std::to_string(n) + ":";
  bool first = true;
  for (const Edge& e : g.edges()) {
    if (!first) code += ',';
    code += std::to_string(e.u) + "-" + std::to_string(e.w);
    first = false;
  }
  return code;
}

SimpleGraph graph_from_code(const std::string& code) {
  if (code.size() >= 2 && (code[0] == 'K' || code[0] == 'H') &&
      code.find(':') == std::string::npos) {
    int x = std::stoi(code.substr(1));
    if (x < 1) throw std::invalid_argument("bad graph code: " + code);
    return code[0] == 'K' ? complete_graph(x) : make_half_graph_split(x).graph;
  }
  auto colon = code.find(':');
  if (code.empty() || code[0] != 'G' || colon == std::string::npos)
    throw std::invalid_argument("bad graph code: " + code);
  SimpleGraph g(std::stoi(code.substr(1, colon - 1)));
  std::istringstream in(code.substr(colon + 1));
  std::string pair;
  while (std::getline(in, pair, ',')) {
    auto dash = pair.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("bad edge in " + code);
    g.add_edge(std::stoi(pair.substr(0, dash)), std::stoi(pair.substr(dash + 1)));
  }
  return g;
}

}  // namespace orq
