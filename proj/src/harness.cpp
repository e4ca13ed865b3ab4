#include "orq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "orq/random.hpp"

namespace orq {

namespace fs = std::filesystem;

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials > 0");
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (ph + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
  // Rounding can push an endpoint past the estimate at 0 or 1.
  WilsonInterval w{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) w.lo = 0.0;
  if (successes == trials) w.hi = 1.0;
  w.lo = std::min(w.lo, ph);
  w.hi = std::max(w.hi, ph);
  return w;
}

EstimateReport estimate_success(const BuilderPolicy& builder, const SimpleGraph& target, double p,
                                int N, int trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("estimate_success: trials >= 100");
  if (N < 0) throw std::invalid_argument("estimate_success: N >= 0");
  EstimateReport r;
  r.builder_id = builder.id();
  r.target = graph_code(target);
  r.p = p;
  r.N = N;
  r.trials = trials;
  std::vector<int> turns;
  turns.reserve(static_cast<std::size_t>(trials));
  double success_turns = 0;
  for (int i = 0; i < trials; ++i) {
    auto b = builder.clone();
    auto t = play_subgraph_query(*b, target, p, N, derive_seed(seed, StreamRole::trial, i));
    const int used = turns_used(t);
    turns.push_back(used);
    if (success_indicator(t)) {
      ++r.successes;
      success_turns += used;
    }
  }
  r.estimate = static_cast<double>(r.successes) / trials;
  r.wilson = wilson_interval(r.successes, trials);
  double sum = 0;
  for (int t : turns) sum += t;
  r.turns.mean = sum / trials;
  std::sort(turns.begin(), turns.end());
  const std::size_t h = turns.size() / 2;
  r.turns.median = turns.size() % 2 ? turns[h] : 0.5 * (turns[h - 1] + turns[h]);
  r.turns.min = turns.front();
  r.turns.max = turns.back();
  r.turns.success_mean = r.successes ? success_turns / static_cast<double>(r.successes) : 0.0;
  return r;
}

FHatResult estimate_f_hat(const BuilderPolicy& builder, const SimpleGraph& target, double p,
                          int trials, std::uint64_t seed, const FHatOptions& opt) {
  if (opt.hard_cap < 1) throw std::invalid_argument("estimate_f_hat: hard_cap >= 1");
  FHatResult out;
  auto probe = [&](int N) {
    FHatProbe pr;
    pr.N = N;
    pr.report = estimate_success(builder, target, p, N, trials, seed);
    pr.report.wilson = wilson_interval(pr.report.successes, trials, opt.z);
    pr.passed = pr.report.wilson.lo >= 0.5;
    out.probes.push_back(pr);
    return pr.passed;
  };
  int lo = 0;  // largest N known to fail (0 always fails)
  int hi = 1;
  while (!probe(hi)) {
    lo = hi;
    if (hi >= opt.hard_cap) return out;
    hi = std::min(opt.hard_cap, 2 * hi);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (probe(mid) ? hi : lo) = mid;
  }
  out.N = hi;
  return out;
}

SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw std::invalid_argument("slope_fit: need at least 4 points");
  double mx = 0, my = 0;
  for (auto [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("slope_fit: degenerate abscissae");
  SlopeFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (auto [x, y] : points) {
    const double r = y - f.intercept - f.slope * x;
    ssr += r * r;
  }
  f.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
  return f;
}

std::string csv_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      line += c;
      continue;
    }
    line += '"';
    for (char ch : c) {
      if (ch == '"') line += '"';
      line += ch;
    }
    line += '"';
  }
  line += '\n';
  return line;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["id"] = id;
  j["experiment"] = experiment;
  j["schema"] = schema;
  j["seed"] = seed;
  j["trials"] = trials;
  j["command"] = command;
  j["strategies"] = strategies;
  j["grid"] = grid;
  j["created"] = created;
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : outputs)
    j["outputs"].push_back({{"path", o.path}, {"digest", o.digest}, {"bytes", o.bytes}});
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  RunManifest m;
  try {
    m.version = j.at("version").get<int>();
    if (m.version != 1) throw std::invalid_argument("manifest: unsupported version");
    m.id = j.at("id").get<std::string>();
    m.experiment = j.at("experiment").get<std::string>();
    m.schema = j.value("schema", "");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.trials = j.value("trials", 0);
    m.command = j.at("command").get<std::vector<std::string>>();
    m.strategies = j.value("strategies", std::map<std::string, std::string>{});
    m.grid = j.value("grid", std::map<std::string, std::string>{});
    m.created = j.value("created", "");
    for (const auto& o : j.at("outputs"))
      m.outputs.push_back({o.at("path").get<std::string>(), o.at("digest").get<std::string>(),
                           o.at("bytes").get<std::uint64_t>()});
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  return m;
}

std::string manifest_id(const std::string& experiment, const std::vector<std::string>& command) {
  std::string joined = experiment;
  for (const auto& a : command) joined += '\x1f' + a;
  return experiment + "-" + fnv1a_hex(joined).substr(0, 12);
}

std::string utc_now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string ManifestRegistry::path_for(const std::string& id) const {
  return (fs::path(dir_) / (id + ".json")).string();
}

std::string ManifestRegistry::save(const RunManifest& m) const {
  if (m.id.empty()) throw std::invalid_argument("manifest: empty id");
  fs::create_directories(dir_);
  const std::string path = path_for(m.id);
  write_file(path, m.to_json());
  return path;
}

RunManifest ManifestRegistry::load(const std::string& id_or_path) const {
  std::string path = id_or_path;
  if (!fs::is_regular_file(path)) path = path_for(id_or_path);
  if (!fs::is_regular_file(path))
    throw std::invalid_argument("manifest not found: " + id_or_path);
  return RunManifest::from_json(read_file(path));
}

std::vector<std::string> ManifestRegistry::ids() const {
  std::vector<std::string> out;
  if (!fs::is_directory(dir_)) return out;
  for (const auto& e : fs::directory_iterator(dir_))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << bytes;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace orq
