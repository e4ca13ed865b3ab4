#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orq/game.hpp"
#include "orq/graph.hpp"

namespace orq {

inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double lo = 0;
  double hi = 1;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kZ95);

struct TurnStats {
  double mean = 0;
  double median = 0;
  int min = 0;
  int max = 0;
  double success_mean = 0;  // mean over successful trials only; 0 if none
};

struct EstimateReport {
  std::string builder_id;
  std::string target;  // graph_code
  double p = 0;
  int N = 0;
  int trials = 0;
  std::int64_t successes = 0;
  double estimate = 0;
  WilsonInterval wilson;
  TurnStats turns;
};

/// Fraction of `trials` query games (clones of `builder`, cap N) that find
/// the target. Trial i uses derive_seed(seed, trial, i). Requires trials >= 100.
EstimateReport estimate_success(const BuilderPolicy& builder, const SimpleGraph& target, double p,
                                int N, int trials, std::uint64_t seed);

struct FHatOptions {
  int hard_cap = 1 << 20;
  double z = kZ95;
};

struct FHatProbe {
  int N = 0;
  bool passed = false;  // Wilson lower bound >= 1/2
  EstimateReport report;
};

struct FHatResult {
  std::optional<int> N;  // nullopt: no probe up to hard_cap passed
  std::vector<FHatProbe> probes;
};

/// Least N whose Wilson lower bound on the success rate reaches 1/2. Doubling
/// from N = 1, then bisection. Every probe reuses the same per-trial seeds.
FHatResult estimate_f_hat(const BuilderPolicy& builder, const SimpleGraph& target, double p,
                          int trials, std::uint64_t seed, const FHatOptions& opt = {});

struct SlopeFit {
  double slope = 0;
  double stderr_slope = 0;
  double intercept = 0;
  int points = 0;
};

/// Ordinary least squares y = a + b x. Needs at least 4 points and two
/// distinct abscissae.
SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points);

/// %.12g; the fixed float format of every CSV this project writes.
std::string csv_real(double x);
/// One CSV line (with trailing newline), quoting cells that need it.
std::string csv_row(const std::vector<std::string>& cells);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

struct ManifestOutput {
  std::string path;
  std::string digest;  // fnv1a_hex of the bytes written
  std::uint64_t bytes = 0;
};

struct RunManifest {
  int version = 1;
  std::string id;
  std::string experiment;          // subcommand or acceptance criterion
  std::string schema;              // output schema tag, e.g. "estimate-f/1"
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<std::string> command;  // arguments needed to reproduce the run
  std::map<std::string, std::string> strategies;
  std::map<std::string, std::string> grid;
  std::string created;  // UTC, ISO 8601
  std::vector<ManifestOutput> outputs;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

/// Stable id from the experiment name and command.
std::string manifest_id(const std::string& experiment, const std::vector<std::string>& command);
std::string utc_now_iso8601();

/// Directory of manifests stored as <id>.json.
class ManifestRegistry {
 public:
  explicit ManifestRegistry(std::string dir) : dir_(std::move(dir)) {}
  const std::string& dir() const { return dir_; }
  std::string path_for(const std::string& id) const;
  /// Writes the manifest (creating the directory) and returns its path.
  std::string save(const RunManifest& m) const;
  /// Accepts a path to a manifest file or an id inside the registry.
  RunManifest load(const std::string& id_or_path) const;
  std::vector<std::string> ids() const;

 private:
  std::string dir_;
};

std::string read_file(const std::string& path);
/// Writes through a temporary file and a rename.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace orq
