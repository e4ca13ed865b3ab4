#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "orq/game.hpp"

namespace orq {

/// Independent painter: red with probability p on every edge.
std::unique_ptr<PainterPolicy> random_painter(double p);
std::unique_ptr<PainterPolicy> all_red_painter();
std::unique_ptr<PainterPolicy> all_blue_painter();

struct AlterationPainterConfig {
  int n = 0;                        // blue clique size being defended against
  double p = 0;                     // red probability on unaltered active edges
  int r = 1;                        // label pool size
  double activation_threshold = 1;  // degree at which a vertex activates
  /// Flip a fresh coin per unaltered active edge instead of consulting the
  /// hidden label graph. Same colour law, different randomness source.
  bool lazy = false;

  /// Turn budget under which label overflow cannot happen: threshold*r/2,
  /// which is (n-1)r/8 at the default threshold.
  int safe_turns() const;
  void validate() const;
};

/// Defaults for target n: p = 20 ln n / n capped at 1/2,
/// r = max(1, floor(1e-6 n^2 / ln^2 n)), threshold = max(1, (n-1)/4).
AlterationPainterConfig default_alteration_config(int n);

/// Triangle-avoiding painter. Vertices activate once their degree reaches the
/// threshold and take labels 1..r in activation order (lower vertex index
/// first on ties). An edge with an endpoint still inactive right after it is
/// built is blue. An active edge whose endpoints already share a red
/// neighbour is blue ("altered"). Any other active edge is red iff its label
/// pair is an edge of a hidden G(r, p).
class AlterationPainter : public PainterPolicy {
 public:
  AlterationPainter(const AlterationPainterConfig& cfg, std::uint64_t seed);

  std::string id() const override;
  Color paint(const Board& board, Edge e, RandomStream& rng) override;
  std::unique_ptr<PainterPolicy> clone() const override;

  const AlterationPainterConfig& config() const { return cfg_; }
  /// Hidden graph on labels; label i is vertex i-1.
  const SimpleGraph& hidden_graph() const { return hidden_; }
  /// 1-based label of v, or 0 while inactive.
  int label(Vertex v) const;
  int active_count() const { return next_label_ - 1; }
  std::int64_t altered_count() const { return altered_; }

 private:
  AlterationPainterConfig cfg_;
  std::uint64_t seed_;
  SimpleGraph hidden_;
  std::vector<int> labels_;
  int next_label_ = 1;
  std::int64_t altered_ = 0;
};

std::unique_ptr<AlterationPainter> alteration_painter(
    const AlterationPainterConfig& cfg, std::uint64_t seed);

}  // namespace orq
