#include "orq/painters.hpp"

#include <algorithm>
#include <cmath>

namespace orq {

namespace {

class RandomPainter : public PainterPolicy {
 public:
  explicit RandomPainter(double p) : p_(p) {}
  std::string id() const override { return "random(p=" + format_real(p_) + ")"; }
  Color paint(const Board&, Edge, RandomStream& rng) override {
    return rng.bernoulli(p_) ? Color::red : Color::blue;
  }
  std::unique_ptr<PainterPolicy> clone() const override {
    return std::make_unique<RandomPainter>(*this);
  }

 private:
  double p_;
};

class ConstantPainter : public PainterPolicy {
 public:
  explicit ConstantPainter(Color c) : c_(c) {}
  std::string id() const override {
    return c_ == Color::red ? "all_red" : "all_blue";
  }
  Color paint(const Board&, Edge, RandomStream&) override { return c_; }
  std::unique_ptr<PainterPolicy> clone() const override {
    return std::make_unique<ConstantPainter>(*this);
  }

 private:
  Color c_;
};

}  // namespace

std::unique_ptr<PainterPolicy> random_painter(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("random_painter: p outside (0,1)");
  return std::make_unique<RandomPainter>(p);
}

std::unique_ptr<PainterPolicy> all_red_painter() {
  return std::make_unique<ConstantPainter>(Color::red);
}

std::unique_ptr<PainterPolicy> all_blue_painter() {
  return std::make_unique<ConstantPainter>(Color::blue);
}

int AlterationPainterConfig::safe_turns() const {
  return static_cast<int>(std::floor(activation_threshold * r / 2.0));
}

void AlterationPainterConfig::validate() const {
  if (n < 2) throw std::invalid_argument("alteration painter: n < 2");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("alteration painter: p outside (0,1)");
  if (r < 1) throw std::invalid_argument("alteration painter: r < 1");
  if (activation_threshold < 1)
    throw std::invalid_argument("alteration painter: threshold < 1");
}

AlterationPainterConfig default_alteration_config(int n) {
  if (n < 2) throw std::invalid_argument("alteration painter: n < 2");
  AlterationPainterConfig cfg;
  cfg.n = n;
  const double ln = std::log(static_cast<double>(n));
  cfg.p = std::min(20.0 * ln / n, 0.5);
  cfg.r = std::max(1, static_cast<int>(std::floor(1e-6 * n * static_cast<double>(n) / (ln * ln))));
  cfg.activation_threshold = std::max(1.0, (n - 1) / 4.0);
  return cfg;
}

AlterationPainter::AlterationPainter(const AlterationPainterConfig& cfg,
                                     std::uint64_t seed)
    : cfg_(cfg), seed_(seed), hidden_(cfg.r) {
  cfg_.validate();
  RandomStream rng(derive_seed(seed, StreamRole::hidden));
  for (Vertex i = 0; i < cfg_.r; ++i)
    for (Vertex j = i + 1; j < cfg_.r; ++j)
      if (rng.bernoulli(cfg_.p)) hidden_.add_edge(i, j);
}

std::string AlterationPainter::id() const {
  return "alteration(n=" + std::to_string(cfg_.n) + ",p=" + format_real(cfg_.p) +
         ",r=" + std::to_string(cfg_.r) +
         ",threshold=" + format_real(cfg_.activation_threshold) +
         (cfg_.lazy ? ",lazy" : "") + ",seed=" + std::to_string(seed_) + ")";
}

int AlterationPainter::label(Vertex v) const {
  return v >= 0 && v < static_cast<Vertex>(labels_.size()) ? labels_[v] : 0;
}

Color AlterationPainter::paint(const Board& board, Edge e, RandomStream& rng) {
  if (static_cast<Vertex>(labels_.size()) <= e.w) labels_.resize(e.w + 1, 0);
  // Degrees as they will be once e is built. u < w, so u is labelled first
  // when both cross the threshold on this edge.
  for (Vertex v : {e.u, e.w}) {
    if (labels_[v] != 0 || board.degree(v) + 1 < cfg_.activation_threshold) continue;
    if (next_label_ > cfg_.r)
      throw CapExceeded("alteration painter: more than r=" + std::to_string(cfg_.r) +
                        " active vertices at turn " + std::to_string(board.turn() + 1));
    labels_[v] = next_label_++;
  }
  if (labels_[e.u] == 0 || labels_[e.w] == 0) return Color::blue;
  if (!board.common_neighbors(e.u, e.w, Color::red).empty()) {
    ++altered_;
    return Color::blue;
  }
  if (cfg_.lazy) return rng.bernoulli(cfg_.p) ? Color::red : Color::blue;
  return hidden_.adjacent(labels_[e.u] - 1, labels_[e.w] - 1) ? Color::red
                                                              : Color::blue;
}

std::unique_ptr<PainterPolicy> AlterationPainter::clone() const {
  return std::make_unique<AlterationPainter>(*this);
}

std::unique_ptr<AlterationPainter> alteration_painter(
    const AlterationPainterConfig& cfg, std::uint64_t seed) {
  return std::make_unique<AlterationPainter>(cfg, seed);
}

}  // namespace orq
