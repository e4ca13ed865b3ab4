#include "orq/bounds.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace orq {

namespace {

double log_sum_exp(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

long long pairs(int k) { return static_cast<long long>(k) * (k - 1) / 2; }

// Exponent of p (resp. 1-p) in one term of the certificate.
long long gap(int k, int c) { return pairs(k) - static_cast<long long>(c) * (c - 1); }

void check_domain(const BoundCertificate& c) {
  if (!(c.p > 0.0 && c.p < 1.0)) throw std::invalid_argument("certificate: p must lie in (0,1)");
  if (c.m < 1 || c.n < 1) throw std::invalid_argument("certificate: m, n >= 1");
  if (c.c < 0 || 2 * c.c > c.m) throw std::invalid_argument("certificate: need 0 <= c <= m/2");
  if (c.d < 0 || 2 * c.d > c.n) throw std::invalid_argument("certificate: need 0 <= d <= n/2");
  if (c.N < 1) throw std::invalid_argument("certificate: N >= 1");
}

double log_two_n(std::uint64_t N) { return std::log(2.0) + std::log(static_cast<double>(N)); }

}  // namespace

double BoundCertificate::lhs_value() const { return std::exp(certificate_log_lhs(*this)); }

double certificate_log_lhs(const BoundCertificate& cert) {
  check_domain(cert);
  const double L = log_two_n(cert.N);
  const double red = static_cast<double>(gap(cert.m, cert.c)) * std::log(cert.p) +
                     (cert.m - cert.c) * L;
  const double blue = static_cast<double>(gap(cert.n, cert.d)) * std::log1p(-cert.p) +
                      (cert.n - cert.d) * L;
  return log_sum_exp(red, blue);
}

bool certificate_holds(const BoundCertificate& cert) {
  return certificate_log_lhs(cert) <= std::log(0.5);
}

namespace {

struct Search {
  int m, n;

  // Best c for the red term at (log p, log 2N), and its log value.
  std::pair<int, double> best_term(int k, double logq, double L) const {
    int arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; 2 * c <= k; ++c) {
      double v = static_cast<double>(gap(k, c)) * logq + (k - c) * L;
      if (v < best) { best = v; arg = c; }
    }
    return {arg, best};
  }

  double log_lhs(double p, std::uint64_t N) const {
    const double L = log_two_n(N);
    return log_sum_exp(best_term(m, std::log(p), L).second,
                       best_term(n, std::log1p(-p), L).second);
  }

  // A grid point certifying N, or -1.
  double certifying_p(const std::vector<double>& grid, std::uint64_t N) const {
    for (double p : grid)
      if (log_lhs(p, N) <= std::log(0.5)) return p;
    return -1.0;
  }

  std::uint64_t max_certified(const std::vector<double>& grid, std::uint64_t lo) const {
    // lo certifies (or is 0).
    if (lo == 0) {
      if (certifying_p(grid, 1) < 0) return 0;
      lo = 1;
    }
    std::uint64_t hi = lo * 2;
    const std::uint64_t limit = std::uint64_t{1} << 62;
    while (hi < limit && certifying_p(grid, hi) >= 0) {
      lo = hi;
      hi *= 2;
    }
    if (hi >= limit) return lo;
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (certifying_p(grid, mid) >= 0 ? lo : hi) = mid;
    }
    return lo;
  }
};

}  // namespace

CertifiedBound best_certified_lower_bound(int m, int n, const LowerBoundSearch& opt) {
  if (m < 3 || n < 3) throw std::invalid_argument("best_certified_lower_bound: m, n >= 3");
  if (opt.per_decade < 1 || !(opt.min_p > 0.0 && opt.min_p < 0.5))
    throw std::invalid_argument("best_certified_lower_bound: bad grid");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double q = opt.min_p * std::pow(10.0, static_cast<double>(i) / opt.per_decade);
    if (q >= 0.5) break;
    grid.push_back(q);
    grid.push_back(1.0 - q);
  }
  grid.push_back(0.5);
  std::sort(grid.begin(), grid.end());
  Search s{m, n};
  CertifiedBound out;
  out.grid_points = static_cast<int>(grid.size());
  std::uint64_t N = s.max_certified(grid, 0);

  if (opt.refine) {
    // Refine around the grid point closest to certifying N + 1.
    std::size_t arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double v = s.log_lhs(grid[i], N + 1);
      if (v < best) { best = v; arg = i; }
    }
    const double lo = grid[arg > 0 ? arg - 1 : 0];
    const double hi = grid[std::min(arg + 1, grid.size() - 1)];
    std::vector<double> fine;
    for (int i = 0; i <= opt.per_decade; ++i)
      fine.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / opt.per_decade));
    out.grid_points += static_cast<int>(fine.size());
    N = s.max_certified(fine, N);
    grid.insert(grid.end(), fine.begin(), fine.end());
  }

  out.N_star = N;
  if (N == 0) return out;
  const double p = s.certifying_p(grid, N);
  const double L = log_two_n(N);
  BoundCertificate cert;
  cert.m = m;
  cert.n = n;
  cert.N = N;
  cert.p = p;
  cert.c = s.best_term(m, std::log(p), L).first;
  cert.d = s.best_term(n, std::log1p(-p), L).first;
  cert.log_lhs = certificate_log_lhs(cert);
  out.cert = cert;
  return out;
}

Rational f_lower_exponent(int m, int c) {
  if (m < 2 || c < 0 || 2 * c > m) throw std::invalid_argument("f_lower_exponent: need 0 <= c <= m/2");
  return Rational(gap(m, c), m - c);
}

double f_lower_bound(int m, int c, double p) {
  if (m < 3) throw std::invalid_argument("f_lower_bound: m >= 3");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("f_lower_bound: p in (0,1)");
  return 0.25 * std::pow(p, -to_double(f_lower_exponent(m, c)));
}

int f_lower_best_c(int m) {
  int arg = 0;
  Rational best(-1);
  for (int c = 0; 2 * c <= m; ++c)
    if (auto e = f_lower_exponent(m, c); e > best) { best = e; arg = c; }
  return arg;
}

Rational cm(int m) {
  if (m < 4) throw std::invalid_argument("cm: m >= 4");
  switch (m % 3) {
    case 0: return Rational(m, 2 * m - 3);
    case 1: return Rational(2, 3);
    default: return Rational(2 * m + 8, 6 * m - 3);
  }
}

Rational cm_exponent(int m) { return Rational(-2 * m, 3) + cm(m); }

TBound t_upper_bound(const SimpleGraph& h, int k, double p, double N, double A) {
  if (!(A > 1.0)) throw std::invalid_argument("t_upper_bound: A must exceed 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("t_upper_bound: p in (0,1]");
  if (!(N >= 1.0)) throw std::invalid_argument("t_upper_bound: N >= 1");
  if (k < 0 || max_matching_size(h) < k)
    throw std::invalid_argument("t_upper_bound: H has no " + std::to_string(k) + "-matching");
  const auto e = static_cast<int>(h.edge_count());
  TBound t;
  t.A = A;
  t.p_exponent = e - k * (k - 1);
  t.n_exponent = h.vertex_count() - k;
  t.in_regime = p * N >= 1.0;
  t.log_value = (e > 0 ? e * std::log(A * e) : 0.0) + t.p_exponent * std::log(p) +
                t.n_exponent * std::log(2.0 * N);
  t.value = std::exp(t.log_value);
  return t;
}

double e_plus(double d, double p, double M, double eps) {
  if (d < 0 || M < 2 || !(eps > 0 && eps < 1) || !(p > 0 && p <= 1))
    throw std::invalid_argument("e_plus: domain");
  if (d < M * std::sqrt(p)) return d * d / 2;
  if (d < M) return (1 + eps) * p * M * M / 2;
  return (1 + eps) * p * d * d / 2;
}

double t_star(int m, double p, double edge_count) {
  if (m < 2 || !(p > 0 && p <= 1) || edge_count < 1) throw std::invalid_argument("t_star: domain");
  return std::exp(static_cast<double>(pairs(m)) * std::log(p) +
                  0.5 * m * std::log(2.0 * edge_count / p));
}

double opt_p(int m, int n, double C) {
  if (m < 3 || n <= m || !(C > 0)) throw std::invalid_argument("opt_p: need 3 <= m < n, C > 0");
  const double v = C * (static_cast<double>(m) / n) * std::log(static_cast<double>(n) / m);
  return std::clamp(v, 1e-12, 1.0 - 1e-12);
}

}  // namespace orq
