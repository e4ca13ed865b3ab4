#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "orq/graph.hpp"
#include "orq/rational.hpp"

namespace orq {

/// Witness (m, n, N, p, c, d) for the lower bound r~(m,n) > N. The inequality
/// p^{C(m,2)-c(c-1)} (2N)^{m-c} + (1-p)^{C(n,2)-d(d-1)} (2N)^{n-d} <= 1/2
/// is evaluated in log space.
struct BoundCertificate {
  int m = 3;
  int n = 3;
  std::uint64_t N = 1;
  double p = 0.5;
  int c = 0;
  int d = 0;
  double log_lhs = 0.0;  // natural log of the left-hand side, filled by evaluate
  double lhs_value() const;
};

/// Natural log of the left-hand side. Throws std::invalid_argument on domain
/// violations.
double certificate_log_lhs(const BoundCertificate& cert);
bool certificate_holds(const BoundCertificate& cert);

struct LowerBoundSearch {
  int per_decade = 200;      // geometric p grid density
  double min_p = 1e-7;       // grid covers [min_p, 1/2] and its mirror
  bool refine = true;        // second pass around the best grid point
};

struct CertifiedBound {
  std::uint64_t N_star = 0;  // 0 when nothing certifies N = 1
  BoundCertificate cert;     // valid certificate for N_star when N_star > 0
  int grid_points = 0;
};

/// Largest N with a valid certificate over the p grid and all c <= m/2,
/// d <= n/2. Doubling then bisection on N; for fixed (p, N) the best c and d
/// are chosen independently since each only enters one term.
CertifiedBound best_certified_lower_bound(int m, int n, const LowerBoundSearch& opt = {});

/// (C(m,2) - c(c-1)) / (m - c).
Rational f_lower_exponent(int m, int c);
/// (1/4) p^{-f_lower_exponent(m,c)}.
double f_lower_bound(int m, int c, double p);
/// Integer c in [0, m/2] maximising f_lower_exponent.
int f_lower_best_c(int m);

/// m/(2m-3), 2/3 or (2m+8)/(6m-3) by m mod 3 (0, 1, 2).
Rational cm(int m);
/// -(2/3) m + cm(m).
Rational cm_exponent(int m);

struct TBound {
  double log_value = 0.0;   // natural log
  double value = 0.0;       // exp(log_value); may be inf
  int p_exponent = 0;       // e(H) - k(k-1)
  int n_exponent = 0;       // v(H) - k, exponent of 2N
  double A = 3.0;
  bool in_regime = true;    // pN >= 1
  /// value < 1/2, which forces f(H, p) > N.
  bool forces_f_above_N() const { return log_value < std::log(0.5); }
};

/// (A e)^e p^{e-k(k-1)} (2N)^{v-k}. Throws std::invalid_argument unless h has
/// a k-matching and A > 1.
TBound t_upper_bound(const SimpleGraph& h, int k, double p, double N, double A = 3.0);

/// d^2/2 below M sqrt(p), (1+eps) p M^2/2 up to M, (1+eps) p d^2/2 beyond.
double e_plus(double d, double p, double M, double eps);

/// p^{C(m,2)} (2N/p)^{m/2}, with N the edge count of the host.
double t_star(int m, double p, double edge_count);

/// clamp(C (m/n) ln(n/m)) into [1e-12, 1 - 1e-12].
double opt_p(int m, int n, double C = 1.0);

}  // namespace orq
