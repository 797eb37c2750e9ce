#include "detpp/continuum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace detpp {

double sine_kernel(double x, double y) {
  if (x == y) return 1.0;
  const double d = x - y;
  return std::sin(M_PI * d) / (M_PI * d);
}

namespace {

// minimal double-double arithmetic, enough for the Airy series
struct dd {
  double hi = 0.0;
  double lo = 0.0;
};

dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

dd quick_two_sum(double a, double b) {  // needs |a| >= |b|
  const double s = a + b;
  return {s, b - (s - a)};
}

dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

dd dd_add(const dd& a, const dd& b) {
  dd s = two_sum(a.hi, b.hi);
  const dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

dd dd_mul(const dd& a, const dd& b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

dd dd_div_d(const dd& a, double b) {
  const double q1 = a.hi / b;
  const dd r = two_prod(q1, b);
  const double q2 = ((a.hi - r.hi) - r.lo + a.lo) / b;
  return quick_two_sum(q1, q2);
}

// Ai(0) and -Ai'(0) to double-double precision
const dd kAiryAlpha = {0.3550280538878172, 2.05233632436212e-17};
const dd kAiryBeta = {0.2588194037928068, -2.522243111610832e-17};

}  // namespace

AiryValue airy_fn(double x) {
  if (std::abs(x) > 12.0)
    throw Error("ArgumentOutOfRange", "Airy argument above validated range",
                2);
  const dd x2 = two_prod(x, x);
  const dd x3 = dd_mul(x2, {x, 0.0});

  // f  = sum c_k x^{3k},      c_0 = 1, c_{k+1} = c_k / ((3k+2)(3k+3))
  // g  = sum d_k x^{3k+1},    d_0 = 1, d_{k+1} = d_k / ((3k+3)(3k+4))
  // f' = sum 3k c_k x^{3k-1},   term ratio x^3 / (3k(3k+2))
  // g' = sum (3k+1) d_k x^{3k}, term ratio x^3 / ((3k+1)(3k+3))
  dd f = {1.0, 0.0}, g = {x, 0.0}, fp = {0.0, 0.0}, gp = {1.0, 0.0};
  dd tf = f, tg = g, tu = {0.0, 0.0}, tv = gp;
  for (int k = 0; k <= 250; ++k) {
    const double a = 3.0 * k;
    tf = dd_div_d(dd_mul(tf, x3), (a + 2.0) * (a + 3.0));
    tg = dd_div_d(dd_mul(tg, x3), (a + 3.0) * (a + 4.0));
    tv = dd_div_d(dd_mul(tv, x3), (a + 1.0) * (a + 3.0));
    tu = (k == 0) ? dd_div_d(x2, 2.0)
                  : dd_div_d(dd_mul(tu, x3), a * (a + 2.0));
    f = dd_add(f, tf);
    g = dd_add(g, tg);
    gp = dd_add(gp, tv);
    fp = dd_add(fp, tu);
    const double biggest =
        std::max(std::max(std::abs(tf.hi), std::abs(tg.hi)),
                 std::max(std::abs(tu.hi), std::abs(tv.hi)));
    if (k >= 2 && biggest <= 1e-24) break;
  }

  const dd ai = dd_add(dd_mul(kAiryAlpha, f),
                       dd_mul({-kAiryBeta.hi, -kAiryBeta.lo}, g));
  const dd aip = dd_add(dd_mul(kAiryAlpha, fp),
                        dd_mul({-kAiryBeta.hi, -kAiryBeta.lo}, gp));
  return {ai.hi + ai.lo, aip.hi + aip.lo};
}

double airy_kernel(double x, double y) {
  if (std::abs(x - y) < 1e-9) {
    const double m = 0.5 * (x + y);
    const AiryValue v = airy_fn(m);
    return v.ai_prime * v.ai_prime - m * v.ai * v.ai;
  }
  const AiryValue vx = airy_fn(x);
  const AiryValue vy = airy_fn(y);
  return (vx.ai * vy.ai_prime - vx.ai_prime * vy.ai) / (x - y);
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1 || order > 500)
    throw Error("InvalidParameter", "quadrature order out of range", 2);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_order(x) and its derivative
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
  }
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return rule;
}

NystromGrid NystromGrid::on_interval(double a, double b, int order) {
  return on_intervals({{a, b}}, order);
}

NystromGrid NystromGrid::on_intervals(
    const std::vector<std::pair<double, double>>& intervals, int order) {
  if (intervals.empty())
    throw Error("InvalidWindow", "need at least one interval", 2);
  auto sorted = intervals;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].first < sorted[i].second))
      throw Error("InvalidWindow", "interval endpoints must increase", 2);
    if (i > 0 && sorted[i].first < sorted[i - 1].second)
      throw Error("InvalidWindow", "intervals must be disjoint", 2);
  }
  const QuadratureRule rule = gauss_legendre(order);
  NystromGrid grid;
  for (const auto& [a, b] : sorted) {
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
      grid.nodes.push_back(mid + rad * rule.nodes[i]);
      grid.weights.push_back(rad * rule.weights[i]);
    }
  }
  return grid;
}

namespace {

RMat symmetrized_discretization(const ScalarKernel& kernel,
                                const NystromGrid& grid) {
  const int n = static_cast<int>(grid.nodes.size());
  RVec root(n);
  for (int i = 0; i < n; ++i) root(i) = std::sqrt(grid.weights[i]);
  RMat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b(i, j) = root(i) * kernel(grid.nodes[i], grid.nodes[j]) * root(j);
  return 0.5 * (b + RMat(b.transpose()));
}

}  // namespace

double fredholm_det(const ScalarKernel& kernel, const NystromGrid& grid) {
  const int n = static_cast<int>(grid.nodes.size());
  if (n == 0) throw Error("InvalidWindow", "empty grid", 2);
  const RMat a = RMat::Identity(n, n) - symmetrized_discretization(kernel, grid);
  return a.determinant();
}

SpectrumCheck discretized_validity(const ScalarKernel& kernel,
                                   const NystromGrid& grid, double tol) {
  const RMat b = symmetrized_discretization(kernel, grid);
  Eigen::SelfAdjointEigenSolver<RMat> es(b, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return {lo, hi, lo >= -tol && hi <= 1.0 + tol};
}

}  // namespace detpp
