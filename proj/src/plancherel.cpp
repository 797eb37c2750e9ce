#include "detpp/plancherel.hpp"

#include <algorithm>
#include <cmath>

namespace detpp {

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] <= 0)
      throw Error("InvalidPartition", "parts must be positive", 2);
    if (i > 0 && parts[i] > parts[i - 1])
      throw Error("InvalidPartition", "parts must be weakly decreasing", 2);
  }
}

int Partition::size() const {
  int s = 0;
  for (int p : parts) s += p;
  return s;
}

int Partition::part(int i) const {
  if (i < 1) throw Error("InvalidPartition", "part index starts at 1", 2);
  return i <= length() ? parts[i - 1] : 0;
}

namespace {

void gen_partitions(int remaining, int cap, std::vector<int>& cur,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    Partition lambda;
    lambda.parts = cur;
    out.push_back(lambda);
    return;
  }
  for (int first = std::min(remaining, cap); first >= 1; --first) {
    cur.push_back(first);
    gen_partitions(remaining - first, first, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_up_to(int max_size) {
  if (max_size < 0 || max_size > 40)
    throw Error("EnumerationTooLarge", "partition cutoff out of range", 2);
  std::vector<Partition> out;
  std::vector<int> cur;
  for (int k = 0; k <= max_size; ++k) gen_partitions(k, k, cur, out);
  return out;
}

double plancherel_weight(const Partition& lambda, double theta, int L) {
  if (theta < 0.0)
    throw Error("InvalidParameter", "theta must be nonnegative", 2);
  if (L < lambda.length())
    throw Error("DimensionMismatch", "padding length below partition length",
                2);
  const int n = lambda.size();
  if (theta == 0.0) return n == 0 ? 1.0 : 0.0;

  // log of dim(lambda)/|lambda|! via the padded hook-type product
  double log_inner = 0.0;
  for (int i = 1; i <= L; ++i) {
    for (int j = i + 1; j <= L; ++j) {
      const int diff = lambda.part(i) - i - (lambda.part(j) - j);
      log_inner += std::log(static_cast<double>(diff));
    }
    log_inner -= std::lgamma(static_cast<double>(lambda.part(i) - i + L + 1));
  }
  log_inner += n * std::log(theta);
  return std::exp(-theta * theta + 2.0 * log_inner);
}

bool point_occupied(const Partition& lambda, int doubled_x) {
  if (doubled_x % 2 == 0)
    throw Error("InvalidParameter", "doubled half-integer must be odd", 2);
  // lambda_i - i is strictly decreasing in i, so the scan terminates.
  for (int i = 1;; ++i) {
    const int v = 2 * (lambda.part(i) - i) + 1;
    if (v == doubled_x) return true;
    if (v < doubled_x) return false;
  }
}

HalfIntegerSet point_map(const Partition& lambda) {
  HalfIntegerSet s;
  const int len = lambda.length();
  for (int i = 1; i <= len; ++i) {
    const int d = 2 * (lambda.part(i) - i) + 1;
    if (d > 0) s.plus.push_back(d);
  }
  // a missing negative half-integer can only sit above depth length(lambda)
  for (int d = -1; d >= -(2 * len - 1); d -= 2)
    if (!point_occupied(lambda, d)) s.minus.push_back(d);
  return s;
}

double bessel_j(int order, double t) {
  if (std::abs(t) > 20.0)
    throw Error("ArgumentTooLarge", "Bessel argument above validated range",
                2);
  if (std::abs(order) > 300)
    throw Error("OrderTooLarge", "Bessel order above validated range", 2);
  double sign = 1.0;
  int n = order;
  if (n < 0) {
    n = -n;
    if (n % 2 == 1) sign = -sign;
  }
  if (t < 0.0) {
    t = -t;
    if (n % 2 == 1) sign = -sign;
  }
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;

  const double half = 0.5 * t;
  double term = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
  double sum = term;
  const double quarter = half * half;
  for (int m = 1; m <= 400; ++m) {
    term *= -quarter / (static_cast<double>(m) * (n + m));
    sum += term;
    if (std::abs(term) <= 1e-17 * (std::abs(sum) + 1e-280)) break;
  }
  return sign * sum;
}

namespace {

void require_odd(int d) {
  if (d % 2 == 0)
    throw Error("InvalidParameter", "doubled half-integer must be odd", 2);
}

}  // namespace

double discrete_bessel_series(int doubled_x, int doubled_y, double theta) {
  require_odd(doubled_x);
  require_odd(doubled_y);
  if (theta <= 0.0 || theta > 10.0)
    throw Error("ArgumentOutOfRange", "theta outside validated range", 2);
  const double t = 2.0 * theta;
  int a = (doubled_x + 1) / 2;
  int b = (doubled_y + 1) / 2;
  double acc = 0.0;
  int quiet = 0;
  for (int j = 0; j <= 350; ++j) {
    const double term = bessel_j(a + j, t) * bessel_j(b + j, t);
    acc += term;
    // Bessel factors pass through zeros, so require two small terms in a row
    if (std::abs(term) <= 1e-16 * (std::abs(acc) + 1e-280)) {
      if (++quiet >= 2 && a + j > t) break;
    } else {
      quiet = 0;
    }
  }
  return acc;
}

double discrete_bessel_kernel(int doubled_x, int doubled_y, double theta) {
  require_odd(doubled_x);
  require_odd(doubled_y);
  if (theta <= 0.0 || theta > 10.0)
    throw Error("ArgumentOutOfRange", "theta outside validated range", 2);
  if (doubled_x == doubled_y)
    return discrete_bessel_series(doubled_x, doubled_y, theta);
  const double t = 2.0 * theta;
  const double num =
      bessel_j((doubled_x - 1) / 2, t) * bessel_j((doubled_y + 1) / 2, t) -
      bessel_j((doubled_x + 1) / 2, t) * bessel_j((doubled_y - 1) / 2, t);
  return theta * num / (0.5 * (doubled_x - doubled_y));
}

KernelMatrix bessel_window_kernel(double theta, int doubled_lo,
                                  int doubled_hi) {
  require_odd(doubled_lo);
  require_odd(doubled_hi);
  if (doubled_lo > doubled_hi)
    throw Error("InvalidWindow", "empty half-integer window", 2);
  const int n = (doubled_hi - doubled_lo) / 2 + 1;
  GroundSet gs;
  gs.labels.reserve(n);
  for (int d = doubled_lo; d <= doubled_hi; d += 2)
    gs.labels.push_back(std::to_string(d) + "/2");
  gs.mu = RVec::Ones(n);
  CMat k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k(i, j) = discrete_bessel_kernel(doubled_lo + 2 * i, doubled_lo + 2 * j,
                                       theta);
  return KernelMatrix(gs, k);
}

TruncatedCorrelation plancherel_correlation(const std::vector<int>& doubled_pts,
                                            double theta, int cutoff) {
  for (int d : doubled_pts) require_odd(d);
  const auto all = partitions_up_to(cutoff);
  double acc = 0.0;
  for (const auto& lambda : all) {
    bool hit = true;
    for (int d : doubled_pts)
      if (!point_occupied(lambda, d)) {
        hit = false;
        break;
      }
    if (hit) acc += plancherel_weight(lambda, theta, lambda.length());
  }
  // Poisson(theta^2) mass beyond the cutoff; correlations are bounded by it
  double p = std::exp(-theta * theta);
  const double rate = theta * theta;
  for (int k = 0; k < cutoff; ++k) p *= rate / (k + 1);
  double tail = 0.0;
  for (int k = cutoff + 1; k <= cutoff + 400; ++k) {
    p *= rate / k;
    tail += p;
    if (p <= 1e-30 * (tail + 1e-280)) break;
  }
  return {acc, tail};
}

}  // namespace detpp
