#include "detpp/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "detpp/core.hpp"

namespace detpp {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Configuration sample(const KernelMatrix& kernel, std::mt19937_64& rng) {
  const int n = kernel.gs.size();
  CMat m = kernel.counting();
  Configuration cfg;
  for (int i = 0; i < n; ++i) {
    const cd diag = m(i, i);
    if (std::abs(diag.imag()) > 1e-9)
      throw Error("InvalidProbability", "inclusion probability not real", 3);
    double p = diag.real();
    if (p < -kDefaultVerifyTol || p > 1.0 + kDefaultVerifyTol)
      throw Error("InvalidProbability",
                  "inclusion probability outside [0,1] at " +
                      kernel.gs.labels[i],
                  3);
    p = std::clamp(p, 0.0, 1.0);
    const bool include = uniform01(rng) < p;
    // condition the remaining kernel on the decision at i
    const cd pivot = include ? m(i, i) : m(i, i) - 1.0;
    if (std::abs(pivot) < 1e-13)
      throw Error("SingularPivot", "conditioning pivot vanished", 3);
    m -= (m.col(i) * m.row(i)) / pivot;
    if (include) cfg.idx.push_back(i);
  }
  return cfg;
}

std::vector<CorrelationEstimate> empirical_correlations(
    const KernelMatrix& kernel, const std::vector<Configuration>& pts_list,
    long n_draws, std::mt19937_64& rng) {
  if (n_draws <= 0) throw Error("InvalidParameter", "need draws >= 1", 2);
  const int n = kernel.gs.size();
  std::vector<CorrelationEstimate> out;
  for (const auto& pts : pts_list) {
    pts.validate(n);
    CorrelationEstimate est;
    est.pts = pts;
    est.exact = kernel_correlation(kernel, pts).real();
    est.hits = 0;
    out.push_back(est);
  }

  std::vector<char> present(n);
  for (long d = 0; d < n_draws; ++d) {
    const Configuration cfg = sample(kernel, rng);
    std::fill(present.begin(), present.end(), 0);
    for (int i : cfg.idx) present[i] = 1;
    for (auto& est : out) {
      bool all = true;
      for (int i : est.pts.idx)
        if (!present[i]) {
          all = false;
          break;
        }
      if (all) ++est.hits;
    }
  }

  for (auto& est : out) {
    double mu_prod = 1.0;
    for (int i : est.pts.idx) mu_prod *= kernel.gs.mu(i);
    const double freq = static_cast<double>(est.hits) / n_draws;
    est.estimate = freq / mu_prod;
    est.std_error =
        std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / n_draws) / mu_prod;
  }
  return out;
}

}  // namespace detpp
