#pragma once

#include <random>

#include "detpp/types.hpp"

namespace detpp {

// Uniform double in [0,1) built from the top 53 bits of the generator,
// so a fixed seed gives the same draw sequence on every platform.
double uniform01(std::mt19937_64& rng);

// Draw one configuration by the sequential conditional rule: walk the
// ground set in order, include point i with probability M(i,i) of the
// running counting-measure kernel, then take the Schur complement that
// conditions on the decision.
Configuration sample(const KernelMatrix& kernel, std::mt19937_64& rng);

struct CorrelationEstimate {
  Configuration pts;
  double exact = 0.0;      // det of the kernel minor
  double estimate = 0.0;   // empirical frequency over the draws, mu-normalized
  double std_error = 0.0;  // binomial standard error of the estimate
  long hits = 0;
};

std::vector<CorrelationEstimate> empirical_correlations(
    const KernelMatrix& kernel, const std::vector<Configuration>& pts_list,
    long n_draws, std::mt19937_64& rng);

}  // namespace detpp
