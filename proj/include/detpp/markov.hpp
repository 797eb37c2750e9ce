#pragma once

#include "detpp/types.hpp"

namespace detpp {

// Loop-free substochastic chain on the ground set. Row-sum deficits are
// killing probabilities (the chain jumps to an implicit cemetery), which is
// what makes every trajectory a finite set of distinct states.
struct MarkovChainSpec {
  GroundSet gs;
  RMat p;   // substochastic transition matrix
  RVec pi;  // initial distribution, sums to 1

  void validate() const;
};

// True iff (P^k)_{xx} = 0 for k = 1..n; on a finite set this rules out all
// revisits.
bool check_loop_free(const RMat& p);

// Q = P + P^2 + ... + P^{n-1}; exact because loop-freeness forces P^n = 0.
// Q(x,y) = Pr{a trajectory started at x ever reaches y}.
RMat accumulate_q(const RMat& p);

// K(x,y) = pi_x + (pi Q)_x - Q(y,x).
KernelMatrix markov_kernel(const MarkovChainSpec& spec);

// Every trajectory (x_0,...,x_k) carries weight
// pi(x_0) * prod P(x_i,x_{i+1}) * (1 - rowsum(x_k)), aggregated by the
// underlying state set. Weights sum to 1.
ExplicitProcess trajectory_process(const MarkovChainSpec& spec);

}  // namespace detpp
