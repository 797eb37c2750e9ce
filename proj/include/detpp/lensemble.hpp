#pragma once

#include "detpp/types.hpp"

namespace detpp {

// Pr{X} = det L_X / det(1+L). Complex entries are allowed; realizability
// (nonnegative principal minors) is the caller's concern and can be probed
// with l_process / the sampler.
struct LMatrix {
  GroundSet gs;
  CMat l;

  LMatrix() = default;
  LMatrix(GroundSet ground, CMat entries);

  int size() const { return gs.size(); }
};

// Condition on every point of the complement of Y being present; the induced
// process lives on Y.
struct ConditionalSplit {
  Window y;
};

cd l_probability(const LMatrix& l, const Configuration& x);

// K = L(1+L)^{-1}.
KernelMatrix l_to_k(const LMatrix& l);

// L = K(1-K)^{-1}; fails (SingularOneMinusK) for exactly-N processes.
LMatrix k_to_l(const KernelMatrix& kernel);

// K = 1_Y - (1_Y + L)^{-1} restricted to Y x Y (kernel on the Y points).
KernelMatrix conditional_k(const LMatrix& l, const ConditionalSplit& split);

// Pr{Y'} = det L_{Y' u Ybar} / det(1_Y + L) for Y' inside Y.
cd conditional_probability(const LMatrix& l, const ConditionalSplit& split,
                           const Configuration& y_prime);

// All 2^|X| subset probabilities as an ExplicitProcess (oracle substrate).
ExplicitProcess l_process(const LMatrix& l, int max_enum = kDefaultMaxEnum);

}  // namespace detpp
