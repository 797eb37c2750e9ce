#pragma once

#include "detpp/types.hpp"

namespace detpp {

// All observables fold the reference weights into the kernel first
// (K -> K diag(mu)), so they return plain probabilities on discrete sets.

// Pr{X intersect I = empty} = det(1 - K_I).
cd gap_probability(const KernelMatrix& kernel, const Window& window);

// (Pr{|X intersect I| = N})_{N=0..|I|}, from the elementary symmetric
// functions of the eigenvalues of K_I:
//   Pr{N} = sum_{k>=N} (-1)^{k-N} binom(k,N) e_k.
std::vector<cd> counting_distribution(const KernelMatrix& kernel,
                                      const Window& window);

// Joint law Pr{|X ∩ I_1| = N_1, ..., |X ∩ I_m| = N_m} for pairwise
// disjoint windows. Returned as a row-major tensor over
// (|I_1|+1) x ... x (|I_m|+1) counts, last window fastest.
struct CountingTensor {
  std::vector<int> shape;
  std::vector<cd> values;

  cd at(const std::vector<int>& counts) const;
};

CountingTensor multi_window_counting(const KernelMatrix& kernel,
                                     const std::vector<Window>& windows);

// E prod_{x in X} phi(x) = det(1 - (1-phi)K), phi given per point.
cd multiplicative_expectation(const KernelMatrix& kernel, const CVec& phi);

// Pr{X ∩ I = exactly pts} = det(1-K_I) det[L_I(x_i,x_j)],
// L_I = K_I (1-K_I)^{-1}.
cd janossy(const KernelMatrix& kernel, const Window& window,
           const Configuration& pts);

}  // namespace detpp
