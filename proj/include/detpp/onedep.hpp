#pragma once

#include "detpp/types.hpp"

namespace detpp {

// Consecutive-block correlations of a point process on an integer segment,
// indexed by ground-set position: R(a,b) = rho_{b-a}(a, a+1, ..., b-1) for
// 0 <= a <= b <= n, with R(a,a) = 1.
struct BlockCorrelations {
  GroundSet gs;
  CMat r;  // (n+1) x (n+1), upper triangle meaningful

  BlockCorrelations() = default;
  BlockCorrelations(GroundSet segment, CMat values);

  int segment_size() const { return gs.size(); }
  cd R(int a, int b) const;

  // i.i.d. Bernoulli(p) occupation: R(a,b) = p^{b-a}.
  static BlockCorrelations bernoulli(int n, double p);
  // descent set of an i.i.d. uniform sequence: R(a,b) = 1/(b-a+1)!.
  static BlockCorrelations descents(int n);
};

// Kernel reconstructing a one-dependent process from its block table:
//   K(x,y) = 0            for x - y >= 2,
//   K(x,y) = -1           for x - y == 1,
//   K(x,y) = sum over chains x = l_0 < l_1 < ... < l_r = y+1 of
//            (-1)^{r-1} R(l_0,l_1) ... R(l_{r-1},l_r)   for x <= y,
// the chain sum evaluated by the interval recursion
//   S(a,c) = R(a,c) - sum_{a<b<c} R(a,b) S(b,c).
KernelMatrix onedep_kernel(const BlockCorrelations& blocks);

// Direct chain enumeration of the x <= y branch (exponential; test oracle).
cd onedep_chain_sum(const BlockCorrelations& blocks, int x, int y);

// True iff rho(A u B) = rho(A) rho(B) for all disjoint A, B separated by a
// gap of at least 2 positions.
bool check_one_dependent(const ExplicitProcess& process, double tol);

// Reads R(a,b) = rho(a..b-1) off an explicit process on a segment.
BlockCorrelations blocks_from_process(const ExplicitProcess& process);

}  // namespace detpp
