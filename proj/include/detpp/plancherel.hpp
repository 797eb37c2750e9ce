#pragma once

#include "detpp/types.hpp"

namespace detpp {

// Partition lambda_1 >= lambda_2 >= ... > 0.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p);

  int size() const;                // |lambda|
  int length() const { return static_cast<int>(parts.size()); }
  int part(int i) const;           // lambda_i with trailing zeros, i >= 1
};

// All partitions with |lambda| <= max_size, enumerated by size then lex.
std::vector<Partition> partitions_up_to(int max_size);

// e^{-theta^2} (prod_{i<j<=L}(l_i-i-l_j+j) / prod_{i<=L}(l_i-i+L)!
//              * theta^{|l|})^2, evaluated in log space. Independent of the
// padding length L >= length(lambda).
double plancherel_weight(const Partition& lambda, double theta, int L);

// Point configuration L(lambda) = {lambda_i - i + 1/2} in Z+1/2, described
// by its symmetric difference with the vacuum {-1/2, -3/2, ...}. Half
// integers are stored doubled (odd ints), so 2x+1 encodes x+1/2.
struct HalfIntegerSet {
  std::vector<int> plus;   // members > 0, doubled
  std::vector<int> minus;  // missing members < 0, doubled
};

HalfIntegerSet point_map(const Partition& lambda);

// Membership x in L(lambda) for a doubled half-integer x.
bool point_occupied(const Partition& lambda, int doubled_x);

// Integer-order Bessel J by its ascending series; J_{-n} = (-1)^n J_n.
// Guarded to |t| <= 20 and |order| <= 300.
double bessel_j(int order, double t);

// Discrete Bessel kernel on Z+1/2 (arguments doubled):
// off-diagonal theta (J_{x-1/2} J_{y+1/2} - J_{x+1/2} J_{y-1/2}) / (x-y),
// diagonal by the series sum_{k in Z'_{>0}} J_{x+k} J_{y+k}.
double discrete_bessel_kernel(int doubled_x, int doubled_y, double theta);

// The series form for any pair (test cross-check for the ratio form).
double discrete_bessel_series(int doubled_x, int doubled_y, double theta);

// Kernel matrix over the window of half-integers [lo, hi] (doubled odd
// bounds, inclusive), counting measure.
KernelMatrix bessel_window_kernel(double theta, int doubled_lo, int doubled_hi);

// Truncated direct summation of rho(pts) over |lambda| <= cutoff, plus the
// Poisson tail mass e^{-theta^2} sum_{k > cutoff} theta^{2k}/k! left out.
struct TruncatedCorrelation {
  double value;
  double tail_bound;
};

TruncatedCorrelation plancherel_correlation(const std::vector<int>& doubled_pts,
                                            double theta, int cutoff);

}  // namespace detpp
