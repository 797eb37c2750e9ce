#pragma once

#include <functional>

#include "detpp/types.hpp"

namespace detpp {

// sin(pi(x-y)) / (pi(x-y)), value 1 on the diagonal
double sine_kernel(double x, double y);

// Ai and Ai' from the Maclaurin series, accumulated in double-double to
// survive the cancellation on the positive axis. Validated for |x| <= 12.
struct AiryValue {
  double ai;
  double ai_prime;
};

AiryValue airy_fn(double x);

// (Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x-y), diagonal Ai'(x)^2 - x Ai(x)^2
double airy_kernel(double x, double y);

// Gauss-Legendre rule of the given order on [-1, 1]
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(int order);

// Quadrature discretization of a union of disjoint intervals
struct NystromGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  static NystromGrid on_interval(double a, double b, int order);
  static NystromGrid on_intervals(
      const std::vector<std::pair<double, double>>& intervals, int order);
};

using ScalarKernel = std::function<double(double, double)>;

// det(delta_ij - sqrt(w_i) K(x_i,x_j) sqrt(w_j)) over the grid
double fredholm_det(const ScalarKernel& kernel, const NystromGrid& grid);

// Spectrum of the symmetrized discretization must sit in [-tol, 1+tol]
struct SpectrumCheck {
  double min_eig;
  double max_eig;
  bool pass;
};

SpectrumCheck discretized_validity(const ScalarKernel& kernel,
                                   const NystromGrid& grid,
                                   double tol = kDefaultVerifyTol);

}  // namespace detpp
