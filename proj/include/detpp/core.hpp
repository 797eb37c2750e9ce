#pragma once

#include <functional>
#include <optional>

#include "detpp/types.hpp"

namespace detpp {

// Brute-force correlation function of an explicitly weighted process,
// w.r.t. the reference measure:
//   rho_n(pts) = (sum over X containing pts of W(X)/Z) / prod mu(x_i).
cd oracle_correlation(const ExplicitProcess& process, const Configuration& pts);

// Determinantal correlation: det[K(x_i, x_j)] over the points of pts.
// Empty pts gives 1 (empty determinant).
cd kernel_correlation(const KernelMatrix& kernel, const Configuration& pts);

cd det_submatrix(const CMat& m, const std::vector<int>& rows,
                 const std::vector<int>& cols);

struct VerifyFailure {
  std::vector<int> pts;
  cd oracle;
  cd kernel;
  double deviation;
};

struct VerifyReport {
  int checked = 0;
  double max_deviation = 0.0;
  double tol = kDefaultVerifyTol;
  std::vector<VerifyFailure> failures;  // sorted by configuration
  bool pass = false;
};

// Compares oracle_correlation against kernel_correlation on every
// configuration with at most n_max points. The exhaustive test harness
// behind every kernel construction in this library.
VerifyReport verify_determinantal(const ExplicitProcess& process,
                                  const KernelMatrix& kernel, int n_max,
                                  double tol = kDefaultVerifyTol,
                                  int max_enum = kDefaultMaxEnum);

// True iff K is Hermitian within tol and its spectrum lies in
// [-tol, 1 + tol]; such kernels define genuine probability measures.
bool validity_hermitian(const KernelMatrix& kernel,
                        double tol = kDefaultHermitianTol);

// Calls fn on every subset of {0,...,n-1} with size <= max_size,
// in order of size then lexicographic.
void for_each_subset_up_to(int n, int max_size,
                           const std::function<void(const std::vector<int>&)>& fn);

// Calls fn on all 2^n subsets in lexicographic-by-size order. Guarded.
void for_each_subset(int n, const std::function<void(const std::vector<int>&)>& fn,
                     int max_enum = kDefaultMaxEnum);

// Expected number of points, computed directly from the weights.
cd expected_size(const ExplicitProcess& process);

}  // namespace detpp
