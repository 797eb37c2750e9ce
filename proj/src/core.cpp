#include "detpp/core.hpp"

#include <algorithm>
#include <cmath>

namespace detpp {

cd oracle_correlation(const ExplicitProcess& process, const Configuration& pts) {
  pts.validate(process.gs.size());
  if (process.z == cd(0.0, 0.0))
    throw Error("ZeroPartitionFunction", "partition function vanishes");

  cd acc(0.0, 0.0);
  for (const auto& [conf, w] : process.weights) {
    bool contains_all = true;
    for (int p : pts.idx) {
      if (!std::binary_search(conf.begin(), conf.end(), p)) {
        contains_all = false;
        break;
      }
    }
    if (contains_all) acc += w;
  }
  acc /= process.z;

  double mu_prod = 1.0;
  for (int p : pts.idx) mu_prod *= process.gs.mu[p];
  return acc / mu_prod;
}

cd det_submatrix(const CMat& m, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) return cd(1.0, 0.0);
  CMat sub(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sub(i, j) = m(rows[i], cols[j]);
  if (n == 1) return sub(0, 0);
  if (n == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  return sub.determinant();
}

cd kernel_correlation(const KernelMatrix& kernel, const Configuration& pts) {
  pts.validate(kernel.size());
  return det_submatrix(kernel.k, pts.idx, pts.idx);
}

void for_each_subset_up_to(int n, int max_size,
                           const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  fn(cur);
  // size-major order: all subsets of size s before size s+1
  for (int s = 1; s <= std::min(n, max_size); ++s) {
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(cur.size()) == s) {
        fn(cur);
        return;
      }
      for (int i = start; i < n; ++i) {
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
}

void for_each_subset(int n, const std::function<void(const std::vector<int>&)>& fn,
                     int max_enum) {
  if (n > max_enum)
    throw Error("EnumerationTooLarge",
                "ground set of size " + std::to_string(n) +
                    " exceeds enumeration guard " + std::to_string(max_enum),
                2);
  for_each_subset_up_to(n, n, fn);
}

VerifyReport verify_determinantal(const ExplicitProcess& process,
                                  const KernelMatrix& kernel, int n_max,
                                  double tol, int max_enum) {
  const int n = process.gs.size();
  if (kernel.size() != n)
    throw Error("DimensionMismatch", "process and kernel ground sets differ", 2);
  if (n > max_enum)
    throw Error("EnumerationTooLarge",
                "ground set of size " + std::to_string(n) +
                    " exceeds enumeration guard " + std::to_string(max_enum),
                2);
  if (process.z == cd(0.0, 0.0))
    throw Error("ZeroPartitionFunction", "partition function vanishes");

  VerifyReport report;
  report.tol = tol;
  for_each_subset_up_to(n, n_max, [&](const std::vector<int>& subset) {
    Configuration pts(subset);
    const cd lhs = oracle_correlation(process, pts);
    const cd rhs = kernel_correlation(kernel, pts);
    const double dev = std::abs(lhs - rhs);
    ++report.checked;
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > tol) report.failures.push_back({subset, lhs, rhs, dev});
  });
  // enumeration is already size-major lexicographic; keep failures sorted the
  // same deterministic way
  std::sort(report.failures.begin(), report.failures.end(),
            [](const VerifyFailure& a, const VerifyFailure& b) {
              if (a.pts.size() != b.pts.size()) return a.pts.size() < b.pts.size();
              return a.pts < b.pts;
            });
  report.pass = report.failures.empty();
  return report;
}

bool validity_hermitian(const KernelMatrix& kernel, double tol) {
  const CMat& k = kernel.k;
  const double asym = (k - k.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol)
    throw Error("NotHermitian",
                "kernel deviates from Hermitian by " + std::to_string(asym));
  Eigen::SelfAdjointEigenSolver<CMat> es((k + k.adjoint()) / 2.0);
  const RVec ev = es.eigenvalues();
  return ev.minCoeff() >= -tol && ev.maxCoeff() <= 1.0 + tol;
}

cd expected_size(const ExplicitProcess& process) {
  if (process.z == cd(0.0, 0.0))
    throw Error("ZeroPartitionFunction", "partition function vanishes");
  cd acc(0.0, 0.0);
  for (const auto& [conf, w] : process.weights)
    acc += static_cast<double>(conf.size()) * w;
  return acc / process.z;
}

}  // namespace detpp
