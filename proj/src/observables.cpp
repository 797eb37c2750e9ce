#include "detpp/observables.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "detpp/core.hpp"

namespace detpp {

namespace {

CMat restrict_counting(const KernelMatrix& kernel, const Window& window) {
  window.validate(kernel.size());
  const CMat kt = kernel.counting();
  const int m = window.size();
  CMat block(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      block(r, c) = kt(window.indices[r], window.indices[c]);
  return block;
}

// Coefficients of prod_k (1 + t*lambda_k); out[k] = e_k.
std::vector<cd> elementary_symmetric(const CVec& eigenvalues) {
  std::vector<cd> e(eigenvalues.size() + 1, cd(0.0));
  e[0] = cd(1.0);
  for (int i = 0; i < eigenvalues.size(); ++i)
    for (int k = i + 1; k >= 1; --k) e[k] += eigenvalues(i) * e[k - 1];
  return e;
}

std::vector<std::vector<double>> binomial_table(int n) {
  std::vector<std::vector<double>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1.0);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

// In-place Newton interpolation through integer nodes 0..d, then expansion
// to monomial coefficients. v holds values on entry, coefficients on exit.
void values_to_coefficients(std::vector<cd>& v) {
  const int d = static_cast<int>(v.size()) - 1;
  for (int j = 1; j <= d; ++j)
    for (int i = d; i >= j; --i) v[i] = (v[i] - v[i - 1]) / double(j);
  // Horner in Newton form: p(z) = c_0 + (z-0)(c_1 + (z-1)(c_2 + ...)).
  std::vector<cd> poly(v.size(), cd(0.0));
  poly[0] = v[d];
  for (int i = d - 1; i >= 0; --i) {
    for (int k = d - i; k >= 1; --k)
      poly[k] = poly[k - 1] - double(i) * poly[k];
    poly[0] = v[i] - double(i) * poly[0];
  }
  v = poly;
}

}  // namespace

cd gap_probability(const KernelMatrix& kernel, const Window& window) {
  const CMat block = restrict_counting(kernel, window);
  const int m = window.size();
  if (m == 0) return cd(1.0);
  return (CMat::Identity(m, m) - block).determinant();
}

std::vector<cd> counting_distribution(const KernelMatrix& kernel,
                                      const Window& window) {
  const CMat block = restrict_counting(kernel, window);
  const int m = window.size();
  if (m == 0) return {cd(1.0)};
  Eigen::ComplexEigenSolver<CMat> es(block, /*computeEigenvectors=*/false);
  const std::vector<cd> e = elementary_symmetric(es.eigenvalues());
  const auto binom = binomial_table(m);
  std::vector<cd> pr(m + 1, cd(0.0));
  for (int n = 0; n <= m; ++n) {
    double sign = 1.0;
    for (int k = n; k <= m; ++k, sign = -sign) pr[n] += sign * binom[k][n] * e[k];
  }
  return pr;
}

cd CountingTensor::at(const std::vector<int>& counts) const {
  if (counts.size() != shape.size())
    throw Error("DimensionMismatch", "counting tensor rank mismatch", 2);
  size_t flat = 0;
  for (size_t j = 0; j < shape.size(); ++j) {
    if (counts[j] < 0 || counts[j] >= shape[j])
      throw Error("IndexOutOfRange", "count outside window size", 2);
    flat = flat * shape[j] + counts[j];
  }
  return values[flat];
}

CountingTensor multi_window_counting(const KernelMatrix& kernel,
                                     const std::vector<Window>& windows) {
  const int n = kernel.size();
  std::vector<char> seen(n, 0);
  for (const Window& w : windows) {
    w.validate(n);
    for (int i : w.indices) {
      if (seen[i])
        throw Error("OverlappingWindows", "joint counting needs disjoint windows",
                    2);
      seen[i] = 1;
    }
  }
  const int m = static_cast<int>(windows.size());
  if (m == 0) return {{}, {cd(1.0)}};

  CountingTensor out;
  out.shape.resize(m);
  size_t total = 1;
  for (int j = 0; j < m; ++j) {
    out.shape[j] = windows[j].size() + 1;
    total *= out.shape[j];
  }
  out.values.assign(total, cd(0.0));

  const CMat kt = kernel.counting();
  // Evaluate the generating polynomial E prod z_j^{N_j}
  //   = det(Id - sum_j (1-z_j) D_j K)
  // on the integer grid z_j in 0..|I_j|, one axis per window.
  std::vector<int> node(m, 0);
  for (size_t flat = 0; flat < total; ++flat) {
    CMat mmat = CMat::Identity(n, n);
    for (int j = 0; j < m; ++j) {
      const cd factor = cd(1.0) - cd(double(node[j]));
      if (factor == cd(0.0)) continue;
      for (int r : windows[j].indices) mmat.row(r) -= factor * kt.row(r);
    }
    out.values[flat] = mmat.determinant();
    for (int j = m - 1; j >= 0; --j) {
      if (++node[j] < out.shape[j]) break;
      node[j] = 0;
    }
  }

  // Peel monomial coefficients off one axis at a time.
  size_t stride_after = 1;
  for (int j = m - 1; j >= 0; --j) {
    const size_t len = out.shape[j];
    const size_t stride_before = total / (len * stride_after);
    std::vector<cd> line(len);
    for (size_t b = 0; b < stride_before; ++b)
      for (size_t a = 0; a < stride_after; ++a) {
        const size_t base = b * len * stride_after + a;
        for (size_t i = 0; i < len; ++i)
          line[i] = out.values[base + i * stride_after];
        values_to_coefficients(line);
        for (size_t i = 0; i < len; ++i)
          out.values[base + i * stride_after] = line[i];
      }
    stride_after *= len;
  }
  return out;
}

cd multiplicative_expectation(const KernelMatrix& kernel, const CVec& phi) {
  const int n = kernel.size();
  if (phi.size() != n)
    throw Error("DimensionMismatch", "phi must assign a value to every point",
                2);
  const CMat kt = kernel.counting();
  CMat mmat = CMat::Identity(n, n);
  for (int r = 0; r < n; ++r) mmat.row(r) -= (cd(1.0) - phi(r)) * kt.row(r);
  return mmat.determinant();
}

cd janossy(const KernelMatrix& kernel, const Window& window,
           const Configuration& pts) {
  const CMat block = restrict_counting(kernel, window);
  const int m = window.size();
  // local positions of pts inside the window
  std::vector<int> local;
  local.reserve(pts.idx.size());
  for (int p : pts.idx) {
    auto it =
        std::lower_bound(window.indices.begin(), window.indices.end(), p);
    if (it == window.indices.end() || *it != p)
      throw Error("IndexOutOfRange", "janossy points must lie in the window",
                  2);
    local.push_back(static_cast<int>(it - window.indices.begin()));
  }
  if (m == 0) return cd(1.0);

  const CMat a = CMat::Identity(m, m) - block;
  Eigen::FullPivLU<CMat> lu(a);
  // rcond() is meaningless on rank-deficient input, so check the rank too
  if (!lu.isInvertible() || !(lu.rcond() >= kRcondFloor))
    throw Error("SingularComplement",
                "1 - K_I is numerically singular; janossy density undefined",
                3);
  const cd gap = lu.determinant();
  if (local.empty()) return gap;
  const CMat l_mat = block * lu.inverse();
  return gap * det_submatrix(l_mat, local, local);
}

}  // namespace detpp
