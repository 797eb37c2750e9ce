#pragma once

#include <cmath>
#include <vector>

#include "detpp/types.hpp"

namespace detpp {

// Kernel on a counting-measure ground set from a real row list.
inline KernelMatrix kernel_of(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
  return KernelMatrix(GroundSet::of_size(n), m);
}

inline CMat cmat_of(const std::vector<std::vector<cd>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  CMat m(n, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

inline RMat rmat_of(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  RMat m(n, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

inline double dist(cd a, cd b) { return std::abs(a - b); }

// deterministic pseudo-random fill, so tests never depend on a seed source
inline double wobble(int i, int j) {
  return 0.5 * std::sin(3.7 * i + 1.3 * j + 0.25) +
         0.3 * std::cos(1.9 * i - 2.1 * j);
}

}  // namespace detpp
