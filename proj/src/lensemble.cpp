#include "detpp/lensemble.hpp"

#include <Eigen/Dense>

#include "detpp/core.hpp"

namespace detpp {

namespace {

Eigen::FullPivLU<CMat> guarded_lu(const CMat& m, const char* code,
                                  const char* what) {
  Eigen::FullPivLU<CMat> lu(m);
  // rcond() is meaningless on rank-deficient input, so check the rank too
  if (!lu.isInvertible() || !(lu.rcond() >= kRcondFloor))
    throw Error(code, what, 3);
  return lu;
}

}  // namespace

LMatrix::LMatrix(GroundSet ground, CMat entries)
    : gs(std::move(ground)), l(std::move(entries)) {
  if (l.rows() != l.cols() || l.rows() != gs.size())
    throw Error("DimensionMismatch",
                "L must be square and match the ground set", 2);
  if (!gs.counting_measure())
    throw Error("InvalidReferenceWeight",
                "L-ensembles are stated w.r.t. counting measure (mu == 1)", 2);
}

cd l_probability(const LMatrix& l, const Configuration& x) {
  x.validate(l.size());
  const int n = l.size();
  const CMat one_plus = CMat::Identity(n, n) + l.l;
  auto lu = guarded_lu(one_plus, "SingularOnePlusL",
                       "det(1+L) vanishes; L-ensemble undefined");
  return det_submatrix(l.l, x.idx, x.idx) / lu.determinant();
}

KernelMatrix l_to_k(const LMatrix& l) {
  const int n = l.size();
  const CMat one_plus = CMat::Identity(n, n) + l.l;
  auto lu = guarded_lu(one_plus, "SingularOnePlusL",
                       "det(1+L) vanishes; L-ensemble undefined");
  return {l.gs, CMat(l.l * lu.inverse())};
}

LMatrix k_to_l(const KernelMatrix& kernel) {
  const int n = kernel.size();
  const CMat one_minus = CMat::Identity(n, n) - kernel.k;
  auto lu = guarded_lu(one_minus, "SingularOneMinusK",
                       "1-K is singular: the process holds some point "
                       "deterministically and is not an L-ensemble");
  return {kernel.gs, CMat(kernel.k * lu.inverse())};
}

KernelMatrix conditional_k(const LMatrix& l, const ConditionalSplit& split) {
  split.y.validate(l.size());
  if (split.y.indices.empty())
    throw Error("EmptyGroundSet", "conditional split needs a nonempty Y", 2);
  CMat one_y_plus = l.l;
  for (int i : split.y.indices) one_y_plus(i, i) += 1.0;
  auto lu = guarded_lu(one_y_plus, "SingularConditional",
                       "det(1_Y + L) vanishes; conditional ensemble undefined");
  const CMat inv = lu.inverse();
  const int m = split.y.size();
  CMat k(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      k(r, c) = -inv(split.y.indices[r], split.y.indices[c]);
      if (r == c) k(r, c) += 1.0;
    }
  return {sub_ground(l.gs, split.y.indices), std::move(k)};
}

cd conditional_probability(const LMatrix& l, const ConditionalSplit& split,
                           const Configuration& y_prime) {
  split.y.validate(l.size());
  y_prime.validate(l.size());
  for (int i : y_prime.idx)
    if (!std::binary_search(split.y.indices.begin(), split.y.indices.end(), i))
      throw Error("IndexOutOfRange", "Y' must be a subset of Y", 2);
  const int n = l.size();
  CMat one_y_plus = l.l;
  for (int i : split.y.indices) one_y_plus(i, i) += 1.0;
  auto lu = guarded_lu(one_y_plus, "SingularConditional",
                       "det(1_Y + L) vanishes; conditional ensemble undefined");
  // rows/cols of L over Y' plus the whole complement of Y
  std::vector<int> sel = y_prime.idx;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(split.y.indices.begin(), split.y.indices.end(), i))
      sel.push_back(i);
  std::sort(sel.begin(), sel.end());
  return det_submatrix(l.l, sel, sel) / lu.determinant();
}

ExplicitProcess l_process(const LMatrix& l, int max_enum) {
  const int n = l.size();
  // normalizer guard up front so an ill-posed L fails before enumeration
  l_probability(l, Configuration{});
  ExplicitProcess process(l.gs);
  for_each_subset(
      n,
      [&](const std::vector<int>& subset) {
        process.add_weight(Configuration(subset),
                           det_submatrix(l.l, subset, subset));
      },
      max_enum);
  process.finalize();
  return process;
}

}  // namespace detpp
