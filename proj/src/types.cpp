#include "detpp/types.hpp"

#include <algorithm>
#include <set>

namespace detpp {

GroundSet::GroundSet(std::vector<std::string> pts) : labels(std::move(pts)) {
  mu = RVec::Ones(static_cast<int>(labels.size()));
  validate();
}

GroundSet::GroundSet(std::vector<std::string> pts, RVec weights)
    : labels(std::move(pts)), mu(std::move(weights)) {
  validate();
}

bool GroundSet::counting_measure() const {
  return (mu.array() == 1.0).all();
}

GroundSet GroundSet::of_size(int n, const std::string& prefix) {
  std::vector<std::string> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(prefix + std::to_string(i));
  return GroundSet(std::move(pts));
}

void GroundSet::validate() const {
  if (labels.empty()) throw Error("EmptyGroundSet", "ground set must have size >= 1", 2);
  if (mu.size() != static_cast<Eigen::Index>(labels.size()))
    throw Error("DimensionMismatch", "mu length differs from point count", 2);
  if (!(mu.array() > 0.0).all())
    throw Error("InvalidReferenceWeight", "reference weights must be strictly positive", 2);
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw Error("DuplicateLabel", "ground-set labels must be pairwise distinct", 2);
}

Configuration::Configuration(std::vector<int> indices) : idx(std::move(indices)) {
  std::sort(idx.begin(), idx.end());
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1])
      throw Error("DuplicatePoint", "configuration points must be pairwise distinct", 2);
}

bool Configuration::contains(int i) const {
  return std::binary_search(idx.begin(), idx.end(), i);
}

void Configuration::validate(int ground_size) const {
  for (int i : idx)
    if (i < 0 || i >= ground_size)
      throw Error("IndexOutOfRange", "configuration index outside ground set", 2);
}

KernelMatrix::KernelMatrix(GroundSet ground, CMat entries)
    : gs(std::move(ground)), k(std::move(entries)) {
  if (k.rows() != k.cols() || k.rows() != gs.size())
    throw Error("DimensionMismatch", "kernel must be square and match the ground set", 2);
}

CMat KernelMatrix::counting() const {
  return k * gs.mu.asDiagonal();
}

void ExplicitProcess::add_weight(const Configuration& c, cd w) {
  c.validate(gs.size());
  weights[c.idx] += w;
}

void ExplicitProcess::finalize() {
  for (auto it = weights.begin(); it != weights.end();) {
    if (it->second == cd(0.0, 0.0))
      it = weights.erase(it);
    else
      ++it;
  }
  z = cd(0.0, 0.0);
  for (const auto& [_, w] : weights) z += w;
}

cd ExplicitProcess::weight(const Configuration& c) const {
  auto it = weights.find(c.idx);
  return it == weights.end() ? cd(0.0, 0.0) : it->second;
}

GroundSet sub_ground(const GroundSet& gs, const std::vector<int>& indices) {
  std::vector<std::string> labels;
  labels.reserve(indices.size());
  RVec mu(static_cast<int>(indices.size()));
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= gs.size())
      throw Error("IndexOutOfRange", "subset index outside ground set", 2);
    labels.push_back(gs.labels[indices[i]]);
    mu(static_cast<int>(i)) = gs.mu(indices[i]);
  }
  return {std::move(labels), std::move(mu)};
}

Window::Window(std::vector<int> which) : indices(std::move(which)) {
  std::sort(indices.begin(), indices.end());
  for (size_t i = 1; i < indices.size(); ++i)
    if (indices[i] == indices[i - 1])
      throw Error("DuplicatePoint", "window indices must be distinct", 2);
}

void Window::validate(int ground_size) const {
  for (int i : indices)
    if (i < 0 || i >= ground_size)
      throw Error("IndexOutOfRange", "window index outside ground set", 2);
}

}  // namespace detpp
