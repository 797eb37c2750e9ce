#include "detpp/markov.hpp"

#include <cmath>
#include <functional>

namespace detpp {

namespace {
constexpr double kRowTol = 1e-12;
}

void MarkovChainSpec::validate() const {
  gs.validate();
  const int n = gs.size();
  if (p.rows() != n || p.cols() != n || pi.size() != n)
    throw Error("DimensionMismatch",
                "transition matrix and initial distribution must match the "
                "ground set",
                2);
  double pi_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (pi(i) < 0.0)
      throw Error("InvalidDistribution", "pi entries must be nonnegative", 2);
    pi_sum += pi(i);
  }
  if (std::abs(pi_sum - 1.0) > kRowTol)
    throw Error("InvalidDistribution", "pi must sum to 1", 2);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (p(i, j) < 0.0)
        throw Error("InvalidDistribution", "P entries must be nonnegative", 2);
      row += p(i, j);
    }
    if (row > 1.0 + kRowTol)
      throw Error("InvalidDistribution", "P rows must sum to at most 1", 2);
  }
  if (!check_loop_free(p))
    throw Error("NotLoopFree", "chain admits a revisit: (P^k)_xx > 0", 3);
}

bool check_loop_free(const RMat& p) {
  const int n = static_cast<int>(p.rows());
  RMat power = p;
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i < n; ++i)
      if (power(i, i) != 0.0) return false;
    if (k < n) power = RMat(power * p);
  }
  return true;
}

RMat accumulate_q(const RMat& p) {
  if (!check_loop_free(p))
    throw Error("NotLoopFree", "Q series requires a loop-free chain", 3);
  const int n = static_cast<int>(p.rows());
  RMat q = RMat::Zero(n, n);
  RMat power = p;
  for (int k = 1; k < n; ++k) {
    q += power;
    power = RMat(power * p);
  }
  return q;
}

KernelMatrix markov_kernel(const MarkovChainSpec& spec) {
  spec.validate();
  const int n = spec.gs.size();
  const RMat q = accumulate_q(spec.p);
  const RVec piq = RVec(q.transpose() * spec.pi);
  CMat k(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      k(x, y) = cd(spec.pi(x) + piq(x) - q(y, x), 0.0);
  return {spec.gs, std::move(k)};
}

ExplicitProcess trajectory_process(const MarkovChainSpec& spec) {
  spec.validate();
  const int n = spec.gs.size();
  ExplicitProcess process(spec.gs);

  std::vector<int> path;
  std::function<void(int, double)> walk = [&](int state, double weight) {
    path.push_back(state);
    double continue_mass = 0.0;
    for (int next = 0; next < n; ++next) {
      const double step = spec.p(state, next);
      if (step > 0.0) {
        continue_mass += step;
        walk(next, weight * step);
      }
    }
    const double kill = 1.0 - continue_mass;
    if (kill > 0.0) process.add_weight(Configuration(path), weight * kill);
    path.pop_back();
  };

  for (int start = 0; start < n; ++start)
    if (spec.pi(start) > 0.0) walk(start, spec.pi(start));
  process.finalize();
  return process;
}

}  // namespace detpp
