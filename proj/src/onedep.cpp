#include "detpp/onedep.hpp"

#include <cmath>
#include <cstdint>
#include <functional>

#include "detpp/core.hpp"

namespace detpp {

BlockCorrelations::BlockCorrelations(GroundSet segment, CMat values)
    : gs(std::move(segment)), r(std::move(values)) {
  const int n = gs.size();
  if (r.rows() != n + 1 || r.cols() != n + 1)
    throw Error("DimensionMismatch",
                "block table must be (n+1) x (n+1) for a segment of size n",
                2);
  for (int a = 0; a <= n; ++a)
    if (r(a, a) != cd(1.0))
      throw Error("InvalidBlockTable", "R(a,a) = 1 convention violated", 2);
}

cd BlockCorrelations::R(int a, int b) const {
  if (a < 0 || b < a || b > segment_size())
    throw Error("IndexOutOfRange", "block endpoints outside segment", 2);
  return r(a, b);
}

BlockCorrelations BlockCorrelations::bernoulli(int n, double p) {
  CMat values = CMat::Zero(n + 1, n + 1);
  for (int a = 0; a <= n; ++a)
    for (int b = a; b <= n; ++b) values(a, b) = std::pow(p, b - a);
  return {GroundSet::of_size(n), std::move(values)};
}

BlockCorrelations BlockCorrelations::descents(int n) {
  CMat values = CMat::Zero(n + 1, n + 1);
  for (int a = 0; a <= n; ++a) {
    double factorial = 1.0;
    for (int b = a; b <= n; ++b) {
      factorial *= (b == a) ? 1.0 : double(b - a + 1);
      values(a, b) = 1.0 / factorial;
    }
  }
  return {GroundSet::of_size(n), std::move(values)};
}

KernelMatrix onedep_kernel(const BlockCorrelations& blocks) {
  const int n = blocks.segment_size();
  // S(a,c) over 0 <= a < c <= n, filled with a descending for each c
  CMat s = CMat::Zero(n + 1, n + 1);
  for (int c = 1; c <= n; ++c)
    for (int a = c - 1; a >= 0; --a) {
      cd v = blocks.r(a, c);
      for (int b = a + 1; b < c; ++b) v -= blocks.r(a, b) * s(b, c);
      s(a, c) = v;
    }
  CMat k(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x - y >= 2)
        k(x, y) = cd(0.0);
      else if (x - y == 1)
        k(x, y) = cd(-1.0);
      else
        k(x, y) = s(x, y + 1);
    }
  return {blocks.gs, std::move(k)};
}

cd onedep_chain_sum(const BlockCorrelations& blocks, int x, int y) {
  if (x > y) throw Error("IndexOutOfRange", "chain sum needs x <= y", 2);
  const int c = y + 1;
  cd total(0.0);
  std::vector<int> chain{x};
  std::function<void(cd)> extend = [&](cd prod) {
    const int last = chain.back();
    if (last == c) {
      const int r = static_cast<int>(chain.size()) - 1;
      total += (r % 2 == 1 ? 1.0 : -1.0) * prod;
      return;
    }
    for (int next = last + 1; next <= c; ++next) {
      chain.push_back(next);
      extend(prod * blocks.R(last, next));
      chain.pop_back();
    }
  };
  extend(cd(1.0));
  return total;
}

namespace {

// rho(S) for every subset S (as a bitmask), one sweep over the weight map.
std::vector<cd> correlation_table(const ExplicitProcess& process) {
  const int n = process.gs.size();
  if (n > 20)
    throw Error("EnumerationTooLarge",
                "correlation table limited to 20 points", 2);
  if (process.z == cd(0.0))
    throw Error("ZeroPartitionFunction", "process has zero total mass", 3);
  std::vector<cd> rho(size_t(1) << n, cd(0.0));
  for (const auto& [pts, w] : process.weights) {
    uint32_t mask = 0;
    for (int i : pts) mask |= uint32_t(1) << i;
    const cd contribution = w / process.z;
    uint32_t s = mask;
    while (true) {
      rho[s] += contribution;
      if (s == 0) break;
      s = (s - 1) & mask;
    }
  }
  for (size_t s = 1; s < rho.size(); ++s) {
    double mu_prod = 1.0;
    for (int i = 0; i < n; ++i)
      if (s & (size_t(1) << i)) mu_prod *= process.gs.mu(i);
    rho[s] /= mu_prod;
  }
  return rho;
}

}  // namespace

bool check_one_dependent(const ExplicitProcess& process, double tol) {
  const int n = process.gs.size();
  const std::vector<cd> rho = correlation_table(process);
  // walk all (A, B) pairs of disjoint nonempty subsets with min distance >= 2
  const uint32_t full = (uint32_t(1) << n) - 1;
  for (uint32_t a = 1; a <= full; ++a) {
    // positions within distance 1 of A are barred from B
    const uint32_t barred = a | (a << 1) | (a >> 1);
    const uint32_t allowed = full & ~barred;
    for (uint32_t b = allowed; b != 0; b = (b - 1) & allowed) {
      if (std::abs(rho[a | b] - rho[a] * rho[b]) > tol) return false;
    }
  }
  return true;
}

BlockCorrelations blocks_from_process(const ExplicitProcess& process) {
  const int n = process.gs.size();
  CMat values = CMat::Zero(n + 1, n + 1);
  for (int a = 0; a <= n; ++a) {
    values(a, a) = cd(1.0);
    for (int b = a + 1; b <= n; ++b) {
      std::vector<int> block;
      for (int i = a; i < b; ++i) block.push_back(i);
      values(a, b) = oracle_correlation(process, Configuration(block));
    }
  }
  return {process.gs, std::move(values)};
}

}  // namespace detpp
