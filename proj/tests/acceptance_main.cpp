// End-to-end acceptance gate. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "detpp/continuum.hpp"
#include "detpp/core.hpp"
#include "detpp/dimer.hpp"
#include "detpp/lensemble.hpp"
#include "detpp/markov.hpp"
#include "detpp/observables.hpp"
#include "detpp/onedep.hpp"
#include "detpp/plancherel.hpp"
#include "detpp/sampler.hpp"
#include "detpp/suite.hpp"
#include "detpp/ust.hpp"

using namespace detpp;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CMat l4_matrix() {
  CMat l(4, 4);
  l << 1.05, 0.3, 0.1, 0.0,
       0.3, 0.85, 0.2, 0.1,
       0.1, 0.2, 0.65, 0.3,
       0.0, 0.1, 0.3, 0.95;
  return l;
}

// ---------------------------------------------------------------- criterion 1

Outcome mechanism_oracle_equivalence() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = run_suite(DETPP_CORPUS_DIR, kDefaultVerifyTol,
                                 kDefaultMaxEnum);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  out.require(reports.size() >= 20, "corpus unexpectedly small");
  double worst = 0.0;
  int fails = 0;
  for (const auto& r : reports) {
    if (!r.pass) ++fails;
    worst = std::max(worst, r.max_deviation);
  }
  out.require(fails == 0, std::to_string(fails) + " instances failed");
  out.require(secs < 300.0, "suite exceeded the five-minute budget");
  if (out.ok)
    out.detail = std::to_string(reports.size()) + " instances, max deviation " +
                 fmt(worst) + ", " + fmt(secs) + " s";
  return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome observable_identities() {
  Outcome out;

  std::vector<std::pair<std::string, KernelMatrix>> kernels;

  MarkovChainSpec chain;
  chain.gs = GroundSet::of_size(4);
  chain.p = RMat::Zero(4, 4);
  chain.p(0, 2) = 0.4; chain.p(0, 3) = 0.3;
  chain.p(1, 2) = 0.2; chain.p(1, 3) = 0.5;
  chain.pi = (RVec(4) << 0.6, 0.4, 0.0, 0.0).finished();
  kernels.emplace_back("markov", markov_kernel(chain));

  const PlanarBipartiteGraph strip = PlanarBipartiteGraph::grid(2, 3);
  kernels.emplace_back("dimer", dimer_kernel(strip, kasteleyn_weighting(strip)));
  kernels.emplace_back("ust", transfer_current(OrientedGraph::complete(4)));
  kernels.emplace_back("l", l_to_k(LMatrix{GroundSet::of_size(4), l4_matrix()}));
  kernels.emplace_back("onedep",
                       onedep_kernel(BlockCorrelations::bernoulli(6, 0.35)));
  kernels.emplace_back("plancherel", bessel_window_kernel(0.5, -5, 5));

  double worst_sum = 0.0, worst_gap = 0.0;
  for (const auto& [name, k] : kernels) {
    std::vector<int> all(k.size());
    for (int i = 0; i < k.size(); ++i) all[i] = i;
    const Window w(all);

    const auto dist = counting_distribution(k, w);
    cd total(0.0, 0.0);
    for (const cd& v : dist) total += v;
    worst_sum = std::max(worst_sum, std::abs(total - cd(1.0)));
    out.require(std::abs(total - cd(1.0)) <= 1e-10,
                name + ": counting distribution total off");

    const cd gap = gap_probability(k, w);
    worst_gap = std::max(worst_gap, std::abs(gap - dist[0]));
    out.require(std::abs(gap - dist[0]) <= 1e-12,
                name + ": gap disagrees with the zero-count entry");

    const cd one = multiplicative_expectation(k, CVec::Ones(k.size()));
    out.require(one.real() == 1.0 && one.imag() == 0.0,
                name + ": unit statistic must be exactly one");
  }

  // exact-configuration densities over a full window sum to one
  std::vector<std::pair<std::string, KernelMatrix>> janossy_kernels;
  janossy_kernels.emplace_back(
      "l", l_to_k(LMatrix{GroundSet::of_size(4), l4_matrix()}));
  janossy_kernels.emplace_back(
      "onedep", onedep_kernel(BlockCorrelations::bernoulli(5, 0.4)));
  CMat lc(2, 2);
  lc << cd(1.2, 0.0), cd(0.4, 0.7), cd(0.1, -0.2), cd(0.9, 0.0);
  janossy_kernels.emplace_back("complex l",
                               l_to_k(LMatrix{GroundSet::of_size(2), lc}));

  double worst_jan = 0.0;
  for (const auto& [name, k] : janossy_kernels) {
    std::vector<int> all(k.size());
    for (int i = 0; i < k.size(); ++i) all[i] = i;
    const Window w(all);
    cd total(0.0, 0.0);
    for_each_subset(k.size(), [&](const std::vector<int>& pts) {
      total += janossy(k, w, Configuration(pts));
    });
    worst_jan = std::max(worst_jan, std::abs(total - cd(1.0)));
    out.require(std::abs(total - cd(1.0)) <= 1e-10,
                name + ": window densities do not sum to one");
  }

  if (out.ok)
    out.detail = "count-sum dev " + fmt(worst_sum) + ", gap dev " +
                 fmt(worst_gap) + ", density-sum dev " + fmt(worst_jan);
  return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome exact_counts() {
  Outcome out;

  const std::vector<std::int64_t> fib = {1, 2, 3, 5, 8, 13};
  for (int n = 1; n <= 6; ++n) {
    const auto g = PlanarBipartiteGraph::grid(2, n);
    out.require(count_dimer_covers(g) == fib[n - 1],
                "2x" + std::to_string(n) + " dimer count");
    out.require(
        std::int64_t(enumerate_matchings(g).weights.size()) == fib[n - 1],
        "2x" + std::to_string(n) + " matching enumeration");
  }
  const auto g44 = PlanarBipartiteGraph::grid(4, 4);
  out.require(count_dimer_covers(g44) == 36, "4x4 dimer count");
  out.require(enumerate_matchings(g44).weights.size() == 36,
              "4x4 matching enumeration");

  const std::vector<std::pair<OrientedGraph, std::int64_t>> trees = {
      {OrientedGraph::complete(3), 3},
      {OrientedGraph::complete(4), 16},
      {OrientedGraph::grid(3, 3), 192},
  };
  for (const auto& [g, expected] : trees) {
    out.require(count_spanning_trees(g) == expected, "tree count");
    out.require(std::int64_t(enumerate_spanning_trees(g).weights.size()) ==
                    expected,
                "tree enumeration");
  }

  if (out.ok) out.detail = "dimer 2x1..2x6 + 4x4, trees K3/K4/3x3 grid";
  return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome poissonized_partition_correlations() {
  Outcome out;
  const int cutoff = 18;
  double worst = 0.0, tail = 0.0;

  for (double theta : {0.3, 0.5}) {
    const KernelMatrix k = bessel_window_kernel(theta, -5, 5);
    std::vector<int> pts;
    for (int i = 0; i < k.size(); ++i) pts.push_back(-5 + 2 * i);

    for (int i = 0; i < k.size(); ++i) {
      const auto direct = plancherel_correlation({pts[i]}, theta, cutoff);
      tail = std::max(tail, direct.tail_bound);
      const double dev = std::abs(k.k(i, i).real() - direct.value);
      worst = std::max(worst, dev);
      out.require(dev <= 1e-7, "one-point density at theta " + fmt(theta));
    }
    for (int i = 0; i < k.size(); ++i)
      for (int j = i + 1; j < k.size(); ++j) {
        const double det2 = (k.k(i, i) * k.k(j, j) - k.k(i, j) * k.k(j, i)).real();
        const auto direct =
            plancherel_correlation({pts[i], pts[j]}, theta, cutoff);
        tail = std::max(tail, direct.tail_bound);
        const double dev = std::abs(det2 - direct.value);
        worst = std::max(worst, dev);
        out.require(dev <= 1e-7, "two-point density at theta " + fmt(theta));
      }
  }

  out.detail = "max deviation " + fmt(worst) + ", truncation tail " + fmt(tail);
  return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome continuum_discretizations() {
  Outcome out;

  const SpectrumCheck sine_spec =
      discretized_validity(sine_kernel, NystromGrid::on_interval(0, 1, 60));
  out.require(sine_spec.min_eig >= -1e-10 && sine_spec.max_eig <= 1 + 1e-10,
              "sine spectrum escapes [0,1]");
  const SpectrumCheck airy_spec =
      discretized_validity(airy_kernel, NystromGrid::on_interval(0, 8, 60));
  out.require(airy_spec.min_eig >= -1e-10 && airy_spec.max_eig <= 1 + 1e-10,
              "airy spectrum escapes [0,1]");

  double worst_delta = 0.0;
  const std::vector<std::tuple<ScalarKernel, double, double>> dets = {
      {sine_kernel, 0.0, 1.0},
      {sine_kernel, 0.0, 2.0},
      {airy_kernel, -2.0, 2.0},
  };
  for (const auto& [kfn, a, b] : dets) {
    const double d40 = fredholm_det(kfn, NystromGrid::on_interval(a, b, 40));
    const double d80 = fredholm_det(kfn, NystromGrid::on_interval(a, b, 80));
    worst_delta = std::max(worst_delta, std::abs(d40 - d80));
    out.require(std::abs(d40 - d80) <= 1e-8, "determinant not settled");
  }

  double prev = 1.0;
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    const double gap =
        fredholm_det(sine_kernel, NystromGrid::on_interval(0.0, s, 48));
    out.require(gap < prev && gap > 0.0, "sine gaps must decrease strictly");
    prev = gap;
  }
  prev = 1.0;
  for (auto [a, b] : std::vector<std::pair<double, double>>{
           {-1, 1}, {-1, 2}, {-2, 2}}) {
    const double gap =
        fredholm_det(airy_kernel, NystromGrid::on_interval(a, b, 48));
    out.require(gap < prev && gap > 0.0, "airy gaps must decrease strictly");
    prev = gap;
  }

  if (out.ok)
    out.detail = "spectra in [" +
                 fmt(std::min(sine_spec.min_eig, airy_spec.min_eig)) + ", " +
                 fmt(std::max(sine_spec.max_eig, airy_spec.max_eig)) +
                 "], refinement delta " + fmt(worst_delta);
  return out;
}

// ---------------------------------------------------------------- criterion 6

double total_variation(const KernelMatrix& k,
                       const std::function<double(const std::vector<int>&)>& p,
                       long n_draws, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::map<std::vector<int>, long> counts;
  for (long i = 0; i < n_draws; ++i) ++counts[sample(k, rng).idx];

  double tv = 0.0;
  for_each_subset(k.size(), [&](const std::vector<int>& pts) {
    const auto it = counts.find(pts);
    const double emp = it == counts.end() ? 0.0 : double(it->second) / n_draws;
    tv += std::abs(emp - p(pts));
  });
  return tv / 2.0;
}

Outcome sampler_distributions() {
  Outcome out;
  const long n = 1000000;
  double worst_tv = 0.0;

  {
    const LMatrix l{GroundSet::of_size(2), CMat::Ones(2, 2)};
    const double tv = total_variation(
        l_to_k(l),
        [&](const std::vector<int>& s) {
          return l_probability(l, Configuration(s)).real();
        },
        n, 2026);
    worst_tv = std::max(worst_tv, tv);
  }
  {
    const std::vector<double> p = {0.2, 0.5, 0.8};
    CMat k = CMat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) k(i, i) = p[i];
    const double tv = total_variation(
        KernelMatrix{GroundSet::of_size(3), k},
        [&](const std::vector<int>& s) {
          double prob = 1.0;
          for (int i = 0; i < 3; ++i) {
            const bool in = std::find(s.begin(), s.end(), i) != s.end();
            prob *= in ? p[i] : 1.0 - p[i];
          }
          return prob;
        },
        n, 2027);
    worst_tv = std::max(worst_tv, tv);
  }
  {
    const LMatrix l{GroundSet::of_size(4), l4_matrix()};
    const double tv = total_variation(
        l_to_k(l),
        [&](const std::vector<int>& s) {
          return l_probability(l, Configuration(s)).real();
        },
        n, 2028);
    worst_tv = std::max(worst_tv, tv);
  }
  out.require(worst_tv <= 5e-3, "total variation " + fmt(worst_tv));

  double worst_pull = 0.0;
  {
    std::mt19937_64 rng(2029);
    const auto est = empirical_correlations(
        transfer_current(OrientedGraph::complete(3)),
        {Configuration({0}), Configuration({1}), Configuration({2})}, n, rng);
    for (const auto& e : est) {
      worst_pull = std::max(worst_pull,
                            std::abs(e.estimate - e.exact) / e.std_error);
      out.require(std::abs(e.exact - 2.0 / 3.0) < 1e-12, "triangle tree density");
    }
  }
  {
    const auto g = PlanarBipartiteGraph::grid(2, 2);
    std::mt19937_64 rng(2030);
    const auto est = empirical_correlations(
        dimer_kernel(g, kasteleyn_weighting(g)),
        {Configuration({0}), Configuration({1}), Configuration({2}),
         Configuration({3})},
        n, rng);
    for (const auto& e : est) {
      worst_pull = std::max(worst_pull,
                            std::abs(e.estimate - e.exact) / e.std_error);
      out.require(std::abs(e.exact - 0.5) < 1e-12, "four-cycle dimer density");
    }
  }
  out.require(worst_pull <= 3.0, "density estimate outside three sigma");

  if (out.ok)
    out.detail = "max TV " + fmt(worst_tv) + " over " + std::to_string(n) +
                 " draws, max |z| " + fmt(worst_pull);
  return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome structural_laws() {
  Outcome out;

  double worst_proj = 0.0;
  for (const OrientedGraph& g :
       {OrientedGraph::complete(4), OrientedGraph::grid(3, 3),
        OrientedGraph::multi_edge_pair(3)}) {
    const KernelMatrix k = transfer_current(g);
    const double idem = (k.k * k.k - k.k).cwiseAbs().maxCoeff();
    const double symm = (k.k - k.k.transpose()).cwiseAbs().maxCoeff();
    const double tr = std::abs(k.k.trace().real() - (g.n_vertices - 1));
    worst_proj = std::max({worst_proj, idem, symm, tr});
    out.require(idem <= 1e-12 && symm <= 1e-12 && tr <= 1e-12,
                "transfer current projection law");
  }

  for (const BlockCorrelations& blocks :
       {BlockCorrelations::bernoulli(8, 0.3), BlockCorrelations::descents(6)}) {
    const KernelMatrix k = onedep_kernel(blocks);
    for (int x = 0; x < k.size(); ++x)
      for (int y = 0; y < k.size(); ++y) {
        if (x - y >= 2)
          out.require(k.k(x, y) == cd(0.0, 0.0), "far branch must be exact 0");
        if (x - y == 1)
          out.require(k.k(x, y) == cd(-1.0, 0.0), "near branch must be exact -1");
      }
  }

  double worst_rt = 0.0;
  {
    CMat lr(3, 3);
    lr << 0.9, 0.3, -0.1, 0.2, 1.1, 0.4, -0.2, 0.1, 0.7;
    const LMatrix l{GroundSet::of_size(3), lr};
    worst_rt = std::max(worst_rt,
                        (k_to_l(l_to_k(l)).l - lr).cwiseAbs().maxCoeff());
    CMat lc(2, 2);
    lc << cd(1.2, 0.0), cd(0.4, 0.7), cd(0.1, -0.2), cd(0.9, 0.0);
    const LMatrix lz{GroundSet::of_size(2), lc};
    worst_rt = std::max(worst_rt,
                        (k_to_l(l_to_k(lz)).l - lc).cwiseAbs().maxCoeff());
  }
  out.require(worst_rt <= 1e-12, "ensemble round-trip drift " + fmt(worst_rt));

  double worst_cond = 0.0;
  {
    CMat lr(3, 3);
    lr << 0.9, 0.3, -0.1, 0.2, 1.1, 0.4, -0.2, 0.1, 0.7;
    const LMatrix l{GroundSet::of_size(3), lr};
    const ConditionalSplit whole{Window({0, 1, 2})};
    worst_cond =
        (conditional_k(l, whole).k - l_to_k(l).k).cwiseAbs().maxCoeff();
  }
  out.require(worst_cond <= 1e-12, "trivial conditioning drift " + fmt(worst_cond));

  if (out.ok)
    out.detail = "projection dev " + fmt(worst_proj) + ", round-trip dev " +
                 fmt(worst_rt) + ", conditioning dev " + fmt(worst_cond);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"bundled kernels match brute-force correlations up to order four",
       mechanism_oracle_equivalence},
      {"counting, gap, density and multiplicative identities hold",
       observable_identities},
      {"dimer and spanning-tree counts are exact", exact_counts},
      {"poissonized partition densities match direct summation",
       poissonized_partition_correlations},
      {"continuum discretizations are valid, settled and monotone",
       continuum_discretizations},
      {"sampled configurations follow the target laws", sampler_distributions},
      {"structural kernel laws hold", structural_laws},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s%s%s\n", out.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), out.detail.empty() ? "" : " -- ",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
