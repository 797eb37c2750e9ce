#include "detpp/detproducts.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>

#include "detpp/core.hpp"

namespace detpp {

namespace {

// G^{-t} with an invertibility guard; shared by all Gram-based kernels.
CMat gram_inverse_transpose(const CMat& g, const char* what) {
  Eigen::FullPivLU<CMat> lu(g);
  // rcond() is meaningless on rank-deficient input, so check the rank too
  if (!lu.isInvertible() || !(lu.rcond() >= kRcondFloor))
    throw Error("SingularGram", what, 3);
  return lu.inverse().transpose();
}

void for_each_combination(int n, int k,
                          const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      fn(pick);
      return;
    }
    for (int i = start; i <= n - (k - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

BiorthogonalSpec::BiorthogonalSpec(GroundSet ground, CMat phi_rows,
                                   CMat psi_rows)
    : gs(std::move(ground)), phi(std::move(phi_rows)), psi(std::move(psi_rows)) {
  if (phi.rows() != psi.rows() || phi.cols() != gs.size() ||
      psi.cols() != gs.size())
    throw Error("DimensionMismatch",
                "Phi and Psi must both be N x |ground set|", 2);
  if (phi.rows() < 1 || phi.rows() > gs.size())
    throw Error("DimensionMismatch", "need 1 <= N <= |ground set|", 2);
}

CMat gram(const BiorthogonalSpec& spec) {
  return spec.phi * spec.gs.mu.asDiagonal() * spec.psi.transpose();
}

KernelMatrix bi_kernel(const BiorthogonalSpec& spec) {
  const CMat ginv_t = gram_inverse_transpose(
      gram(spec), "Gram matrix singular: the ensemble has Z = 0");
  return {spec.gs, CMat(spec.phi.transpose() * ginv_t * spec.psi)};
}

BiorthogonalSpec ope_spec(const std::vector<double>& points,
                          const std::vector<double>& w, int n) {
  if (points.size() != w.size() || points.empty())
    throw Error("DimensionMismatch", "need one weight per point", 2);
  std::vector<std::string> labels;
  for (double x : points) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    labels.emplace_back(buf);
  }
  GroundSet gs(std::move(labels));
  const int m = gs.size();
  CMat phi(n, m);
  for (int j = 0; j < m; ++j) {
    if (w[j] <= 0.0)
      throw Error("InvalidReferenceWeight", "weights must be positive", 2);
    const double root = std::sqrt(w[j]);
    double power = 1.0;
    for (int i = 0; i < n; ++i) {
      phi(i, j) = power * root;
      power *= points[j];
    }
  }
  return {std::move(gs), phi, phi};
}

ExplicitProcess weights_from_spec(const BiorthogonalSpec& spec) {
  const int m = spec.gs.size();
  const int n = spec.n_particles();
  const std::vector<int> all_rows = iota_vec(n);
  ExplicitProcess process(spec.gs);
  for_each_combination(m, n, [&](const std::vector<int>& x) {
    cd w = det_submatrix(spec.phi, all_rows, x) *
           det_submatrix(spec.psi, all_rows, x);
    for (int j : x) w *= spec.gs.mu(j);
    process.add_weight(Configuration(x), w);
  });
  process.finalize();
  if (process.z == cd(0.0))
    throw Error("ZeroPartitionFunction", "ensemble weights sum to zero", 3);
  return process;
}

LayeredSpec::LayeredSpec(std::vector<GroundSet> layer_sets, CMat phi_rows,
                         CMat psi_rows, std::vector<CMat> transitions)
    : layers(std::move(layer_sets)),
      phi(std::move(phi_rows)),
      psi(std::move(psi_rows)),
      t(std::move(transitions)) {
  const int k = n_layers();
  if (k < 1 || static_cast<int>(t.size()) != k - 1)
    throw Error("DimensionMismatch", "need one transition per layer gap", 2);
  for (const GroundSet& layer : layers) {
    layer.validate();
    if (!layer.counting_measure())
      throw Error("InvalidReferenceWeight",
                  "layered ensembles use counting measure per layer", 2);
  }
  const int n = n_particles();
  if (n < 1) throw Error("DimensionMismatch", "need at least one particle", 2);
  if (phi.cols() != layers.front().size() || psi.cols() != layers.back().size())
    throw Error("DimensionMismatch", "Phi lives on the first layer, Psi on the last", 2);
  if (psi.rows() != n)
    throw Error("DimensionMismatch", "Phi and Psi must have N rows each", 2);
  for (int j = 0; j + 1 < k; ++j)
    if (t[j].rows() != layers[j].size() || t[j].cols() != layers[j + 1].size())
      throw Error("DimensionMismatch", "transition shape must bridge its two layers", 2);
  for (const GroundSet& layer : layers)
    if (n > layer.size())
      throw Error("DimensionMismatch", "every layer needs at least N points", 2);
}

GroundSet LayeredSpec::union_ground() const {
  std::vector<std::string> labels;
  for (int j = 0; j < n_layers(); ++j)
    for (const std::string& p : layers[j].labels)
      labels.push_back("l" + std::to_string(j + 1) + ":" + p);
  return GroundSet(std::move(labels));
}

void LayeredSpec::locate(int union_index, int* layer, int* offset) const {
  int base = 0;
  for (int j = 0; j < n_layers(); ++j) {
    if (union_index < base + layers[j].size()) {
      *layer = j;
      *offset = union_index - base;
      return;
    }
    base += layers[j].size();
  }
  throw Error("IndexOutOfRange", "union index outside all layers", 2);
}

CMat layered_gram(const LayeredSpec& spec) {
  CMat acc = spec.phi;
  for (const CMat& step : spec.t) acc = CMat(acc * step);
  return acc * spec.psi.transpose();
}

KernelMatrix em_kernel(const LayeredSpec& spec) {
  const int k = spec.n_layers();
  const CMat ginv_t = gram_inverse_transpose(
      layered_gram(spec), "layered Gram singular: Z = 0");

  // forward[p] = Phi * T_1 ... T_{p-1} on layer p; backward[q] = T_q ... T_{k-1} * Psi^T
  std::vector<CMat> forward(k), backward(k);
  forward[0] = spec.phi;
  for (int p = 1; p < k; ++p) forward[p] = CMat(forward[p - 1] * spec.t[p - 1]);
  backward[k - 1] = spec.psi.transpose();
  for (int q = k - 2; q >= 0; --q) backward[q] = CMat(spec.t[q] * backward[q + 1]);

  int total = 0;
  std::vector<int> base(k);
  for (int j = 0; j < k; ++j) {
    base[j] = total;
    total += spec.layers[j].size();
  }

  CMat kernel(total, total);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q) {
      CMat block = forward[p].transpose() * ginv_t * backward[q].transpose();
      if (p > q) {
        // within-ensemble transition T_{q+1,..,p} read backwards
        CMat hop = spec.t[q];
        for (int l = q + 1; l < p; ++l) hop = CMat(hop * spec.t[l]);
        block -= hop.transpose();
      }
      kernel.block(base[p], base[q], spec.layers[p].size(),
                   spec.layers[q].size()) = block;
    }
  return {spec.union_ground(), std::move(kernel)};
}

ExplicitProcess weights_from_spec(const LayeredSpec& spec) {
  const int k = spec.n_layers();
  const int n = spec.n_particles();
  const std::vector<int> all_rows = iota_vec(n);
  int total = 0;
  std::vector<int> base(k);
  for (int j = 0; j < k; ++j) {
    base[j] = total;
    total += spec.layers[j].size();
  }

  ExplicitProcess process(spec.union_ground());
  std::vector<std::vector<int>> chosen(k);
  std::function<void(int)> pick_layer = [&](int j) {
    if (j == k) {
      cd w = det_submatrix(spec.phi, all_rows, chosen[0]);
      for (int l = 0; l + 1 < k; ++l)
        w *= det_submatrix(spec.t[l], chosen[l], chosen[l + 1]);
      w *= det_submatrix(spec.psi, all_rows, chosen[k - 1]);
      std::vector<int> cfg;
      for (int l = 0; l < k; ++l)
        for (int i : chosen[l]) cfg.push_back(base[l] + i);
      process.add_weight(Configuration(cfg), w);
      return;
    }
    for_each_combination(spec.layers[j].size(), n, [&](const std::vector<int>& x) {
      chosen[j] = x;
      pick_layer(j + 1);
    });
  };
  pick_layer(0);
  process.finalize();
  if (process.z == cd(0.0))
    throw Error("ZeroPartitionFunction", "ensemble weights sum to zero", 3);
  return process;
}

LayeredSpec NiceCaseSpec::to_layered() const {
  const int k = static_cast<int>(layers.size());
  const int d = layers.empty() ? 0 : layers.front().size();
  if (k < 1 || c.rows() != k - 1 || c.cols() != d)
    throw Error("DimensionMismatch", "need step constants for every layer gap", 2);
  std::vector<CMat> trans;
  for (int l = 0; l + 1 < k; ++l)
    trans.push_back(CMat(xi[l].transpose() * c.row(l).asDiagonal() * xi[l + 1]));
  return LayeredSpec(layers, xi.front().topRows(n_particles),
                     xi.back().topRows(n_particles), std::move(trans));
}

KernelMatrix nice_case_kernel(const NiceCaseSpec& spec) {
  const int k = static_cast<int>(spec.layers.size());
  if (k < 1 || static_cast<int>(spec.xi.size()) != k)
    throw Error("DimensionMismatch", "one basis per layer", 2);
  const int d = spec.layers.front().size();
  const int n = spec.n_particles;
  if (n < 1 || n > d)
    throw Error("DimensionMismatch", "need 1 <= N <= layer dimension", 2);
  for (int j = 0; j < k; ++j) {
    if (spec.layers[j].size() != d || spec.xi[j].rows() != d ||
        spec.xi[j].cols() != d)
      throw Error("DimensionMismatch", "all layers share one dimension", 2);
    const double defect =
        (CMat(spec.xi[j] * spec.xi[j].transpose()) - CMat::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
    if (defect > 1e-10)
      throw Error("NotOrthonormal", "basis rows must be bilinearly orthonormal", 2);
  }
  if (spec.c.rows() != k - 1 || spec.c.cols() != d)
    throw Error("DimensionMismatch", "need step constants for every layer gap", 2);

  // c_{p,q;i} = prod of step constants between layers p and q (0-based here)
  auto chain = [&](int p, int q, int i) {
    cd prod(1.0);
    for (int l = p; l < q; ++l) prod *= spec.c(l, i);
    return prod;
  };

  const int total = k * d;
  CMat kernel(total, total);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q) {
      CMat block = CMat::Zero(d, d);
      if (p <= q) {
        for (int i = 0; i < n; ++i) {
          const cd divisor = chain(p, q, i);
          if (divisor == cd(0.0))
            throw Error("ZeroConstant",
                        "vanishing step constant below the particle count", 3);
          block += spec.xi[p].row(i).transpose() * spec.xi[q].row(i) / divisor;
        }
      } else {
        for (int i = n; i < d; ++i)
          block -= chain(q, p, i) *
                   CMat(spec.xi[p].row(i).transpose() * spec.xi[q].row(i));
      }
      kernel.block(p * d, q * d, d, d) = block;
    }

  std::vector<std::string> labels;
  for (int j = 0; j < k; ++j)
    for (const std::string& pt : spec.layers[j].labels)
      labels.push_back("l" + std::to_string(j + 1) + ":" + pt);
  return {GroundSet(std::move(labels)), std::move(kernel)};
}

std::vector<int> topological_order(const WeightedDag& dag) {
  const int n = dag.n_vertices;
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const auto& e : dag.edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw Error("IndexOutOfRange", "edge endpoint outside vertex range", 2);
    ++indegree[e.to];
    out[e.from].push_back(e.to);
  }
  std::vector<int> order;
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int w : out[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  if (static_cast<int>(order.size()) != n)
    throw Error("CycleDetected", "graph is not acyclic", 2);
  return order;
}

cd lgv_transfer(const WeightedDag& dag, int u, int v) {
  const std::vector<int> order = topological_order(dag);
  const int n = dag.n_vertices;
  if (u < 0 || u >= n || v < 0 || v >= n)
    throw Error("IndexOutOfRange", "endpoint outside vertex range", 2);
  std::vector<std::vector<std::pair<int, cd>>> out(n);
  for (const auto& e : dag.edges) out[e.from].push_back({e.to, e.w});
  std::vector<cd> mass(n, cd(0.0));
  mass[u] = cd(1.0);
  for (int x : order)
    if (mass[x] != cd(0.0))
      for (const auto& [to, w] : out[x]) mass[to] += mass[x] * w;
  return mass[v];
}

namespace {

struct PathAtom {
  uint64_t mask;
  cd weight;
};

std::vector<PathAtom> all_paths(const WeightedDag& dag, int u, int v) {
  std::vector<std::vector<std::pair<int, cd>>> out(dag.n_vertices);
  for (const auto& e : dag.edges) out[e.from].push_back({e.to, e.w});
  std::vector<PathAtom> found;
  std::function<void(int, uint64_t, cd)> dfs = [&](int x, uint64_t mask, cd w) {
    if (x == v) {
      found.push_back({mask, w});
      return;
    }
    for (const auto& [to, ew] : out[x])
      if (!(mask & (uint64_t(1) << to)))
        dfs(to, mask | (uint64_t(1) << to), w * ew);
  };
  dfs(u, uint64_t(1) << u, cd(1.0));
  return found;
}

cd disjoint_family_sum(const std::vector<std::vector<PathAtom>>& choices) {
  cd total(0.0);
  std::function<void(size_t, uint64_t, cd)> pick = [&](size_t i, uint64_t used,
                                                       cd w) {
    if (i == choices.size()) {
      total += w;
      return;
    }
    for (const PathAtom& p : choices[i])
      if (!(p.mask & used)) pick(i + 1, used | p.mask, w * p.weight);
  };
  pick(0, 0, cd(1.0));
  return total;
}

bool disjoint_family_exists(const std::vector<std::vector<PathAtom>>& choices) {
  std::function<bool(size_t, uint64_t)> pick = [&](size_t i,
                                                   uint64_t used) -> bool {
    if (i == choices.size()) return true;
    for (const PathAtom& p : choices[i])
      if (!(p.mask & used) && pick(i + 1, used | p.mask)) return true;
    return false;
  };
  return pick(0, 0);
}

}  // namespace

LgvReport lgv_check(const WeightedDag& dag, const std::vector<int>& sources,
                    const std::vector<int>& sinks) {
  if (sources.size() != sinks.size() || sources.empty())
    throw Error("DimensionMismatch", "need equally many sources and sinks", 2);
  if (dag.n_vertices > 63)
    throw Error("EnumerationTooLarge", "path enumeration limited to 63 vertices", 2);
  topological_order(dag);  // acyclicity gate
  const int n = static_cast<int>(sources.size());

  std::vector<std::vector<std::vector<PathAtom>>> paths(
      n, std::vector<std::vector<PathAtom>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) paths[i][j] = all_paths(dag, sources[i], sinks[j]);

  // nonidentity pairings must admit no vertex-disjoint family
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<std::vector<PathAtom>> choices(n);
    bool feasible = true;
    for (int i = 0; i < n && feasible; ++i) {
      choices[i] = paths[i][perm[i]];
      feasible = !choices[i].empty();
    }
    if (feasible && disjoint_family_exists(choices))
      throw Error("CompatibilityViolated",
                  "a nonidentity source-sink pairing admits disjoint paths", 3);
  }

  std::vector<std::vector<PathAtom>> identity_choices(n);
  for (int i = 0; i < n; ++i) identity_choices[i] = paths[i][i];

  CMat t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cd sum(0.0);
      for (const PathAtom& p : paths[i][j]) sum += p.weight;
      t(i, j) = sum;
    }

  return {disjoint_family_sum(identity_choices), t.determinant()};
}

void VaryingSpec::validate() const {
  site.validate();
  if (!site.counting_measure())
    throw Error("InvalidReferenceWeight",
                "varying ensembles use counting measure", 2);
  const int n = n_levels();
  const int m = site.size();
  if (n < 1) throw Error("DimensionMismatch", "need at least one level", 2);
  for (int v : c)
    if (v < 0) throw Error("DimensionMismatch", "copy counts must be >= 0", 2);
  if (phi_virt.rows() != n || phi_virt.cols() != m)
    throw Error("DimensionMismatch", "phi_virt must be N x |site|", 2);
  if (static_cast<int>(phi.size()) != n)
    throw Error("DimensionMismatch", "need phi_n for every level (phi_1 unused)", 2);
  for (int lvl = 2; lvl <= n; ++lvl)
    if (phi[lvl - 1].rows() != m || phi[lvl - 1].cols() != m)
      throw Error("DimensionMismatch", "two-point phi must be |site| x |site|", 2);
  if (static_cast<int>(ev.size()) != n)
    throw Error("DimensionMismatch", "need an evolution list per level", 2);
  for (int lvl = 1; lvl <= n; ++lvl) {
    if (static_cast<int>(ev[lvl - 1].size()) != c[lvl - 1])
      throw Error("DimensionMismatch", "need c(n) evolution steps on level n", 2);
    for (const CMat& step : ev[lvl - 1])
      if (step.rows() != m || step.cols() != m)
        throw Error("DimensionMismatch", "evolution steps must be |site| x |site|", 2);
  }
  if (psi.rows() != n || psi.cols() != m)
    throw Error("DimensionMismatch", "Psi must be N x |site|", 2);
  if (n > m)
    throw Error("DimensionMismatch", "level N needs N points in |site|", 2);
}

std::vector<VaryingSpec::Slice> VaryingSpec::slices() const {
  std::vector<Slice> out;
  for (int lvl = 1; lvl <= n_levels(); ++lvl)
    for (int copy = c[lvl - 1]; copy >= 0; --copy) out.push_back({lvl, copy});
  return out;
}

GroundSet VaryingSpec::union_ground() const {
  std::vector<std::string> labels;
  for (const Slice& s : slices())
    for (const std::string& p : site.labels)
      labels.push_back("t" + std::to_string(s.level) + "_" +
                       std::to_string(s.copy) + ":" + p);
  return GroundSet(std::move(labels));
}

namespace {

// product of per-step matrices between slice positions i <= j (identity at i == j)
CMat slice_path(const VaryingSpec& spec,
                const std::vector<VaryingSpec::Slice>& sl, int i, int j) {
  const int m = spec.site.size();
  CMat acc = CMat::Identity(m, m);
  for (int s = i; s < j; ++s) {
    if (sl[s].level == sl[s + 1].level)
      acc = CMat(acc * spec.ev[sl[s].level - 1][sl[s].copy - 1]);
    else
      acc = CMat(acc * spec.phi[sl[s + 1].level - 1]);
  }
  return acc;
}

}  // namespace

KernelMatrix varying_kernel(const VaryingSpec& spec) {
  spec.validate();
  const int n = spec.n_levels();
  const int m = spec.site.size();
  const std::vector<VaryingSpec::Slice> sl = spec.slices();
  const int n_slices = static_cast<int>(sl.size());
  const int last = n_slices - 1;  // slice (N, 0)

  std::vector<int> level_head(n + 1, 0);  // position of slice (lvl, c(lvl))
  for (int i = 0; i < n_slices; ++i)
    if (sl[i].copy == spec.c[sl[i].level - 1]) level_head[sl[i].level] = i;

  CMat g(n, n);
  for (int k = 1; k <= n; ++k) {
    const Eigen::RowVectorXcd row =
        spec.phi_virt.row(k - 1) * slice_path(spec, sl, level_head[k], last);
    g.row(k - 1) = row * spec.psi.transpose();
  }
  const CMat ginv_t =
      gram_inverse_transpose(g, "varying-ensemble Gram singular: Z = 0");

  // per slice: columns i (only i <= level valid) of phi_i evolved to the slice
  std::vector<CMat> into(n_slices), out_of(n_slices);
  for (int s = 0; s < n_slices; ++s) {
    CMat a = CMat::Zero(m, n);
    for (int i = 1; i <= sl[s].level; ++i)
      a.col(i - 1) = (spec.phi_virt.row(i - 1) *
                      slice_path(spec, sl, level_head[i], s))
                         .transpose();
    into[s] = std::move(a);
    out_of[s] = CMat(slice_path(spec, sl, s, last) * spec.psi.transpose());
  }

  CMat kernel(n_slices * m, n_slices * m);
  for (int s1 = 0; s1 < n_slices; ++s1)
    for (int s2 = 0; s2 < n_slices; ++s2) {
      CMat block = into[s1] * ginv_t * out_of[s2].transpose();
      if (s2 < s1) block -= slice_path(spec, sl, s2, s1).transpose();
      kernel.block(s1 * m, s2 * m, m, m) = block;
    }
  return {spec.union_ground(), std::move(kernel)};
}

ExplicitProcess weights_from_spec(const VaryingSpec& spec) {
  spec.validate();
  const int n = spec.n_levels();
  const int m = spec.site.size();
  const std::vector<VaryingSpec::Slice> sl = spec.slices();
  const int n_slices = static_cast<int>(sl.size());

  ExplicitProcess process(spec.union_ground());
  std::vector<std::vector<int>> chosen(n_slices);

  auto slice_pos = [&](int level, int copy) {
    for (int i = 0; i < n_slices; ++i)
      if (sl[i].level == level && sl[i].copy == copy) return i;
    throw Error("IndexOutOfRange", "no such slice", 2);
  };

  std::function<void(int)> pick = [&](int s) {
    if (s == n_slices) {
      cd w(1.0);
      for (int lvl = 1; lvl <= n; ++lvl) {
        // entry determinant: points of (lvl-1, 0) plus the virtual row
        const std::vector<int>& target = chosen[slice_pos(lvl, spec.c[lvl - 1])];
        CMat a(lvl, lvl);
        if (lvl > 1) {
          const std::vector<int>& src = chosen[slice_pos(lvl - 1, 0)];
          for (int k = 0; k < lvl - 1; ++k)
            for (int l = 0; l < lvl; ++l)
              a(k, l) = spec.phi[lvl - 1](src[k], target[l]);
        }
        for (int l = 0; l < lvl; ++l)
          a(lvl - 1, l) = spec.phi_virt(lvl - 1, target[l]);
        w *= a.determinant();
        // within-level evolution determinants, copy a down to a-1
        for (int copy = spec.c[lvl - 1]; copy >= 1; --copy) {
          const std::vector<int>& hi = chosen[slice_pos(lvl, copy)];
          const std::vector<int>& lo = chosen[slice_pos(lvl, copy - 1)];
          w *= det_submatrix(spec.ev[lvl - 1][copy - 1], hi, lo);
        }
      }
      const std::vector<int>& final_pts = chosen[slice_pos(n, 0)];
      CMat cmat(n, n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) cmat(k, l) = spec.psi(l, final_pts[k]);
      w *= cmat.determinant();

      std::vector<int> cfg;
      for (int i = 0; i < n_slices; ++i)
        for (int p : chosen[i]) cfg.push_back(i * m + p);
      process.add_weight(Configuration(cfg), w);
      return;
    }
    for_each_combination(m, sl[s].level, [&](const std::vector<int>& x) {
      chosen[s] = x;
      pick(s + 1);
    });
  };
  pick(0);
  process.finalize();
  if (process.z == cd(0.0))
    throw Error("ZeroPartitionFunction", "ensemble weights sum to zero", 3);
  return process;
}

}  // namespace detpp
