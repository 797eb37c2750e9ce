#include <doctest.h>

#include <cmath>
#include <numbers>

#include "detpp/core.hpp"
#include "detpp/detproducts.hpp"
#include "helpers.hpp"

using namespace detpp;

namespace {

// M-th roots of unity with mu = 1/M; Phi_i(z) = z^{i-1}, Psi_i = conj(z)^{i-1}
BiorthogonalSpec roots_of_unity(int m, int n) {
  std::vector<std::string> labels;
  for (int j = 0; j < m; ++j) labels.push_back("z" + std::to_string(j));
  GroundSet gs(labels, RVec::Constant(m, 1.0 / m));
  CMat phi(n, m), psi(n, m);
  for (int j = 0; j < m; ++j) {
    const cd z = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
    for (int i = 0; i < n; ++i) {
      phi(i, j) = std::pow(z, i);
      psi(i, j) = std::pow(std::conj(z), i);
    }
  }
  return BiorthogonalSpec(std::move(gs), std::move(phi), std::move(psi));
}

WeightedDag grid_dag(int m) {
  WeightedDag dag;
  dag.n_vertices = m * m;
  auto id = [m](int i, int j) { return i * m + j; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (j + 1 < m) dag.edges.push_back({id(i, j), id(i, j + 1), 1.0});
      if (i + 1 < m) dag.edges.push_back({id(i, j), id(i + 1, j), 1.0});
    }
  return dag;
}

}  // namespace

TEST_CASE("gram matrices") {
  GroundSet gs = GroundSet::of_size(3);
  CMat basis = CMat::Zero(2, 3);
  basis(0, 0) = 1.0;
  basis(1, 1) = 1.0;
  const CMat g = gram(BiorthogonalSpec(gs, basis, basis));
  CHECK((g - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  const CMat gu = gram(roots_of_unity(5, 3));
  CHECK((gu - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

  GroundSet two = GroundSet::of_size(2);
  const CMat g1 = gram(BiorthogonalSpec(two, CMat::Ones(1, 2), CMat::Ones(1, 2)));
  CHECK(dist(g1(0, 0), 2.0) < 1e-15);
}

TEST_CASE("biorthogonal kernel basics") {
  GroundSet two = GroundSet::of_size(2);
  const BiorthogonalSpec uniform(two, CMat::Ones(1, 2), CMat::Ones(1, 2));
  const KernelMatrix k = bi_kernel(uniform);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(dist(k.k(i, j), 0.5) < 1e-15);

  const ExplicitProcess proc = weights_from_spec(uniform);
  CHECK(proc.weights.size() == 2);
  CHECK(dist(proc.weight(Configuration({0})), 1.0) < 1e-15);
  CHECK(dist(proc.z, 2.0) < 1e-15);
  CHECK(verify_determinantal(proc, k, 2).pass);

  // degenerate spec: repeated rows make the Gram matrix singular
  const BiorthogonalSpec bad(two, CMat::Ones(2, 2), CMat::Ones(2, 2));
  CHECK_THROWS_WITH_AS(bi_kernel(bad), doctest::Contains("SingularGram"), Error);
}

TEST_CASE("roots-of-unity ensemble") {
  const int m = 5, n = 3;
  const BiorthogonalSpec spec = roots_of_unity(m, n);
  const KernelMatrix k = bi_kernel(spec);

  // orthonormal family: K(x,y) = (1/M) sum_{i<N} (x conj(y))^i
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const cd x = std::polar(1.0, 2.0 * std::numbers::pi * a / m);
      const cd y = std::polar(1.0, 2.0 * std::numbers::pi * b / m);
      cd expect = 0.0;
      for (int i = 0; i < n; ++i) expect += std::pow(x * std::conj(y), i);
      CHECK(dist(k.k(a, b), expect) < 1e-13);
    }

  // exactly-N process: the mu-weighted trace counts the points
  CHECK(dist(k.counting().trace(), cd(n)) < 1e-13);

  // reproducing property for a biorthonormal family
  const CMat kc = k.counting();
  CHECK(((kc * k.k) - k.k).cwiseAbs().maxCoeff() < 1e-13);

  CHECK(verify_determinantal(weights_from_spec(spec), k, 4).pass);
}

TEST_CASE("orthogonal polynomial ensemble weights") {
  const std::vector<double> pts{0.0, 1.0, 2.0};
  const BiorthogonalSpec ope = ope_spec(pts, {1.0, 1.0, 1.0}, 2);
  const ExplicitProcess proc = weights_from_spec(ope);

  // squared Vandermonde weights 1, 4, 1 over the three pairs
  CHECK(dist(proc.weight(Configuration({0, 2})) / proc.z, 4.0 / 6.0) < 1e-14);
  CHECK(dist(oracle_correlation(proc, Configuration({0, 2})), 4.0 / 6.0) < 1e-14);
  CHECK(verify_determinantal(proc, bi_kernel(ope), 3).pass);

  // N = 1: single point proportional to w
  const std::vector<double> w{1.0, 2.0, 3.0};
  const ExplicitProcess single = weights_from_spec(ope_spec(pts, w, 1));
  for (int x = 0; x < 3; ++x)
    CHECK(dist(single.weight(Configuration({x})) / single.z, w[x] / 6.0) < 1e-14);

  // N = |X|: deterministic full configuration
  const ExplicitProcess full = weights_from_spec(ope_spec(pts, w, 3));
  CHECK(full.weights.size() == 1);
  CHECK(dist(full.weight(Configuration({0, 1, 2})) / full.z, 1.0) < 1e-14);
}

TEST_CASE("single-layer spec reduces to the biorthogonal kernel") {
  const BiorthogonalSpec spec = roots_of_unity(4, 2);
  // counting measure copy of the same data (layers force mu == 1)
  GroundSet plain = GroundSet::of_size(4);
  const BiorthogonalSpec flat(plain, spec.phi, spec.psi);
  const LayeredSpec layered({plain}, spec.phi, spec.psi, {});
  const KernelMatrix a = bi_kernel(flat);
  const KernelMatrix b = em_kernel(layered);
  CHECK((a.k - b.k).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("two-layer all-ones ensemble verifies") {
  GroundSet l1 = GroundSet::of_size(2, "a");
  GroundSet l2 = GroundSet::of_size(2, "b");
  const LayeredSpec spec({l1, l2}, CMat::Ones(1, 2), CMat::Ones(1, 2),
                         {CMat::Ones(2, 2)});
  const KernelMatrix k = em_kernel(spec);
  const ExplicitProcess proc = weights_from_spec(spec);

  // k = 2, N = 1 weights factor as Phi(x) T(x,y) Psi(y)
  CHECK(dist(proc.weight(Configuration({0, 2})), 1.0) < 1e-15);
  CHECK(dist(proc.z, 4.0) < 1e-15);
  CHECK(verify_determinantal(proc, k, 2).pass);
}

TEST_CASE("three-layer generic ensemble verifies and has layer trace N") {
  const int n = 2;
  std::vector<GroundSet> layers{GroundSet::of_size(3, "a"),
                                GroundSet::of_size(3, "b"),
                                GroundSet::of_size(3, "c")};
  CMat phi(n, 3), psi(n, 3);
  for (int j = 0; j < 3; ++j) {
    phi(0, j) = 1.0;
    phi(1, j) = j;
    psi(0, j) = 1.0 + 0.1 * j * j;
    psi(1, j) = wobble(5, j);
  }
  std::vector<CMat> t(2, CMat::Zero(3, 3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      t[0](a, b) = 1.0 + 0.5 * wobble(a, b);
      t[1](a, b) = 1.0 + 0.5 * wobble(a + 3, b);
    }
  const LayeredSpec spec(layers, phi, psi, t);
  const KernelMatrix k = em_kernel(spec);

  CHECK(verify_determinantal(weights_from_spec(spec), k, 4).pass);

  for (int layer = 0; layer < 3; ++layer) {
    cd trace = 0.0;
    for (int off = 0; off < 3; ++off) {
      const int u = 3 * layer + off;
      trace += k.k(u, u);
    }
    CHECK(dist(trace, cd(n)) < 1e-10);
  }
}

TEST_CASE("factorized layered kernel") {
  // two layers sharing one orthonormal basis; rotation rows stay orthonormal
  const double th = 0.6;
  CMat q = CMat::Zero(3, 3);
  q(0, 0) = std::cos(th);
  q(0, 1) = -std::sin(th);
  q(1, 0) = std::sin(th);
  q(1, 1) = std::cos(th);
  q(2, 2) = 1.0;

  NiceCaseSpec nice;
  nice.layers = {GroundSet::of_size(3, "a"), GroundSet::of_size(3, "b")};
  nice.xi = {q, q};
  nice.c = CMat::Ones(1, 3);
  nice.n_particles = 1;

  const KernelMatrix k = nice_case_kernel(nice);
  const KernelMatrix viaem = em_kernel(nice.to_layered());
  CHECK((k.k - viaem.k).cwiseAbs().maxCoeff() < 1e-10);

  // same-layer blocks are the rank-N projections in the shared basis
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      CHECK(dist(k.k(x, y), q(0, x) * q(0, y)) < 1e-12);
      // the p > q block with unit constants: completeness minus projection
      const double delta = x == y ? 1.0 : 0.0;
      CHECK(dist(k.k(3 + x, y), q(0, x) * q(0, y) - delta) < 1e-12);
    }

  CHECK(verify_determinantal(weights_from_spec(nice.to_layered()), k, 2).pass);

  // only constants below the particle count sit in a denominator
  NiceCaseSpec broken = nice;
  broken.c(0, 0) = 0.0;
  CHECK_THROWS_WITH_AS(nice_case_kernel(broken), doctest::Contains("ZeroConstant"),
                       Error);
  NiceCaseSpec skewed = nice;
  skewed.xi[0](0, 0) += 0.2;
  CHECK_THROWS_WITH_AS(nice_case_kernel(skewed),
                       doctest::Contains("NotOrthonormal"), Error);
}

TEST_CASE("path transfer on grid dags") {
  const WeightedDag d2 = grid_dag(2);
  CHECK(dist(lgv_transfer(d2, 0, 0), 1.0) == 0.0);
  CHECK(dist(lgv_transfer(d2, 0, 3), 2.0) < 1e-15);
  const WeightedDag d3 = grid_dag(3);
  CHECK(dist(lgv_transfer(d3, 0, 8), 6.0) < 1e-15);
  CHECK(dist(lgv_transfer(d3, 8, 0), 0.0) == 0.0);

  WeightedDag cyclic;
  cyclic.n_vertices = 2;
  cyclic.edges = {{0, 1, 1.0}, {1, 0, 1.0}};
  CHECK_THROWS_WITH_AS(lgv_transfer(cyclic, 0, 1),
                       doctest::Contains("CycleDetected"), Error);
}

TEST_CASE("disjoint path families match the transfer determinant") {
  const WeightedDag d3 = grid_dag(3);
  auto id = [](int i, int j) { return i * 3 + j; };

  // single path: determinant is the transfer itself
  const LgvReport single = lgv_check(d3, {id(0, 0)}, {id(2, 2)});
  CHECK(dist(single.determinant, lgv_transfer(d3, 0, 8)) < 1e-15);
  CHECK(dist(single.enumeration, single.determinant) < 1e-15);

  // nested endpoints on the grid
  const LgvReport nested =
      lgv_check(d3, {id(0, 1), id(1, 0)}, {id(1, 2), id(2, 1)});
  CHECK(dist(nested.determinant, 3.0) < 1e-14);
  CHECK(dist(nested.enumeration, nested.determinant) < 1e-14);

  // parallel chains: block-diagonal transfer matrix
  WeightedDag chains;
  chains.n_vertices = 4;
  chains.edges = {{0, 1, cd(0.7, 0.1)}, {2, 3, cd(-1.2, 0.0)}};
  const LgvReport par = lgv_check(chains, {0, 2}, {1, 3});
  CHECK(dist(par.determinant, cd(0.7, 0.1) * cd(-1.2, 0.0)) < 1e-15);
  CHECK(dist(par.enumeration, par.determinant) < 1e-15);

  // crossing-only geometry violates the compatibility precondition
  WeightedDag crossing;
  crossing.n_vertices = 4;
  crossing.edges = {{0, 3, 1.0}, {1, 2, 1.0}};
  CHECK_THROWS_WITH_AS(lgv_check(crossing, {0, 1}, {2, 3}),
                       doctest::Contains("CompatibilityViolated"), Error);
}

TEST_CASE("nonintersecting birth-death trajectories") {
  // substochastic walk on a 4-site path, expanded over 3 time slices
  const int sites = 4, steps = 2;
  RMat p = RMat::Zero(sites, sites);
  for (int s = 0; s < sites; ++s) {
    if (s + 1 < sites) p(s, s + 1) = 0.5;
    if (s - 1 >= 0) p(s, s - 1) = 0.5;
  }

  WeightedDag expanded;
  expanded.n_vertices = sites * (steps + 1);
  for (int t = 0; t < steps; ++t)
    for (int a = 0; a < sites; ++a)
      for (int b = 0; b < sites; ++b)
        if (p(a, b) != 0.0)
          expanded.edges.push_back({t * sites + a, (t + 1) * sites + b, p(a, b)});

  const std::vector<int> x{0, 2};
  std::vector<int> sources, sinks;
  for (int v : x) {
    sources.push_back(v);
    sinks.push_back(steps * sites + v);
  }
  const LgvReport r = lgv_check(expanded, sources, sinks);

  RMat pt = p;
  for (int t = 1; t < steps; ++t) pt = pt * p;
  const double det =
      pt(x[0], x[0]) * pt(x[1], x[1]) - pt(x[0], x[1]) * pt(x[1], x[0]);
  CHECK(dist(r.determinant, det) < 1e-14);
  CHECK(dist(r.enumeration, det) < 1e-14);
}

TEST_CASE("varying level count: single level") {
  VaryingSpec spec;
  spec.site = GroundSet::of_size(2);
  spec.c = {0};
  spec.phi_virt = cmat_of({{1.0, 2.0}});
  spec.phi.emplace_back();  // slot for phi_1, never read
  spec.ev = {{}};
  spec.psi = cmat_of({{1.0, 0.5}});

  const KernelMatrix k = varying_kernel(spec);
  // rho_1(x) = phi_1(virt,x) Psi_1(x) / Z with Z = 2
  CHECK(dist(k.k(0, 0), 0.5) < 1e-14);
  CHECK(dist(k.k(1, 1), 0.5) < 1e-14);

  const ExplicitProcess proc = weights_from_spec(spec);
  CHECK(dist(proc.weight(Configuration({0})), 1.0) < 1e-15);
  CHECK(dist(proc.weight(Configuration({1})), 1.0) < 1e-15);
  CHECK(verify_determinantal(proc, k, 2).pass);
}

TEST_CASE("varying level count: two levels verify") {
  VaryingSpec spec;
  spec.site = GroundSet::of_size(3);
  spec.c = {0, 0};
  spec.phi_virt = cmat_of({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}});
  spec.phi.emplace_back();
  // interlacing-style two-point function 1{x <= y}
  CMat step = CMat::Zero(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) step(a, b) = 1.0;
  spec.phi.push_back(step);
  spec.ev = {{}, {}};
  spec.psi = cmat_of({{1.0, 1.0, 1.0}, {0.0, 1.0, 2.0}});

  CHECK(verify_determinantal(weights_from_spec(spec), varying_kernel(spec), 4)
            .pass);
}

TEST_CASE("varying level count: evolution step inside a level") {
  VaryingSpec spec;
  spec.site = GroundSet::of_size(3);
  spec.c = {1, 0};
  spec.phi_virt = cmat_of({{1.0, 1.0, 1.0}, {0.5, 1.0, 1.5}});
  spec.phi.emplace_back();
  CMat step = CMat::Zero(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) step(a, b) = 1.0;
  spec.phi.push_back(step);
  CMat ev = CMat::Zero(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) ev(a, b) = 1.0 + 0.4 * wobble(a, b);
  spec.ev = {{ev}, {}};
  spec.psi = cmat_of({{1.0, 1.0, 1.0}, {0.0, 1.0, 2.0}});

  CHECK(verify_determinantal(weights_from_spec(spec), varying_kernel(spec), 4)
            .pass);
}
