#pragma once

#include "detpp/types.hpp"

namespace detpp {

// Exactly-N ensemble with weight W(X) = det[Phi_i(x_j)] det[Psi_i(x_j)]
// (times the reference weights of the points).
struct BiorthogonalSpec {
  GroundSet gs;
  CMat phi;  // N x |X|, row i = Phi_i
  CMat psi;  // N x |X|, row i = Psi_i

  BiorthogonalSpec() = default;
  BiorthogonalSpec(GroundSet ground, CMat phi_rows, CMat psi_rows);

  int n_particles() const { return static_cast<int>(phi.rows()); }
};

// G_ij = sum_x Phi_i(x) Psi_j(x) mu(x).
CMat gram(const BiorthogonalSpec& spec);

// K(x,y) = sum_ij [G^{-t}]_ij Phi_i(x) Psi_j(y).
KernelMatrix bi_kernel(const BiorthogonalSpec& spec);

// Orthogonal polynomial ensemble W(X) = prod (x_i-x_j)^2 prod w(x_i) on real
// points, encoded as Phi_i = Psi_i = x^{i-1} sqrt(w).
BiorthogonalSpec ope_spec(const std::vector<double>& points,
                          const std::vector<double>& w, int n);

// k layers with one-step transition matrices between consecutive layers;
// weight = det[Phi(x^1)] det[T_1(x^1,x^2)] ... det[T_{k-1}] det[Psi(x^k)],
// N points per layer. Counting measure on every layer.
struct LayeredSpec {
  std::vector<GroundSet> layers;
  CMat phi;               // N x |X_1|
  CMat psi;               // N x |X_k|
  std::vector<CMat> t;    // k-1 transitions, |X_j| x |X_{j+1}|

  LayeredSpec() = default;
  LayeredSpec(std::vector<GroundSet> layer_sets, CMat phi_rows, CMat psi_rows,
              std::vector<CMat> transitions);

  int n_layers() const { return static_cast<int>(layers.size()); }
  int n_particles() const { return static_cast<int>(phi.rows()); }
  // disjoint union, layer j labels prefixed "l<j>:"
  GroundSet union_ground() const;
  // layer index and within-layer offset per union index
  void locate(int union_index, int* layer, int* offset) const;
};

CMat layered_gram(const LayeredSpec& spec);
KernelMatrix em_kernel(const LayeredSpec& spec);

// Factorized layered spec: per-layer orthonormal basis rows Xi^{(j)} of full
// dimension d (equal for all layers) and per-step constants c(l, i) linking
// Xi^{(l)}_i to Xi^{(l+1)}_i; T_l(x,y) = sum_i c(l,i) Xi^l_i(x) Xi^{l+1}_i(y).
struct NiceCaseSpec {
  std::vector<GroundSet> layers;
  std::vector<CMat> xi;  // per layer, d x d with row i a basis function
  CMat c;                // (k-1) x d step constants
  int n_particles = 0;

  LayeredSpec to_layered() const;
};

KernelMatrix nice_case_kernel(const NiceCaseSpec& spec);

// Finite DAG with complex edge weights.
struct WeightedDag {
  struct Edge {
    int from, to;
    cd w;
  };
  int n_vertices = 0;
  std::vector<Edge> edges;
};

// Vertices sorted so every edge goes forward; throws CycleDetected.
std::vector<int> topological_order(const WeightedDag& dag);

// T(u,v) = sum over directed paths of the product of edge weights; T(u,u)=1.
cd lgv_transfer(const WeightedDag& dag, int u, int v);

struct LgvReport {
  cd enumeration;  // weighted count of vertex-disjoint path families
  cd determinant;  // det[T(u_i, v_j)]
};

// Both sides of the nonintersecting-path determinant identity. Throws
// CompatibilityViolated if some nonidentity pairing of sources to sinks
// also admits a vertex-disjoint family.
LgvReport lgv_check(const WeightedDag& dag, const std::vector<int>& sources,
                    const std::vector<int>& sinks);

// Varying particle number: level n holds n points on each of c(n)+1 copies
// of the site space. Copies of level n are bridged by evolution steps, level
// n-1 copy 0 connects to level n copy c(n) through the two-point phi_n, and
// the extra n-th point of level n enters through phi_n(virt, .).
struct VaryingSpec {
  GroundSet site;                     // the common single-copy space
  std::vector<int> c;                 // c(1..N), size N
  CMat phi_virt;                      // N x |X|, row n-1 = phi_n(virt, .)
  std::vector<CMat> phi;              // phi[n-1] = two-point phi_n, n >= 2
  std::vector<std::vector<CMat>> ev;  // ev[n-1][a-1] = step a of level n
  CMat psi;                           // N x |X|, rows Psi_j on level N copy 0

  int n_levels() const { return static_cast<int>(c.size()); }
  void validate() const;

  // slices in union order: level 1 copy c(1) ... copy 0, level 2 ..., level N
  struct Slice {
    int level;  // 1-based
    int copy;   // c(level) down to 0
  };
  std::vector<Slice> slices() const;
  GroundSet union_ground() const;
};

KernelMatrix varying_kernel(const VaryingSpec& spec);

// Oracle materializations of the three weight families.
ExplicitProcess weights_from_spec(const BiorthogonalSpec& spec);
ExplicitProcess weights_from_spec(const LayeredSpec& spec);
ExplicitProcess weights_from_spec(const VaryingSpec& spec);

}  // namespace detpp
