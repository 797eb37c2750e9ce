#pragma once

#include <cstdint>

#include "detpp/types.hpp"

namespace detpp {

// Planar bipartite graph with an explicit embedding: faces are given as
// cyclic edge-index sequences. Every edge borders exactly two faces counting
// multiplicity (a bridge borders the same face twice).
struct PlanarBipartiteGraph {
  struct Edge {
    int b, w;  // black and white endpoint indices
  };
  struct Face {
    std::vector<int> edge_ids;
    bool outer = false;
  };

  int n_black = 0, n_white = 0;
  std::vector<Edge> edges;
  std::vector<Face> faces;

  int n_edges() const { return static_cast<int>(edges.size()); }
  void validate() const;  // |B| = |W|, connectivity, face/edge consistency

  GroundSet edge_ground() const;  // labels "b<i>-w<j>"

  // m x n grid patch, vertices colored by coordinate parity.
  static PlanarBipartiteGraph grid(int rows, int cols);
  // row of `cells` hexagons sharing vertical edges (brick-wall strip).
  static PlanarBipartiteGraph hexagon_strip(int cells);
};

// Signs per edge satisfying the face-parity rule: bounded faces with
// 0 mod 4 edges carry an odd number of minus signs, 2 mod 4 an even number.
std::vector<int> kasteleyn_weighting(const PlanarBipartiteGraph& g);

bool kasteleyn_valid(const PlanarBipartiteGraph& g,
                     const std::vector<int>& signs);

// Signed adjacency matrix, rows black, columns white.
RMat kasteleyn_matrix(const PlanarBipartiteGraph& g,
                      const std::vector<int>& signs);

// |det K| evaluated exactly over the integers.
std::int64_t count_dimer_covers(const PlanarBipartiteGraph& g);

// Integer determinant by fraction-free elimination; exact for entry sizes
// that keep intermediates within 128 bits.
std::int64_t integer_determinant(const RMat& m);

// Correlation kernel of the uniform dimer process on the edge set:
// K(e,e') = sign(e) * Kasteleyn^{-1}(w(e), b(e')). The sign factor makes
// rho_1(e) = Pr{e covered}; without it the minors come out with the wrong
// sign on minus-weighted edges.
KernelMatrix dimer_kernel(const PlanarBipartiteGraph& g,
                          const std::vector<int>& signs);

// Uniform measure on perfect matchings (oracle substrate).
ExplicitProcess enumerate_matchings(const PlanarBipartiteGraph& g,
                                    int max_edges = kDefaultMaxEnum);

}  // namespace detpp
