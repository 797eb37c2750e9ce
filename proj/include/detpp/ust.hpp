#pragma once

#include <cstdint>

#include "detpp/types.hpp"

namespace detpp {

// Connected graph with a fixed edge orientation. Parallel edges are distinct
// ground-set points; self-loops are rejected.
struct OrientedGraph {
  struct Edge {
    int tail, head;
  };
  int n_vertices = 0;
  std::vector<Edge> edges;

  int n_edges() const { return static_cast<int>(edges.size()); }
  void validate() const;
  GroundSet edge_ground() const;  // labels "e<i>:<tail>-><head>"

  static OrientedGraph complete(int n);
  static OrientedGraph grid(int rows, int cols);
  static OrientedGraph path(int n);
  static OrientedGraph multi_edge_pair(int copies);
};

// Signed incidence matrix: column per vertex, +1 at the tail row, -1 at the
// head row of each edge.
RMat incidence(const OrientedGraph& g);

// Orthogonal projection onto the column span of the incidence matrix,
// computed by grounding one vertex and inverting the reduced Laplacian.
KernelMatrix transfer_current(const OrientedGraph& g);

// Matrix-tree count: any cofactor of the Laplacian.
std::int64_t count_spanning_trees(const OrientedGraph& g);

// Uniform measure on spanning trees (oracle substrate).
ExplicitProcess enumerate_spanning_trees(const OrientedGraph& g,
                                         int max_vertices = 10);

// Unit current injected at the tail of e and extracted at its head; returns
// the current through f. Equals transfer_current(g)(e, f).
double random_walk_current(const OrientedGraph& g, int e, int f);

}  // namespace detpp
