#include "detpp/ust.hpp"

#include <Eigen/Dense>
#include <functional>
#include <numeric>

#include "detpp/dimer.hpp"  // integer_determinant

namespace detpp {

void OrientedGraph::validate() const {
  if (n_vertices < 2)
    throw Error("EmptyGroundSet", "need at least two vertices", 2);
  for (const Edge& e : edges) {
    if (e.tail < 0 || e.tail >= n_vertices || e.head < 0 ||
        e.head >= n_vertices)
      throw Error("IndexOutOfRange", "edge endpoint outside vertex range", 2);
    if (e.tail == e.head)
      throw Error("SelfLoop", "self-loops are not allowed", 2);
  }
  std::vector<std::vector<int>> adj(n_vertices);
  for (const Edge& e : edges) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::vector<char> visited(n_vertices, 0);
  std::vector<int> queue{0};
  visited[0] = 1;
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int u : adj[v])
      if (!visited[u]) {
        visited[u] = 1;
        queue.push_back(u);
      }
  }
  for (char v : visited)
    if (!v) throw Error("Disconnected", "graph must be connected", 2);
}

GroundSet OrientedGraph::edge_ground() const {
  std::vector<std::string> labels;
  for (int i = 0; i < n_edges(); ++i)
    labels.push_back("e" + std::to_string(i) + ":" +
                     std::to_string(edges[i].tail) + "->" +
                     std::to_string(edges[i].head));
  return GroundSet(std::move(labels));
}

OrientedGraph OrientedGraph::complete(int n) {
  OrientedGraph g;
  g.n_vertices = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  g.validate();
  return g;
}

OrientedGraph OrientedGraph::grid(int rows, int cols) {
  OrientedGraph g;
  g.n_vertices = rows * cols;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.edges.push_back({r * cols + c, r * cols + c + 1});
      if (r + 1 < rows) g.edges.push_back({r * cols + c, (r + 1) * cols + c});
    }
  g.validate();
  return g;
}

OrientedGraph OrientedGraph::path(int n) {
  OrientedGraph g;
  g.n_vertices = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  g.validate();
  return g;
}

OrientedGraph OrientedGraph::multi_edge_pair(int copies) {
  OrientedGraph g;
  g.n_vertices = 2;
  for (int i = 0; i < copies; ++i) g.edges.push_back({0, 1});
  g.validate();
  return g;
}

RMat incidence(const OrientedGraph& g) {
  RMat a = RMat::Zero(g.n_edges(), g.n_vertices);
  for (int i = 0; i < g.n_edges(); ++i) {
    a(i, g.edges[i].tail) = 1.0;
    a(i, g.edges[i].head) = -1.0;
  }
  return a;
}

namespace {

// Laplacian with the last vertex grounded.
RMat reduced_laplacian(const OrientedGraph& g) {
  const int n = g.n_vertices;
  RMat lap = RMat::Zero(n, n);
  for (const auto& e : g.edges) {
    lap(e.tail, e.tail) += 1.0;
    lap(e.head, e.head) += 1.0;
    lap(e.tail, e.head) -= 1.0;
    lap(e.head, e.tail) -= 1.0;
  }
  return lap.topLeftCorner(n - 1, n - 1);
}

}  // namespace

KernelMatrix transfer_current(const OrientedGraph& g) {
  g.validate();
  const RMat a = incidence(g);
  const int n = g.n_vertices;
  // grounding the last vertex: columns 0..n-2 already span the star space
  const RMat a_r = a.leftCols(n - 1);
  const RMat l_r = reduced_laplacian(g);
  const RMat k = a_r * l_r.ldlt().solve(a_r.transpose());
  return {g.edge_ground(), k.cast<cd>()};
}

std::int64_t count_spanning_trees(const OrientedGraph& g) {
  g.validate();
  return integer_determinant(reduced_laplacian(g));
}

ExplicitProcess enumerate_spanning_trees(const OrientedGraph& g,
                                         int max_vertices) {
  g.validate();
  if (g.n_vertices > max_vertices)
    throw Error("EnumerationTooLarge", "too many vertices to enumerate", 2);
  const int target = g.n_vertices - 1;
  ExplicitProcess process(g.edge_ground());

  // choose edge subsets of size |V|-1 and keep the acyclic connected ones
  std::vector<int> pick;
  std::function<bool(const std::vector<int>&)> spans =
      [&](const std::vector<int>& chosen) {
        std::vector<int> parent(g.n_vertices);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
          while (parent[x] != x) x = parent[x] = parent[parent[x]];
          return x;
        };
        for (int e : chosen) {
          const int a = find(g.edges[e].tail), b = find(g.edges[e].head);
          if (a == b) return false;  // cycle
          parent[a] = b;
        }
        return true;  // |V|-1 acyclic edges on a connected vertex set span
      };
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == target) {
      if (spans(pick)) process.add_weight(Configuration(pick), cd(1.0));
      return;
    }
    for (int e = start; e < g.n_edges(); ++e) {
      pick.push_back(e);
      rec(e + 1);
      pick.pop_back();
    }
  };
  rec(0);
  process.finalize();
  return process;
}

double random_walk_current(const OrientedGraph& g, int e, int f) {
  g.validate();
  if (e < 0 || e >= g.n_edges() || f < 0 || f >= g.n_edges())
    throw Error("IndexOutOfRange", "edge index outside range", 2);
  const int n = g.n_vertices;
  RVec rhs = RVec::Zero(n);
  rhs(g.edges[e].tail) += 1.0;
  rhs(g.edges[e].head) -= 1.0;

  const RMat l_r = reduced_laplacian(g);
  RVec potential = RVec::Zero(n);  // grounded at the last vertex
  potential.head(n - 1) = l_r.ldlt().solve(rhs.head(n - 1));
  return potential(g.edges[f].tail) - potential(g.edges[f].head);
}

}  // namespace detpp
