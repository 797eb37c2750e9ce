#include "detpp/dimer.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <set>

#include "detpp/core.hpp"

namespace detpp {

void PlanarBipartiteGraph::validate() const {
  if (n_black < 1 || n_black != n_white)
    throw Error("ColorCountMismatch",
                "perfect matchings need |B| = |W| >= 1", 2);
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.b < 0 || e.b >= n_black || e.w < 0 || e.w >= n_white)
      throw Error("IndexOutOfRange", "edge endpoint outside vertex range", 2);
    if (!seen.insert({e.b, e.w}).second)
      throw Error("DuplicateLabel", "parallel edges are not supported here", 2);
  }

  // every edge must border exactly two face sides
  std::vector<int> sides(edges.size(), 0);
  int outer_count = 0;
  for (const Face& f : faces) {
    if (f.outer) ++outer_count;
    if (f.edge_ids.empty())
      throw Error("NotPlanarConsistent", "empty face", 2);
    if (!f.outer && f.edge_ids.size() % 2 != 0)
      throw Error("NotPlanarConsistent",
                  "bounded faces of a bipartite graph have even length", 2);
    for (int id : f.edge_ids) {
      if (id < 0 || id >= n_edges())
        throw Error("IndexOutOfRange", "face lists an unknown edge", 2);
      ++sides[id];
    }
  }
  if (outer_count != 1)
    throw Error("NotPlanarConsistent", "exactly one outer face required", 2);
  for (int s : sides)
    if (s != 2)
      throw Error("NotPlanarConsistent",
                  "every edge must border exactly two face sides", 2);

  // connectivity over black u white
  const int nv = n_black + n_white;
  std::vector<std::vector<int>> adj(nv);
  for (const Edge& e : edges) {
    adj[e.b].push_back(n_black + e.w);
    adj[n_black + e.w].push_back(e.b);
  }
  std::vector<char> visited(nv, 0);
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

GroundSet PlanarBipartiteGraph::edge_ground() const {
  std::vector<std::string> labels;
  for (const Edge& e : edges)
    labels.push_back("b" + std::to_string(e.b) + "-w" + std::to_string(e.w));
  return GroundSet(std::move(labels));
}

PlanarBipartiteGraph PlanarBipartiteGraph::grid(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw Error("DimensionMismatch", "grid needs at least two vertices", 2);
  PlanarBipartiteGraph g;
  // color by coordinate parity; black <-> even
  std::vector<int> color_index(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if ((r + c) % 2 == 0)
        color_index[v] = g.n_black++;
      else
        color_index[v] = g.n_white++;
    }
  auto add_edge = [&](int v1, int v2) {
    const int r1 = v1 / cols, c1 = v1 % cols;
    if ((r1 + c1) % 2 == 0)
      g.edges.push_back({color_index[v1], color_index[v2]});
    else
      g.edges.push_back({color_index[v2], color_index[v1]});
    return static_cast<int>(g.edges.size()) - 1;
  };
  // horizontal edges first, then vertical, row-major
  std::vector<int> hid(rows * cols, -1), vid(rows * cols, -1);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c)
      hid[r * cols + c] = add_edge(r * cols + c, r * cols + c + 1);
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c)
      vid[r * cols + c] = add_edge(r * cols + c, (r + 1) * cols + c);

  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) {
      Face f;
      f.edge_ids = {hid[r * cols + c], vid[r * cols + c + 1],
                    hid[(r + 1) * cols + c], vid[r * cols + c]};
      g.faces.push_back(std::move(f));
    }

  Face outer;
  outer.outer = true;
  if (rows == 1) {
    for (int c = 0; c + 1 < cols; ++c) outer.edge_ids.push_back(hid[c]);
    for (int c = cols - 2; c >= 0; --c) outer.edge_ids.push_back(hid[c]);
  } else if (cols == 1) {
    for (int r = 0; r + 1 < rows; ++r) outer.edge_ids.push_back(vid[r * cols]);
    for (int r = rows - 2; r >= 0; --r) outer.edge_ids.push_back(vid[r * cols]);
  } else {
    for (int c = 0; c + 1 < cols; ++c) outer.edge_ids.push_back(hid[c]);
    for (int r = 0; r + 1 < rows; ++r)
      outer.edge_ids.push_back(vid[r * cols + cols - 1]);
    for (int c = cols - 2; c >= 0; --c)
      outer.edge_ids.push_back(hid[(rows - 1) * cols + c]);
    for (int r = rows - 2; r >= 0; --r) outer.edge_ids.push_back(vid[r * cols]);
  }
  g.faces.push_back(std::move(outer));
  g.validate();
  return g;
}

PlanarBipartiteGraph PlanarBipartiteGraph::hexagon_strip(int cells) {
  if (cells < 1) throw Error("DimensionMismatch", "need at least one hexagon", 2);
  PlanarBipartiteGraph g;
  const int span = 2 * cells + 1;  // vertices along the top (and bottom) path
  // top vertex t_i: color by parity of i; bottom b_i: opposite parity
  std::vector<int> top(span), bottom(span);
  for (int i = 0; i < span; ++i) {
    if (i % 2 == 0) {
      top[i] = g.n_black++;
      bottom[i] = g.n_white++;
    } else {
      top[i] = g.n_white++;
      bottom[i] = g.n_black++;
    }
  }
  auto add = [&](bool black_first, int a, int b) {
    if (black_first)
      g.edges.push_back({a, b});
    else
      g.edges.push_back({b, a});
    return static_cast<int>(g.edges.size()) - 1;
  };
  std::vector<int> tid(span - 1), bid(span - 1), rid(cells + 1);
  for (int i = 0; i + 1 < span; ++i)
    tid[i] = add(i % 2 == 0, top[i], top[i + 1]);
  for (int i = 0; i + 1 < span; ++i)
    bid[i] = add(i % 2 == 1, bottom[i], bottom[i + 1]);
  for (int j = 0; j <= cells; ++j)
    rid[j] = add(2 * j % 2 == 0, top[2 * j], bottom[2 * j]);

  for (int j = 0; j < cells; ++j) {
    Face f;
    f.edge_ids = {tid[2 * j], tid[2 * j + 1], rid[j + 1],
                  bid[2 * j + 1], bid[2 * j], rid[j]};
    g.faces.push_back(std::move(f));
  }
  Face outer;
  outer.outer = true;
  for (int i = 0; i + 1 < span; ++i) outer.edge_ids.push_back(tid[i]);
  outer.edge_ids.push_back(rid[cells]);
  for (int i = span - 2; i >= 0; --i) outer.edge_ids.push_back(bid[i]);
  outer.edge_ids.push_back(rid[0]);
  g.faces.push_back(std::move(outer));
  g.validate();
  return g;
}

std::vector<int> kasteleyn_weighting(const PlanarBipartiteGraph& g) {
  g.validate();
  const int ne = g.n_edges();
  const int nv = g.n_black + g.n_white;

  // spanning tree gets +1
  std::vector<int> signs(ne, 0);
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge)
  for (int i = 0; i < ne; ++i) {
    adj[g.edges[i].b].push_back({g.n_black + g.edges[i].w, i});
    adj[g.n_black + g.edges[i].w].push_back({g.edges[i].b, i});
  }
  std::vector<char> visited(nv, 0);
  std::vector<int> queue{0};
  visited[0] = 1;
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (const auto& [u, e] : adj[v])
      if (!visited[u]) {
        visited[u] = 1;
        signs[e] = 1;
        queue.push_back(u);
      }
  }

  // peel bounded faces with a single open edge until all signs are fixed
  int open = 0;
  for (int s : signs)
    if (s == 0) ++open;
  std::vector<char> done(g.faces.size(), 0);
  while (open > 0) {
    bool progressed = false;
    for (size_t fi = 0; fi < g.faces.size(); ++fi) {
      const auto& f = g.faces[fi];
      if (f.outer || done[fi]) continue;
      int unassigned = -1, unassigned_count = 0, minus = 0;
      for (int id : f.edge_ids) {
        if (signs[id] == 0) {
          unassigned = id;
          ++unassigned_count;
        } else if (signs[id] == -1) {
          ++minus;
        }
      }
      if (unassigned_count != 1) {
        if (unassigned_count == 0) done[fi] = 1;
        continue;
      }
      const int want_odd = (f.edge_ids.size() % 4 == 0) ? 1 : 0;
      signs[unassigned] = ((minus % 2) == want_odd) ? 1 : -1;
      done[fi] = 1;
      --open;
      progressed = true;
    }
    if (!progressed)
      throw Error("NotPlanarConsistent",
                  "face data does not admit the peeling order; embedding "
                  "is inconsistent",
                  2);
  }
  if (!kasteleyn_valid(g, signs))
    throw Error("NotPlanarConsistent",
                "constructed signs fail the face-parity rule", 2);
  return signs;
}

bool kasteleyn_valid(const PlanarBipartiteGraph& g,
                     const std::vector<int>& signs) {
  if (signs.size() != g.edges.size()) return false;
  for (const auto& f : g.faces) {
    if (f.outer) continue;
    int minus = 0;
    for (int id : f.edge_ids)
      if (signs[id] == -1) ++minus;
    const int want_odd = (f.edge_ids.size() % 4 == 0) ? 1 : 0;
    if (minus % 2 != want_odd) return false;
  }
  return true;
}

RMat kasteleyn_matrix(const PlanarBipartiteGraph& g,
                      const std::vector<int>& signs) {
  if (signs.size() != g.edges.size())
    throw Error("DimensionMismatch", "one sign per edge", 2);
  RMat k = RMat::Zero(g.n_black, g.n_white);
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1)
      throw Error("InvalidDistribution", "signs must be +1 or -1", 2);
    k(g.edges[i].b, g.edges[i].w) = signs[i];
  }
  return k;
}

std::int64_t integer_determinant(const RMat& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw Error("DimensionMismatch", "square matrix required", 2);
  if (n > 32) throw Error("EnumerationTooLarge", "integer determinant limited to 32x32", 2);
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double e = m(i, j);
      if (std::abs(e - std::llround(e)) > 1e-9)
        throw Error("InvalidDistribution", "matrix entries must be integers", 2);
      a[i][j] = std::llround(e);
    }
  int sign = 1;
  __int128 prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row == -1) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  const __int128 det = a[n - 1][n - 1];
  return sign * static_cast<std::int64_t>(det);
}

std::int64_t count_dimer_covers(const PlanarBipartiteGraph& g) {
  const std::vector<int> signs = kasteleyn_weighting(g);
  const std::int64_t det = integer_determinant(kasteleyn_matrix(g, signs));
  return det < 0 ? -det : det;
}

KernelMatrix dimer_kernel(const PlanarBipartiteGraph& g,
                          const std::vector<int>& signs) {
  if (!kasteleyn_valid(g, signs))
    throw Error("NotPlanarConsistent", "signs fail the face-parity rule", 2);
  const RMat k = kasteleyn_matrix(g, signs);
  if (integer_determinant(k) == 0)
    throw Error("NoPerfectMatching", "Kasteleyn matrix is singular", 3);
  const RMat inv = k.fullPivLu().inverse();
  const int ne = g.n_edges();
  CMat kernel(ne, ne);
  for (int e1 = 0; e1 < ne; ++e1)
    for (int e2 = 0; e2 < ne; ++e2)
      kernel(e1, e2) =
          cd(signs[e1] * inv(g.edges[e1].w, g.edges[e2].b), 0.0);
  return {g.edge_ground(), std::move(kernel)};
}

ExplicitProcess enumerate_matchings(const PlanarBipartiteGraph& g,
                                    int max_edges) {
  g.validate();
  if (g.n_edges() > max_edges)
    throw Error("EnumerationTooLarge", "too many edges to enumerate", 2);
  std::vector<std::vector<std::pair<int, int>>> black_edges(g.n_black);
  for (int i = 0; i < g.n_edges(); ++i)
    black_edges[g.edges[i].b].push_back({g.edges[i].w, i});

  ExplicitProcess process(g.edge_ground());
  std::vector<char> white_used(g.n_white, 0);
  std::vector<int> picked;
  std::function<void(int)> match = [&](int b) {
    if (b == g.n_black) {
      process.add_weight(Configuration(picked), cd(1.0));
      return;
    }
    for (const auto& [w, e] : black_edges[b])
      if (!white_used[w]) {
        white_used[w] = 1;
        picked.push_back(e);
        match(b + 1);
        picked.pop_back();
        white_used[w] = 0;
      }
  };
  match(0);
  process.finalize();
  if (process.weights.empty())
    throw Error("NoPerfectMatching", "graph has no perfect matching", 3);
  return process;
}

}  // namespace detpp
