#include "toposim/graphs.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace toposim {

namespace {

std::vector<Edge> normalize_edges(std::vector<Edge> edges, int node_count) {
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count)
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") references a node outside [0, " +
                                  std::to_string(node_count) + ")");
    if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

PatternGraph finish(int node_count, std::vector<Edge> edges, GraphKind kind) {
  PatternGraph g;
  g.node_count = node_count;
  g.edges = normalize_edges(std::move(edges), node_count);
  g.kind = kind;
  g.hop_dist = hop_distances(node_count, g.edges);
  return g;
}

std::vector<int> iota_cycle(int first, int length) {
  std::vector<int> c(length);
  for (int i = 0; i < length; ++i) c[i] = first + i;
  return c;
}

}  // namespace

int PatternGraph::degree(int node) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [node](const Edge& e) {
    return e.first == node || e.second == node;
  }));
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::circular_ladder: return "circular_ladder";
    case GraphKind::double_circular_ladder: return "double_circular_ladder";
    case GraphKind::quotient_grid: return "quotient_grid";
    case GraphKind::custom: return "custom";
  }
  return "custom";
}

std::string to_string(Surface surface) {
  switch (surface) {
    case Surface::torus: return "torus";
    case Surface::sphere: return "sphere";
    case Surface::cylinder: return "cylinder";
  }
  return "torus";
}

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "circular_ladder" || name == "cl") return GraphKind::circular_ladder;
  if (name == "double_circular_ladder" || name == "dcl") return GraphKind::double_circular_ladder;
  if (name == "quotient_grid" || name == "grid") return GraphKind::quotient_grid;
  if (name == "custom") return GraphKind::custom;
  throw std::invalid_argument("unknown pattern kind '" + name + "'");
}

Surface parse_surface(const std::string& name) {
  if (name == "torus") return Surface::torus;
  if (name == "sphere") return Surface::sphere;
  if (name == "cylinder") return Surface::cylinder;
  throw std::invalid_argument("unknown surface '" + name + "'");
}

Eigen::MatrixXi hop_distances(int node_count, const std::vector<Edge>& edges) {
  if (node_count < 1) throw std::invalid_argument("hop_distances: empty graph");
  std::vector<std::vector<int>> adj(node_count);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  Eigen::MatrixXi dist = Eigen::MatrixXi::Constant(node_count, node_count, -1);
  std::vector<int> queue(node_count);
  for (int s = 0; s < node_count; ++s) {
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    dist(s, s) = 0;
    while (head < tail) {
      const int u = queue[head++];
      for (int v : adj[u]) {
        if (dist(s, v) < 0) {
          dist(s, v) = dist(s, u) + 1;
          queue[tail++] = v;
        }
      }
    }
    if (static_cast<int>(tail) != node_count)
      throw std::runtime_error("hop_distances: graph is disconnected (node " +
                               std::to_string(s) + " reaches " + std::to_string(tail) + " of " +
                               std::to_string(node_count) + " nodes)");
  }
  return dist;
}

PatternGraph circular_ladder(int n) {
  if (n < 3) throw std::domain_error("circular_ladder: need n >= 3 rungs");
  std::vector<Edge> e;
  e.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    e.emplace_back(i, j);
    e.emplace_back(n + i, n + j);
    e.emplace_back(i, n + i);
  }
  PatternGraph g = finish(2 * n, std::move(e), GraphKind::circular_ladder);
  g.main_cycles.push_back(iota_cycle(0, n));
  return g;
}

PatternGraph double_circular_ladder(int rungs_a, int rungs_b) {
  if (rungs_a < 3 || rungs_b < 3)
    throw std::domain_error("double_circular_ladder: each lobe needs >= 3 rungs");
  const int a = rungs_a, b = rungs_b;
  std::vector<Edge> e;
  for (int i = 0; i < a; ++i) {
    const int j = (i + 1) % a;
    e.emplace_back(i, j);
    e.emplace_back(a + i, a + j);
    e.emplace_back(i, a + i);
  }
  // Lobe B: outer ring c_i, inner ring d_i with c_0 == 0 and d_0 == a.
  auto outer_b = [&](int i) { return i == 0 ? 0 : 2 * a + (i - 1); };
  auto inner_b = [&](int i) { return i == 0 ? a : 2 * a + (b - 1) + (i - 1); };
  for (int i = 0; i < b; ++i) {
    const int j = (i + 1) % b;
    e.emplace_back(outer_b(i), outer_b(j));
    e.emplace_back(inner_b(i), inner_b(j));
    if (i != 0) e.emplace_back(outer_b(i), inner_b(i));
  }
  PatternGraph g = finish(2 * a + 2 * (b - 1), std::move(e), GraphKind::double_circular_ladder);
  g.main_cycles.push_back(iota_cycle(0, a));
  std::vector<int> ring_b(b);
  for (int i = 0; i < b; ++i) ring_b[i] = outer_b(i);
  g.main_cycles.push_back(std::move(ring_b));
  return g;
}

PatternGraph quotient_grid(int rows, int cols, Surface surface) {
  if (rows < 3 || cols < 3) throw std::domain_error("quotient_grid: need rows, cols >= 3");
  std::vector<Edge> e;
  PatternGraph g;
  if (surface == Surface::sphere) {
    const int rings = rows - 2;
    const int south = 1 + rings * cols;
    auto node = [&](int r, int c) { return 1 + r * cols + c; };  // r in [0, rings)
    for (int r = 0; r < rings; ++r) {
      for (int c = 0; c < cols; ++c) {
        e.emplace_back(node(r, c), node(r, (c + 1) % cols));
        if (r + 1 < rings) e.emplace_back(node(r, c), node(r + 1, c));
      }
    }
    for (int c = 0; c < cols; ++c) {
      e.emplace_back(0, node(0, c));
      e.emplace_back(node(rings - 1, c), south);
    }
    g = finish(south + 1, std::move(e), GraphKind::quotient_grid);
    std::vector<int> equator(cols);
    for (int c = 0; c < cols; ++c) equator[c] = node(rings / 2, c);
    std::vector<int> meridian{0};
    for (int r = 0; r < rings; ++r) meridian.push_back(node(r, 0));
    meridian.push_back(south);
    for (int r = rings - 1; r >= 0; --r) meridian.push_back(node(r, cols / 2));
    g.main_cycles = {std::move(equator), std::move(meridian)};
  } else {
    auto node = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        e.emplace_back(node(r, c), node(r, (c + 1) % cols));
        if (r + 1 < rows)
          e.emplace_back(node(r, c), node(r + 1, c));
        else if (surface == Surface::torus)
          e.emplace_back(node(r, c), node(0, c));
      }
    }
    g = finish(rows * cols, std::move(e), GraphKind::quotient_grid);
    g.main_cycles.push_back(iota_cycle(0, cols));
    if (surface == Surface::torus) {
      std::vector<int> column(rows);
      for (int r = 0; r < rows; ++r) column[r] = node(r, 0);
      g.main_cycles.push_back(std::move(column));
    }
  }
  g.surface = surface;
  return g;
}

PatternGraph custom_graph(int node_count, std::vector<Edge> edges) {
  if (node_count < 1) throw std::invalid_argument("custom_graph: need at least one node");
  return finish(node_count, std::move(edges), GraphKind::custom);
}

int cycle_diameter(const std::vector<int>& cycle) { return static_cast<int>(cycle.size()) / 2; }

std::vector<std::string> detectability_warnings(const PatternGraph& g, int cutoff) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < g.main_cycles.size(); ++i) {
    const int diam = cycle_diameter(g.main_cycles[i]);
    if (diam < 2 * cutoff) {
      out.push_back("main cycle " + std::to_string(i) + " (length " +
                    std::to_string(g.main_cycles[i].size()) + ") has hop diameter " +
                    std::to_string(diam) + " < 2K = " + std::to_string(2 * cutoff) +
                    "; the feature may not be detectable");
    }
  }
  return out;
}

MixingWeights mixing_weights(const PatternGraph& g, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("mixing_weights: cutoff must be >= 0");
  MixingWeights w;
  w.cutoff = cutoff;
  w.matrix = g.hop_dist.unaryExpr([cutoff](int d) {
    return d <= cutoff ? 1.0 / (1.0 + static_cast<double>(d)) : 0.0;
  });
  w.warnings = detectability_warnings(g, cutoff);
  return w;
}

void write_edge_list(std::ostream& os, const PatternGraph& g) {
  os << "# " << to_string(g.kind);
  if (g.surface) os << ' ' << to_string(*g.surface);
  os << "\n# nodes " << g.node_count << " edges " << g.edges.size() << '\n';
  for (auto [u, v] : g.edges) os << u << ' ' << v << '\n';
}

PatternGraph read_edge_list(std::istream& is) {
  std::vector<Edge> edges;
  int max_node = -1;
  int declared_nodes = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string word;
      while (hs >> word)
        if (word == "nodes") hs >> declared_nodes;
      continue;
    }
    std::istringstream ls(line);
    long u = -1, v = -1;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest))
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": expected two node ids");
    if (u < 0 || v < 0 || u > std::numeric_limits<int>::max() ||
        v > std::numeric_limits<int>::max())
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": node ids must be non-negative");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_node = std::max({max_node, static_cast<int>(u), static_cast<int>(v)});
  }
  if (edges.empty()) throw std::runtime_error("edge list contains no edges");
  const int n = std::max(max_node + 1, declared_nodes);
  return custom_graph(n, std::move(edges));
}

PatternGraph build_pattern(const PatternSpec& spec) {
  switch (spec.kind) {
    case GraphKind::circular_ladder: return circular_ladder(spec.rungs);
    case GraphKind::double_circular_ladder: return double_circular_ladder(spec.rungs, spec.rungs_b);
    case GraphKind::quotient_grid: return quotient_grid(spec.rows, spec.cols, spec.surface);
    case GraphKind::custom: {
      std::ifstream in(spec.edge_file);
      if (!in) throw std::runtime_error("cannot open edge list '" + spec.edge_file + "'");
      return read_edge_list(in);
    }
  }
  throw std::invalid_argument("build_pattern: unknown kind");
}

}  // namespace toposim
