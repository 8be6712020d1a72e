#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace toposim {

enum class GraphKind { circular_ladder, double_circular_ladder, quotient_grid, custom };
enum class Surface { torus, sphere, cylinder };

using Edge = std::pair<int, int>;

/// Undirected, connected dependence graph with its all-pairs hop distances.
/// main_cycles lists the node sequences of the cycles the pattern is meant
/// to carry; they drive the detectability check.
struct PatternGraph {
  int node_count = 0;
  std::vector<Edge> edges;  // u < v, sorted, unique
  GraphKind kind = GraphKind::custom;
  std::optional<Surface> surface;
  Eigen::MatrixXi hop_dist;
  std::vector<std::vector<int>> main_cycles;

  int degree(int node) const;
  int diameter() const { return hop_dist.size() ? hop_dist.maxCoeff() : 0; }
};

std::string to_string(GraphKind kind);
std::string to_string(Surface surface);
GraphKind parse_graph_kind(const std::string& name);
Surface parse_surface(const std::string& name);

/// CL_n: outer ring 0..n-1, inner ring n..2n-1, rungs i -- n+i.
PatternGraph circular_ladder(int n);

/// Two circular ladders sharing one rung. Lobe A uses nodes 0..2a-1 as in
/// circular_ladder(a); lobe B reuses nodes 0 and a as its rung 0.
PatternGraph double_circular_ladder(int rungs_a, int rungs_b);

/// Rectangular grid with edge identifications. Torus and cylinder number
/// nodes r*cols + c. The sphere collapses row 0 into node 0 and row
/// rows-1 into the last node; interior rows are rings of cols nodes.
PatternGraph quotient_grid(int rows, int cols, Surface surface);

/// Arbitrary connected graph from an explicit edge list.
PatternGraph custom_graph(int node_count, std::vector<Edge> edges);

/// BFS all-pairs hop counts; throws std::runtime_error if disconnected.
Eigen::MatrixXi hop_distances(int node_count, const std::vector<Edge>& edges);

struct MixingWeights {
  Eigen::MatrixXd matrix;
  int cutoff = 2;
  std::vector<std::string> warnings;
};

inline constexpr int kDefaultCutoff = 2;

/// W[p,q] = 1/(1 + d(p,q)) for d(p,q) <= cutoff, else 0. cutoff 0 yields
/// the identity. Detectability warnings for the graph are attached.
MixingWeights mixing_weights(const PatternGraph& g, int cutoff);

/// One message per main cycle whose hop diameter is below 2*cutoff.
std::vector<std::string> detectability_warnings(const PatternGraph& g, int cutoff);

/// Hop diameter of a cycle given as a node sequence (floor(len/2)).
int cycle_diameter(const std::vector<int>& cycle);

/// Edge-list text: one "u v" pair per line, zero-based ids, '#' comments.
void write_edge_list(std::ostream& os, const PatternGraph& g);
PatternGraph read_edge_list(std::istream& is);

/// Declarative description of a pattern, resolved by build_pattern.
struct PatternSpec {
  GraphKind kind = GraphKind::circular_ladder;
  int rungs = 15;
  int rungs_b = 8;  // second lobe of the double ladder
  int rows = 9;
  int cols = 17;
  Surface surface = Surface::torus;
  std::string edge_file;  // custom graphs

  bool operator==(const PatternSpec&) const = default;
};

PatternGraph build_pattern(const PatternSpec& spec);

}  // namespace toposim
