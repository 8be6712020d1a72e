#include "oracles.hpp"

#include "toposim/graphs.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace toposim;

namespace {

bool has_edge(const PatternGraph& g, int u, int v) {
  const Edge e{std::min(u, v), std::max(u, v)};
  return std::binary_search(g.edges.begin(), g.edges.end(), e);
}

void check_hop_matrix(const PatternGraph& g) {
  const Eigen::MatrixXi fw = oracle::floyd_warshall(g.node_count, g.edges);
  CHECK(g.hop_dist == fw);
  CHECK(g.hop_dist.diagonal().isZero());
  CHECK(g.hop_dist == g.hop_dist.transpose());
}

// Dimension of the GF(2) cycle space minus the rank of the given cycles.
int cycle_quotient_dim(const PatternGraph& g, const std::vector<std::vector<int>>& cycles) {
  const int cycle_rank = static_cast<int>(g.edges.size()) - g.node_count + 1;
  std::vector<std::vector<char>> rows;
  for (const auto& c : cycles) {
    std::vector<char> row(g.edges.size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int u = c[i], v = c[(i + 1) % c.size()];
      const Edge e{std::min(u, v), std::max(u, v)};
      const auto it = std::lower_bound(g.edges.begin(), g.edges.end(), e);
      REQUIRE(it != g.edges.end());
      REQUIRE(*it == e);
      row[it - g.edges.begin()] ^= 1;
    }
    rows.push_back(row);
  }
  return cycle_rank - oracle::gf2_rank(rows);
}

// All 4-cycles a-b-c-d with both ladder rails and two rungs.
std::vector<std::vector<int>> squares(const PatternGraph& g) {
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> seen;
  const int n = g.node_count;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (a == c || b == d || a == b || a == d || b == c || c == d) continue;
          if (!(has_edge(g, a, b) && has_edge(g, b, c) && has_edge(g, c, d) && has_edge(g, d, a)))
            continue;
          if (has_edge(g, a, c) || has_edge(g, b, d)) continue;
          std::vector<int> key{a, b, c, d};
          std::sort(key.begin(), key.end());
          if (seen.insert(key).second) out.push_back({a, b, c, d});
        }
  return out;
}

int triangle_count(const PatternGraph& g) {
  int t = 0;
  for (int a = 0; a < g.node_count; ++a)
    for (int b = a + 1; b < g.node_count; ++b)
      for (int c = b + 1; c < g.node_count; ++c)
        t += has_edge(g, a, b) && has_edge(g, b, c) && has_edge(g, a, c);
  return t;
}

}  // namespace

TEST_CASE("circular ladder sizes and degrees") {
  for (int n : {3, 4, 7, 15}) {
    const PatternGraph g = circular_ladder(n);
    CHECK(g.node_count == 2 * n);
    CHECK(g.edges.size() == static_cast<std::size_t>(3 * n));
    for (int v = 0; v < g.node_count; ++v) CHECK(g.degree(v) == 3);
    check_hop_matrix(g);
  }
  CHECK_THROWS_AS(circular_ladder(2), std::domain_error);
}

TEST_CASE("circular ladder hop distances") {
  CHECK(circular_ladder(4).hop_dist(0, 2) == 2);
  const PatternGraph g = circular_ladder(15);
  CHECK(g.diameter() == 8);
  CHECK(oracle::floyd_warshall(30, g.edges).maxCoeff() == 8);
}

TEST_CASE("double circular ladder") {
  const PatternGraph g = double_circular_ladder(8, 8);
  CHECK(g.node_count == 30);
  check_hop_matrix(g);
  CHECK_THROWS_AS(double_circular_ladder(2, 8), std::domain_error);
  CHECK_THROWS_AS(double_circular_ladder(8, 2), std::domain_error);

  SUBCASE("two independent long cycles beyond the rung squares") {
    for (auto [a, b] : {std::pair{3, 3}, std::pair{8, 8}, std::pair{5, 9}}) {
      const PatternGraph d = double_circular_ladder(a, b);
      CHECK(cycle_quotient_dim(d, squares(d)) == 2);
    }
    const PatternGraph single = circular_ladder(6);
    CHECK(cycle_quotient_dim(single, squares(single)) == 1);
  }

  SUBCASE("lobe swap is an automorphism preserving hop distance") {
    const int a = 6;
    const PatternGraph d = double_circular_ladder(a, a);
    std::vector<int> perm(d.node_count);
    for (int i = 0; i < a; ++i) {
      const int ob = i == 0 ? 0 : 2 * a + (i - 1);
      const int ib = i == 0 ? a : 2 * a + (a - 1) + (i - 1);
      perm[i] = ob;
      perm[ob] = i;
      perm[a + i] = ib;
      perm[ib] = a + i;
    }
    for (auto [u, v] : d.edges) CHECK(has_edge(d, perm[u], perm[v]));
    for (int u = 0; u < d.node_count; ++u)
      for (int v = 0; v < d.node_count; ++v)
        CHECK(d.hop_dist(perm[u], perm[v]) == d.hop_dist(u, v));
  }
}

TEST_CASE("torus grid") {
  const PatternGraph g = quotient_grid(9, 17, Surface::torus);
  CHECK(g.node_count == 153);
  for (int v = 0; v < g.node_count; ++v) CHECK(g.degree(v) == 4);
  for (auto [u, v] : g.edges) CHECK(g.hop_dist(u, v) == 1);
  CHECK(g.hop_dist(0, 8 * 17) == 1);  // top row glued to bottom row
  CHECK(g.hop_dist(0, 16) == 1);      // left column glued to right
}

TEST_CASE("cylinder grid") {
  const PatternGraph g = quotient_grid(3, 3, Surface::cylinder);
  CHECK(g.node_count == 9);
  CHECK(g.edges.size() == 15);
  CHECK(has_edge(g, 0, 2));
  CHECK_FALSE(has_edge(g, 0, 6));
  CHECK(g.hop_dist(0, 6) == 2);
  check_hop_matrix(g);
  CHECK_THROWS_AS(quotient_grid(2, 5, Surface::torus), std::domain_error);
}

TEST_CASE("sphere grid has Euler characteristic 2") {
  const PatternGraph g = quotient_grid(5, 8, Surface::sphere);
  CHECK(g.node_count == 26);
  CHECK(g.degree(0) == 8);
  CHECK(g.degree(25) == 8);
  check_hop_matrix(g);
  const int v = g.node_count, e = static_cast<int>(g.edges.size());
  const int f = triangle_count(g) + static_cast<int>(squares(g).size());
  CHECK(v - e + f == 2);
}

TEST_CASE("mixing weights") {
  const PatternGraph g = circular_ladder(15);
  const MixingWeights w = mixing_weights(g, 2);
  const Eigen::MatrixXi fw = oracle::floyd_warshall(30, g.edges);
  CHECK(w.matrix == w.matrix.transpose());
  CHECK(w.matrix.diagonal().isOnes());
  for (int p = 0; p < 30; ++p)
    for (int q = 0; q < 30; ++q) {
      const int d = fw(p, q);
      CHECK(w.matrix(p, q) == (d <= 2 ? 1.0 / (1.0 + d) : 0.0));
    }
  // d = 1 -> 1/2, d = 2 -> 1/3, d = 3 -> 0 under K = 2
  CHECK(w.matrix(1, 2) == 0.5);
  CHECK(w.matrix(1, 3) == 1.0 / 3.0);
  CHECK(w.matrix(1, 4) == 0.0);
  CHECK(w.warnings.empty());

  const MixingWeights dense = mixing_weights(g, g.diameter());
  CHECK((dense.matrix.array() > 0).all());
  CHECK(mixing_weights(g, 0).matrix == Eigen::MatrixXd::Identity(30, 30));
  CHECK_THROWS(mixing_weights(g, -1));
}

TEST_CASE("mixing weights commute with graph automorphisms") {
  const int n = 9;
  const PatternGraph g = circular_ladder(n);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(2 * n);
  for (int i = 0; i < n; ++i) {
    perm.indices()[i] = (i + 1) % n;
    perm.indices()[n + i] = n + (i + 1) % n;
  }
  const Eigen::MatrixXd w = mixing_weights(g, 2).matrix;
  CHECK(perm * w * perm.transpose() == w);
}

TEST_CASE("detectability warnings") {
  CHECK(detectability_warnings(circular_ladder(6), 2).size() == 1);
  CHECK(detectability_warnings(circular_ladder(8), 2).empty());
  CHECK(detectability_warnings(circular_ladder(8), 3).size() == 1);
  CHECK(mixing_weights(circular_ladder(5), 2).warnings.size() == 1);
  CHECK(cycle_diameter({0, 1, 2, 3, 4, 5, 6}) == 3);
}

TEST_CASE("edge list round trip and errors") {
  const PatternGraph g = double_circular_ladder(4, 5);
  std::stringstream ss;
  write_edge_list(ss, g);
  const PatternGraph back = read_edge_list(ss);
  CHECK(back.node_count == g.node_count);
  CHECK(back.edges == g.edges);
  CHECK(back.hop_dist == g.hop_dist);

  std::istringstream bad("# nodes 3\n0 1\n1 x\n");
  try {
    read_edge_list(bad);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream split("# nodes 4\n0 1\n2 3\n");
  CHECK_THROWS_AS(read_edge_list(split), std::runtime_error);
  CHECK_THROWS(custom_graph(3, {{0, 0}, {1, 2}}));
}

TEST_CASE("build_pattern dispatches on the pattern kind") {
  CHECK(build_pattern({.kind = GraphKind::circular_ladder, .rungs = 5}).node_count == 10);
  CHECK(build_pattern({.kind = GraphKind::double_circular_ladder, .rungs = 8, .rungs_b = 8})
            .node_count == 30);
  CHECK(build_pattern({.kind = GraphKind::quotient_grid, .rows = 5, .cols = 8,
                       .surface = Surface::sphere})
            .node_count == 26);
  CHECK(parse_graph_kind(to_string(GraphKind::double_circular_ladder)) ==
        GraphKind::double_circular_ladder);
  CHECK(parse_surface("cylinder") == Surface::cylinder);
}
