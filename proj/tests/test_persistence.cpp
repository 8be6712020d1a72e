#include "oracles.hpp"

#include "toposim/graphs.hpp"
#include "toposim/persistence.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace toposim;

namespace {

std::vector<PersistencePair> both_engines_agree(const Eigen::MatrixXd& d, int max_dim,
                                                double threshold) {
  const PersistenceDiagram co = persistence_diagram(d, max_dim, threshold);
  const PersistenceDiagram tw =
      persistence(FilteredComplex(d, max_dim, threshold, true),
                  {.algorithm = ReductionAlgorithm::boundary_twist});
  CHECK(co.features == tw.features);
  return co.features;
}

Eigen::MatrixXd hop_metric(const PatternGraph& g) { return g.hop_dist.cast<double>(); }

}  // namespace

TEST_CASE("two points merge at their distance") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 0.5, 0.5, 0;
  const auto f = both_engines_agree(d, 1, 1.0);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == PersistencePair{0, 0.0, 0.5, false});
  CHECK(f[1] == PersistencePair{0, 0.0, 1.0, true});
}

TEST_CASE("a triangle has no one-dimensional class") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 0.2, 0.4, 0.2, 0, 0.3, 0.4, 0.3, 0;
  const FilteredComplex c = rips_complex(d, 1);
  REQUIRE(c.size(2) == 1);
  CHECK(c.value(2, 0) == 0.4);
  const auto f = both_engines_agree(d, 1, 1.0);
  CHECK(std::none_of(f.begin(), f.end(), [](const auto& p) { return p.dim == 1; }));
  CHECK(f.size() == 3);
}

TEST_CASE("unit square: one loop from 1 to sqrt 2") {
  Eigen::MatrixXd d(4, 4);
  const double r = std::sqrt(2.0);
  d << 0, 1, r, 1, 1, 0, 1, r, r, 1, 0, 1, 1, r, 1, 0;
  const auto f = both_engines_agree(d, 1, 2.0);
  const auto h1 = std::count_if(f.begin(), f.end(), [](const auto& p) { return p.dim == 1; });
  CHECK(h1 == 1);
  CHECK(f.back() == PersistencePair{1, 1.0, r, false});
}

TEST_CASE("hexagon: loop (1, 2) and void (2, 3)") {
  const PatternGraph g = custom_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
  const auto f = both_engines_agree(hop_metric(g), 2, 3.0);
  std::vector<PersistencePair> h1, h2;
  for (const auto& p : f) {
    if (p.dim == 1) h1.push_back(p);
    if (p.dim == 2) h2.push_back(p);
  }
  REQUIRE(h1.size() == 1);
  CHECK(h1[0] == PersistencePair{1, 1.0, 2.0, false});
  REQUIRE(h2.size() == 1);
  CHECK(h2[0] == PersistencePair{2, 2.0, 3.0, false});
}

TEST_CASE("both engines match the naive reduction on random metrics") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::MatrixXd d =
        trial % 2 ? oracle::random_graph_metric(7, rng) : oracle::random_euclidean(7, rng);
    for (int max_dim : {0, 1, 2}) {
      const double threshold = max_dim == 1 ? 0.8 : 1.0;
      const auto f = both_engines_agree(d, max_dim, threshold);
      CHECK(f == oracle::naive_persistence(d, max_dim, threshold));
    }
  }
}

TEST_CASE("H0 has one class per point and exactly one essential") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd d = oracle::random_euclidean(20, rng);
  const PersistenceDiagram pd = persistence_diagram(d, 1, 1.0);
  const auto h0 = pd.dimension(0);
  // no ties among random Euclidean distances, so no zero-length H0 pairs
  CHECK(h0.size() == 20);
  CHECK(std::count_if(h0.begin(), h0.end(), [](const auto& p) { return p.essential; }) == 1);
  for (const auto& p : h0) CHECK(p.birth == 0.0);
}

TEST_CASE("diagram is invariant under relabeling and follows monotone rescaling") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd d = oracle::random_euclidean(9, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(9);
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + 9, rng);
  const Eigen::MatrixXd pd = perm * d * perm.transpose();
  CHECK(persistence_diagram(d, 2).features == persistence_diagram(pd, 2).features);

  const Eigen::MatrixXd sq = d.array().square().matrix();
  const auto a = persistence_diagram(d, 1).features;
  const auto b = persistence_diagram(sq, 1).features;
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i].dim == a[i].dim);
    CHECK(b[i].birth == doctest::Approx(a[i].birth * a[i].birth));
    if (!a[i].essential) CHECK(b[i].death == doctest::Approx(a[i].death * a[i].death));
  }
}

TEST_CASE("small perturbations move the diagram little") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::MatrixXd d = oracle::random_euclidean(10, rng);
  Eigen::MatrixXd e = d;
  const double eps = 1e-4;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) e(i, j) = e(j, i) = d(i, j) + eps * u(rng);
  const TotalPersistence a = total_persistence(persistence_diagram(d, 1));
  const TotalPersistence b = total_persistence(persistence_diagram(e, 1));
  // each pair moves by at most eps per endpoint; at most 10 H0 and a few H1 pairs
  CHECK(std::abs(a.p0 - b.p0) <= 2 * eps * 10);
  CHECK(std::abs(a.p1 - b.p1) <= 2 * eps * 20);
}

TEST_CASE("filtration order respects faces") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd d = oracle::random_graph_metric(7, rng);
  const FilteredComplex c = rips_complex(d, 2);
  const std::vector<Simplex> all = c.simplices();
  std::map<std::vector<int>, std::size_t> pos;
  for (std::size_t i = 0; i < all.size(); ++i) pos[all[i].vertices] = i;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i > 0) CHECK(all[i - 1].value <= all[i].value);
    const auto& v = all[i].vertices;
    if (v.size() < 2) continue;
    for (std::size_t drop = 0; drop < v.size(); ++drop) {
      auto face = v;
      face.erase(face.begin() + static_cast<long>(drop));
      REQUIRE(pos.count(face));
      CHECK(pos[face] < i);
    }
  }
  CHECK(c.total_size() == all.size());
}

TEST_CASE("total persistence and the gap test") {
  PersistenceDiagram pd;
  pd.features = {{0, 0, 0.3, false}, {0, 0, 1.0, true}, {1, 0.2, 0.7, false},
                 {1, 0.4, 0.5, false}, {2, 0.6, 0.65, false}};
  const TotalPersistence t = total_persistence(pd);
  CHECK(t.p0 == doctest::Approx(1.3));
  CHECK(t.p1 == doctest::Approx(0.6));
  CHECK(t.p2 == doctest::Approx(0.05));
  const auto l1 = pd.persistences(1);
  REQUIRE(l1.size() == 2);
  CHECK(l1[0] == doctest::Approx(0.5));
  CHECK(l1[1] == doctest::Approx(0.1));

  CHECK(gap_test({0.5, 0.1}, 1, 2.0));
  CHECK_FALSE(gap_test({0.5, 0.3}, 1, 2.0));
  CHECK(gap_test({0.5}, 1, 2.0));
  CHECK_FALSE(gap_test({}, 1, 2.0));
  CHECK(gap_test({0.5, 0.45, 0.1}, 2, 2.0));
  CHECK_THROWS(gap_test({0.1}, 0, 2.0));
}

TEST_CASE("distance matrix validation") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 1) = d(1, 0) = 0.5;
  d(0, 2) = d(2, 0) = 0.5;
  d(1, 2) = d(2, 1) = 0.5;
  CHECK_NOTHROW(persistence_diagram(d, 1));
  Eigen::MatrixXd asym = d;
  asym(0, 1) = 0.4;
  CHECK_THROWS_AS(persistence_diagram(asym, 1), std::invalid_argument);
  Eigen::MatrixXd diag = d;
  diag(1, 1) = 0.1;
  CHECK_THROWS_AS(persistence_diagram(diag, 1), std::invalid_argument);
  Eigen::MatrixXd neg = d;
  neg(0, 2) = neg(2, 0) = -0.1;
  CHECK_THROWS_AS(persistence_diagram(neg, 1), std::invalid_argument);
  CHECK_THROWS_AS(persistence_diagram(Eigen::MatrixXd::Zero(2, 3), 1), std::invalid_argument);
  CHECK_THROWS_AS(persistence_diagram(d, 3), std::invalid_argument);
  CHECK_THROWS_AS(persistence_diagram(d, 1, 0.0), std::invalid_argument);
}

TEST_CASE("entries above the threshold are left out") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 0.2, 2.0, 0.2, 0, 3.0, 2.0, 3.0, 0;
  const PersistenceDiagram pd = persistence_diagram(d, 1, 1.0);
  // two components survive to the cap
  const auto h0 = pd.dimension(0);
  CHECK(std::count_if(h0.begin(), h0.end(), [](const auto& p) { return p.essential; }) == 2);
  CHECK(pd.death_cap == 1.0);
}

TEST_CASE("153-node torus metric runs in dimension 2") {
  const PatternGraph g = quotient_grid(9, 17, Surface::torus);
  const Eigen::MatrixXd d = hop_metric(g) / g.diameter();
  const PersistenceDiagram pd = persistence_diagram(d, 2, 1.0);
  CHECK(pd.count(0) >= 1);
  const auto h0 = pd.dimension(0);
  CHECK(std::count_if(h0.begin(), h0.end(), [](const auto& p) { return p.essential; }) == 1);
  CHECK(pd.max_dim == 2);
}
