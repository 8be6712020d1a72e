#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace toposim {

/// Binomial coefficients C(n, k) for n <= max_n, k <= max_k.
class BinomialTable {
 public:
  BinomialTable() = default;
  BinomialTable(int max_n, int max_k);
  std::uint64_t operator()(int n, int k) const {
    return (k < 0 || n < k) ? 0 : table_[static_cast<std::size_t>(n) * (max_k_ + 1) + k];
  }

 private:
  int max_k_ = 0;
  std::vector<std::uint64_t> table_;
};

struct Simplex {
  std::vector<int> vertices;  // ascending
  double value = 0.0;
};

/// Vietoris-Rips filtration up to dimension max_dim + 1.
///
/// Simplices are stored per dimension as packed 64-bit keys: the high word
/// is the rank of the filtration value among the distinct edge lengths and
/// the low word is the lexicographic rank of the vertex tuple among all
/// subsets of that size. Sorting the keys yields the (value, lexicographic)
/// order within a dimension; across dimensions ties on value go to the lower
/// dimension.
///
/// With materialize_top = false the (max_dim + 1)-simplices are left
/// implicit; the coboundary reduction generates them on the fly.
class FilteredComplex {
 public:
  FilteredComplex() = default;
  FilteredComplex(Eigen::MatrixXd distance, int max_dim, double threshold,
                  bool materialize_top = true);

  int vertex_count() const { return n_; }
  int max_dim() const { return max_dim_; }
  int top_dim() const { return max_dim_ + 1; }
  double threshold() const { return threshold_; }
  bool has_top() const { return static_cast<int>(keys_.size()) > top_dim(); }

  std::size_t size(int dim) const { return keys_.at(dim).size(); }
  std::size_t total_size() const;
  double value(int dim, std::size_t pos) const { return levels_[keys_[dim][pos] >> 32]; }
  std::uint32_t level(int dim, std::size_t pos) const {
    return static_cast<std::uint32_t>(keys_[dim][pos] >> 32);
  }
  std::uint64_t lex_rank(int dim, std::size_t pos) const { return keys_[dim][pos] & 0xffffffffULL; }
  std::vector<int> vertices(int dim, std::size_t pos) const;

  /// Every simplex in global filtration order (value, dimension, lexicographic).
  std::vector<Simplex> simplices() const;

  // Combinatorial indexing helpers shared with the reduction engine.
  std::uint64_t rank_of(const int* vertices, int count) const;
  void unrank(std::uint64_t rank, int count, int* vertices) const;
  std::uint64_t subsets(int count) const { return binom_(n_, count); }
  std::uint64_t key(int dim, std::size_t pos) const { return keys_[dim][pos]; }
  std::uint32_t edge_level(int a, int b) const {
    return edge_level_[static_cast<std::size_t>(a) * n_ + b];
  }
  double level_value(std::uint32_t level) const { return levels_[level]; }
  const Eigen::MatrixXd& distance() const { return dist_; }

 private:
  int n_ = 0;
  int max_dim_ = 0;
  double threshold_ = 1.0;
  Eigen::MatrixXd dist_;
  std::vector<double> levels_;
  std::vector<std::uint32_t> edge_level_;  // n*n, UINT32_MAX above threshold
  std::vector<std::vector<std::uint64_t>> keys_;
  BinomialTable binom_;

  void enumerate(int dim);
};

/// Validates the matrix (square, symmetric, zero diagonal, nonnegative)
/// and builds the filtration with all simplices of diameter <= threshold.
template <typename Derived>
FilteredComplex rips_complex(const Eigen::MatrixBase<Derived>& distance, int max_dim,
                             double threshold = 1.0) {
  return FilteredComplex(Eigen::MatrixXd(distance), max_dim, threshold);
}

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = 0.0;
  bool essential = false;

  double persistence() const { return death - birth; }
  bool operator==(const PersistencePair&) const = default;
};

struct PersistenceDiagram {
  std::vector<PersistencePair> features;  // sorted by (dim, birth, death, essential)
  double death_cap = 1.0;
  int max_dim = 0;

  std::vector<PersistencePair> dimension(int k) const;
  /// Lifetimes of dimension-k features, largest first.
  std::vector<double> persistences(int k) const;
  std::size_t count(int k) const;
};

enum class ReductionAlgorithm {
  /// Anti-transposed boundary matrix (coboundary columns), lowest dimension
  /// first, clearing negative simplices, implicit columns. Default.
  coboundary,
  /// Boundary columns, highest dimension first with clearing. Needs the
  /// top dimension materialized; practical only for small complexes.
  boundary_twist,
};

struct PersistenceOptions {
  ReductionAlgorithm algorithm = ReductionAlgorithm::coboundary;
};

/// Persistence pairs over GF(2). Both algorithms produce identical
/// diagrams. Zero-persistence pairs are dropped; classes alive at the end of
/// the filtration are flagged essential with death = threshold.
PersistenceDiagram persistence(const FilteredComplex& complex, PersistenceOptions options = {});

/// Filtration plus coboundary reduction without materializing the
/// (max_dim + 1)-simplices.
template <typename Derived>
PersistenceDiagram persistence_diagram(const Eigen::MatrixBase<Derived>& distance, int max_dim,
                                       double threshold = 1.0) {
  return persistence(FilteredComplex(Eigen::MatrixXd(distance), max_dim, threshold, false));
}

struct TotalPersistence {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  double operator[](int k) const { return k == 0 ? p0 : (k == 1 ? p1 : p2); }
  double& operator[](int k) { return k == 0 ? p0 : (k == 1 ? p1 : p2); }
  bool operator==(const TotalPersistence&) const = default;
};

TotalPersistence total_persistence(const PersistenceDiagram& diagram);

/// True when the m-th largest lifetime exceeds ratio times the (m+1)-th
/// (missing entries count as 0). gap_test(l, 1, 2) is the "one dominant
/// feature" check.
bool gap_test(std::vector<double> lifetimes, int m, double ratio);

}  // namespace toposim
