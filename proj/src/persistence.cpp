#include "toposim/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <limits>
#include <stdexcept>
#include <string>

namespace toposim {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

void validate_distance(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols())
    throw std::invalid_argument("rips_complex: distance matrix must be square");
  if (d.rows() < 1) throw std::invalid_argument("rips_complex: distance matrix is empty");
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (d(i, i) != 0.0)
      throw std::invalid_argument("rips_complex: nonzero diagonal at " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      const double a = d(i, j), b = d(j, i);
      if (!std::isfinite(a) || a < 0.0)
        throw std::invalid_argument("rips_complex: entry (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") is negative or not finite");
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
        throw std::invalid_argument("rips_complex: matrix is not symmetric at (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
}

// Sorted-vector symmetric difference: col ^= other.
void add_column(std::vector<std::uint32_t>& col, const std::vector<std::uint32_t>& other,
                std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                std::back_inserter(scratch));
  col.swap(scratch);
}

}  // namespace

BinomialTable::BinomialTable(int max_n, int max_k)
    : max_k_(max_k), table_(static_cast<std::size_t>(max_n + 1) * (max_k + 1), 0) {
  for (int n = 0; n <= max_n; ++n) {
    auto row = table_.begin() + static_cast<std::ptrdiff_t>(n) * (max_k + 1);
    row[0] = 1;
    for (int k = 1; k <= std::min(n, max_k); ++k) {
      const auto prev = table_.begin() + static_cast<std::ptrdiff_t>(n - 1) * (max_k + 1);
      row[k] = prev[k - 1] + (k <= n - 1 ? prev[k] : 0);
    }
  }
}

FilteredComplex::FilteredComplex(Eigen::MatrixXd distance, int max_dim, double threshold,
                                 bool materialize_top)
    : n_(static_cast<int>(distance.rows())),
      max_dim_(max_dim),
      threshold_(threshold),
      dist_(std::move(distance)) {
  if (max_dim < 0 || max_dim > 2)
    throw std::invalid_argument("rips_complex: max_dim must be 0, 1 or 2");
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw std::invalid_argument("rips_complex: threshold must be positive and finite");
  validate_distance(dist_);
  binom_ = BinomialTable(n_, top_dim() + 1);
  if (binom_(n_, top_dim() + 1) > 0xffffffffULL)
    throw std::length_error("rips_complex: too many simplices for 32-bit indexing");

  levels_.push_back(0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (dist_(i, j) <= threshold_) levels_.push_back(dist_(i, j));
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());

  edge_level_.assign(static_cast<std::size_t>(n_) * n_, kNone);
  for (int i = 0; i < n_; ++i) {
    edge_level_[static_cast<std::size_t>(i) * n_ + i] = 0;
    for (int j = i + 1; j < n_; ++j) {
      if (dist_(i, j) > threshold_) continue;
      const auto lvl = static_cast<std::uint32_t>(
          std::lower_bound(levels_.begin(), levels_.end(), dist_(i, j)) - levels_.begin());
      edge_level_[static_cast<std::size_t>(i) * n_ + j] = lvl;
      edge_level_[static_cast<std::size_t>(j) * n_ + i] = lvl;
    }
  }

  const int last = materialize_top ? top_dim() : std::max(max_dim_, 1);
  keys_.resize(last + 1);
  for (int d = 0; d <= last; ++d) enumerate(d);
}

std::uint64_t FilteredComplex::rank_of(const int* v, int count) const {
  std::uint64_t colex = 0;
  for (int i = 0; i < count; ++i) colex += binom_(n_ - 1 - v[i], count - i);
  return binom_(n_, count) - 1 - colex;
}

void FilteredComplex::unrank(std::uint64_t rank, int count, int* v) const {
  std::uint64_t colex = binom_(n_, count) - 1 - rank;
  int hi = n_ - 1;  // candidate upper bound for the complemented vertex
  for (int i = 0; i < count; ++i) {
    const int k = count - i;
    // Largest w <= hi with C(w, k) <= colex.
    int lo = k - 1, top = hi;
    while (lo < top) {
      const int mid = (lo + top + 1) / 2;
      if (binom_(mid, k) <= colex)
        lo = mid;
      else
        top = mid - 1;
    }
    colex -= binom_(lo, k);
    v[i] = n_ - 1 - lo;
    hi = lo - 1;
  }
}

void FilteredComplex::enumerate(int dim) {
  auto& out = keys_[dim];
  const int count = dim + 1;
  if (dim == 0) {
    out.resize(n_);
    for (int v = 0; v < n_; ++v) out[v] = rank_of(&v, 1);
    std::sort(out.begin(), out.end());
    return;
  }
  // Depth-first over ascending vertex tuples; level and colex rank are
  // accumulated along the way and infeasible prefixes are pruned.
  std::vector<int> v(count);
  std::vector<std::uint32_t> lvl(count);
  std::vector<std::uint64_t> partial(count);
  const std::uint64_t total = binom_(n_, count);
  auto level_of = [&](int a, int b) { return edge_level_[static_cast<std::size_t>(a) * n_ + b]; };

  auto recurse = [&](auto&& self, int depth, int start) -> void {
    for (int x = start; x <= n_ - (count - depth); ++x) {
      std::uint32_t l = depth ? lvl[depth - 1] : 0;
      bool ok = true;
      for (int i = 0; i < depth; ++i) {
        const std::uint32_t e = level_of(v[i], x);
        if (e == kNone) {
          ok = false;
          break;
        }
        l = std::max(l, e);
      }
      if (!ok) continue;
      v[depth] = x;
      lvl[depth] = l;
      partial[depth] = (depth ? partial[depth - 1] : 0) + binom_(n_ - 1 - x, count - depth);
      if (depth + 1 == count) {
        out.push_back((static_cast<std::uint64_t>(l) << 32) | (total - 1 - partial[depth]));
      } else {
        self(self, depth + 1, x + 1);
      }
    }
  };
  recurse(recurse, 0, 0);
  std::sort(out.begin(), out.end());
}

std::size_t FilteredComplex::total_size() const {
  std::size_t s = 0;
  for (const auto& k : keys_) s += k.size();
  return s;
}

std::vector<int> FilteredComplex::vertices(int dim, std::size_t pos) const {
  std::vector<int> v(dim + 1);
  unrank(lex_rank(dim, pos), dim + 1, v.data());
  return v;
}

std::vector<Simplex> FilteredComplex::simplices() const {
  struct Ref {
    std::uint32_t level;
    int dim;
    std::size_t pos;
  };
  std::vector<Ref> refs;
  refs.reserve(total_size());
  for (int d = 0; d < static_cast<int>(keys_.size()); ++d)
    for (std::size_t p = 0; p < keys_[d].size(); ++p) refs.push_back({level(d, p), d, p});
  std::stable_sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
    return a.level != b.level ? a.level < b.level : a.dim < b.dim;
  });
  std::vector<Simplex> out;
  out.reserve(refs.size());
  for (const auto& r : refs) out.push_back({vertices(r.dim, r.pos), value(r.dim, r.pos)});
  return out;
}

namespace {

void reduce_boundary_twist(const FilteredComplex& cx, PersistenceDiagram& pd) {
  if (!cx.has_top())
    throw std::invalid_argument(
        "persistence: boundary_twist needs the top dimension materialized");
  const int top = cx.top_dim();

  // cleared[d][j]: simplex j of dimension d is the pivot of a reduced
  // (d+1)-column, so its own column reduces to zero and it is not essential.
  std::vector<std::vector<char>> cleared(top + 1);
  for (int d = 0; d <= top; ++d) cleared[d].assign(cx.size(d), 0);

  std::vector<std::uint32_t> col, scratch;
  int verts[4];
  int facet[4];

  for (int d = top; d >= 1; --d) {
    const std::size_t rows = cx.size(d - 1);
    std::vector<std::uint32_t> position(cx.subsets(d), kNone);
    for (std::size_t r = 0; r < rows; ++r)
      position[cx.lex_rank(d - 1, r)] = static_cast<std::uint32_t>(r);

    std::vector<std::vector<std::uint32_t>> reduced(rows);
    std::vector<char> owned(rows, 0);
    const auto& skip = cleared[d];

    for (std::size_t j = 0; j < cx.size(d); ++j) {
      if (skip[j]) continue;
      cx.unrank(cx.lex_rank(d, j), d + 1, verts);
      col.clear();
      for (int omit = 0; omit <= d; ++omit) {
        int k = 0;
        for (int i = 0; i <= d; ++i)
          if (i != omit) facet[k++] = verts[i];
        col.push_back(position[cx.rank_of(facet, d)]);
      }
      std::sort(col.begin(), col.end());

      while (!col.empty() && owned[col.back()]) add_column(col, reduced[col.back()], scratch);

      if (col.empty()) {
        if (d <= cx.max_dim())
          pd.features.push_back({d, cx.value(d, j), pd.death_cap, true});
        continue;
      }
      const std::uint32_t pivot = col.back();
      owned[pivot] = 1;
      cleared[d - 1][pivot] = 1;
      const double birth = cx.value(d - 1, pivot);
      const double death = cx.value(d, j);
      if (death > birth) pd.features.push_back({d - 1, birth, death, false});
      reduced[pivot].assign(col.begin(), col.end());
    }
  }
  for (std::size_t v = 0; v < cx.size(0); ++v)
    if (!cleared[0][v]) pd.features.push_back({0, cx.value(0, v), pd.death_cap, true});
}

// Coboundary columns of k-simplices, processed from the end of the
// filtration backwards; the pivot of a column is its earliest cofacet.
// Reduced columns are kept as chains of k-simplices (the V matrix) and
// their coboundaries regenerated on demand.
class CoboundaryReducer {
 public:
  explicit CoboundaryReducer(const FilteredComplex& cx) : cx_(cx), n_(cx.vertex_count()) {}

  template <typename Fn>
  void for_each_cofacet(std::uint64_t key, int count, Fn&& fn) const {
    int v[4];
    cx_.unrank(key & 0xffffffffULL, count, v);
    const auto level = static_cast<std::uint32_t>(key >> 32);
    int w[4];
    int idx = 0;
    for (int x = 0; x < n_; ++x) {
      if (idx < count && v[idx] == x) {
        ++idx;
        continue;
      }
      std::uint32_t l = level;
      bool ok = true;
      for (int i = 0; i < count; ++i) {
        const std::uint32_t e = cx_.edge_level(x, v[i]);
        if (e == kNone) {
          ok = false;
          break;
        }
        l = std::max(l, e);
      }
      if (!ok) continue;
      for (int i = 0; i < idx; ++i) w[i] = v[i];
      w[idx] = x;
      for (int i = idx; i < count; ++i) w[i + 1] = v[i];
      fn((static_cast<std::uint64_t>(l) << 32) | cx_.rank_of(w, count + 1));
    }
  }

  // Pairs of dimension `dim`; `cleared` flags negative dim-simplices by
  // position. Returns the pivots (death simplices, dimension dim + 1).
  std::vector<std::uint64_t> reduce(int dim, const std::vector<char>& cleared,
                                    PersistenceDiagram& pd) {
    const int count = dim + 1;
    std::unordered_map<std::uint64_t, std::uint32_t> owner;
    std::vector<std::vector<std::uint64_t>> chains;
    std::vector<std::uint64_t> pivots;
    std::vector<std::uint64_t> chain;
    MinHeap heap;

    for (std::size_t pos = cx_.size(dim); pos-- > 0;) {
      if (cleared[pos]) continue;
      const std::uint64_t sigma = cx_.key(dim, pos);
      std::uint64_t pivot = kNoKey;
      for_each_cofacet(sigma, count, [&](std::uint64_t c) { pivot = std::min(pivot, c); });

      chain.assign(1, sigma);
      auto it = pivot == kNoKey ? owner.end() : owner.find(pivot);
      if (it != owner.end()) {
        heap = MinHeap();
        for_each_cofacet(sigma, count, [&](std::uint64_t c) { heap.push(c); });
        while (true) {
          pivot = peek_pivot(heap);
          if (pivot == kNoKey) break;
          it = owner.find(pivot);
          if (it == owner.end()) break;
          for (std::uint64_t s : chains[it->second]) {
            chain.push_back(s);
            for_each_cofacet(s, count, [&](std::uint64_t c) { heap.push(c); });
          }
        }
        cancel_pairs(chain);
      }

      const double birth = cx_.value(dim, pos);
      if (pivot == kNoKey) {
        pd.features.push_back({dim, birth, pd.death_cap, true});
        continue;
      }
      owner.emplace(pivot, static_cast<std::uint32_t>(chains.size()));
      chains.push_back(chain);
      pivots.push_back(pivot);
      const double death = cx_.level_value(static_cast<std::uint32_t>(pivot >> 32));
      if (death > birth) pd.features.push_back({dim, birth, death, false});
    }
    return pivots;
  }

 private:
  using MinHeap =
      std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>>;
  static constexpr std::uint64_t kNoKey = std::numeric_limits<std::uint64_t>::max();

  // Smallest entry with odd multiplicity, left on the heap.
  static std::uint64_t peek_pivot(MinHeap& heap) {
    while (!heap.empty()) {
      const std::uint64_t top = heap.top();
      heap.pop();
      if (!heap.empty() && heap.top() == top) {
        heap.pop();
        continue;
      }
      heap.push(top);
      return top;
    }
    return kNoKey;
  }

  static void cancel_pairs(std::vector<std::uint64_t>& chain) {
    std::sort(chain.begin(), chain.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < chain.size();) {
      std::size_t j = i;
      while (j < chain.size() && chain[j] == chain[i]) ++j;
      if ((j - i) % 2) chain[out++] = chain[i];
      i = j;
    }
    chain.resize(out);
  }

  const FilteredComplex& cx_;
  int n_;
};

void reduce_coboundary(const FilteredComplex& cx, PersistenceDiagram& pd) {
  const int n = cx.vertex_count();

  // Dimension 0 by union-find over edges in filtration order.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> cleared(cx.size(1), 0);
  int e[2];
  for (std::size_t pos = 0; pos < cx.size(1); ++pos) {
    cx.unrank(cx.lex_rank(1, pos), 2, e);
    const int a = find(e[0]), b = find(e[1]);
    if (a == b) continue;
    parent[std::max(a, b)] = std::min(a, b);
    cleared[pos] = 1;
    const double death = cx.value(1, pos);
    if (death > 0.0) pd.features.push_back({0, 0.0, death, false});
  }
  for (int v = 0; v < n; ++v)
    if (find(v) == v) pd.features.push_back({0, 0.0, pd.death_cap, true});

  CoboundaryReducer reducer(cx);
  for (int dim = 1; dim <= cx.max_dim(); ++dim) {
    const std::vector<std::uint64_t> pivots = reducer.reduce(dim, cleared, pd);
    if (dim == cx.max_dim()) break;
    std::vector<char> next(cx.size(dim + 1), 0);
    for (std::uint64_t key : pivots) {
      std::size_t lo = 0, hi = cx.size(dim + 1);
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cx.key(dim + 1, mid) < key)
          lo = mid + 1;
        else
          hi = mid;
      }
      next[lo] = 1;
    }
    cleared.swap(next);
  }
}

}  // namespace

PersistenceDiagram persistence(const FilteredComplex& cx, PersistenceOptions options) {
  PersistenceDiagram pd;
  pd.death_cap = cx.threshold();
  pd.max_dim = cx.max_dim();
  if (options.algorithm == ReductionAlgorithm::boundary_twist)
    reduce_boundary_twist(cx, pd);
  else
    reduce_coboundary(cx, pd);

  std::sort(pd.features.begin(), pd.features.end(),
            [](const PersistencePair& a, const PersistencePair& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              if (a.birth != b.birth) return a.birth < b.birth;
              if (a.death != b.death) return a.death < b.death;
              return a.essential < b.essential;
            });
  return pd;
}

std::vector<PersistencePair> PersistenceDiagram::dimension(int k) const {
  std::vector<PersistencePair> out;
  for (const auto& f : features)
    if (f.dim == k) out.push_back(f);
  return out;
}

std::vector<double> PersistenceDiagram::persistences(int k) const {
  std::vector<double> out;
  for (const auto& f : features)
    if (f.dim == k) out.push_back(f.persistence());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::size_t PersistenceDiagram::count(int k) const {
  return static_cast<std::size_t>(
      std::count_if(features.begin(), features.end(), [k](const auto& f) { return f.dim == k; }));
}

TotalPersistence total_persistence(const PersistenceDiagram& diagram) {
  TotalPersistence tp;
  for (const auto& f : diagram.features)
    if (f.dim >= 0 && f.dim <= 2) tp[f.dim] += f.death - f.birth;
  return tp;
}

bool gap_test(std::vector<double> lifetimes, int m, double ratio) {
  if (m < 1) throw std::invalid_argument("gap_test: m must be >= 1");
  std::sort(lifetimes.begin(), lifetimes.end(), std::greater<>());
  auto at = [&](int i) { return i < static_cast<int>(lifetimes.size()) ? lifetimes[i] : 0.0; };
  return at(m - 1) > ratio * at(m);
}

}  // namespace toposim
