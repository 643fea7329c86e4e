#pragma once

#include <helmfd/types.hpp>

#include <vector>

namespace helmfd {

struct MultiIndex {
  int m = 0;
  int n = 0;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  int order() const { return m + n; }
};

// Ordered list of multi-indices with O(1) lookup for the graded sets used
// throughout the library. Ordering is graded lexicographic: by m+n, then
// by decreasing m.
class MultiIndexSet {
public:
  MultiIndexSet() = default;
  explicit MultiIndexSet(std::vector<MultiIndex> items) : items_(std::move(items)) {
    for (const auto& a : items_) max_order_ = std::max(max_order_, a.order());
    build_lookup();
  }

  std::size_t size() const { return items_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  // Position of a in the set, or -1.
  int position(MultiIndex a) const {
    if (a.m < 0 || a.n < 0 || a.m > max_order_ || a.n > max_order_) return -1;
    return lookup_[static_cast<std::size_t>(a.m * (max_order_ + 1) + a.n)];
  }
  bool contains(MultiIndex a) const { return position(a) >= 0; }

private:
  void build_lookup() {
    const int w = max_order_ + 1;
    lookup_.assign(static_cast<std::size_t>(w * w), -1);
    for (std::size_t i = 0; i < items_.size(); ++i)
      lookup_[static_cast<std::size_t>(items_[i].m * w + items_[i].n)] = static_cast<int>(i);
  }

  std::vector<MultiIndex> items_;
  std::vector<int> lookup_;
  int max_order_ = 0;
};

enum class IndexSetKind { Full, Band1, Band2 };

// Lambda_M = {m+n <= M}; band1 = {m in {0,1}}; band2 = the rest.
inline MultiIndexSet lambda_set(int M, IndexSetKind kind = IndexSetKind::Full) {
  if (M < 0) throw InvalidIndexError("lambda_set: negative order");
  std::vector<MultiIndex> out;
  for (int d = 0; d <= M; ++d) {
    for (int m = d; m >= 0; --m) {
      const int n = d - m;
      const bool b1 = m <= 1;
      if (kind == IndexSetKind::Band1 && !b1) continue;
      if (kind == IndexSetKind::Band2 && b1) continue;
      out.push_back({m, n});
    }
  }
  return MultiIndexSet(std::move(out));
}

// Transposed band {n in {0,1}}, used by y-major expansions.
inline MultiIndexSet band1_transposed(int M) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= M; ++d)
    for (int m = d; m >= 0; --m)
      if (d - m <= 1) out.push_back({m, d - m});
  return MultiIndexSet(std::move(out));
}

} // namespace helmfd
