#pragma once

// Series, half-sets and the class catalog: a class is an admissible upper
// half-set, i.e. one that splits into n/2 series for the upper rows while its
// complement splits into n/2 series for the lower rows, with row minima
// strictly increasing from the top row to the bottom row.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hexacount/core.hpp"

namespace hexacount {

enum class HalfSide { upper, lower };

/// n/2 pairwise-disjoint series ordered by strictly increasing minima.
template <int N>
struct Partition {
  std::array<NumberSet, N / 2> rows{};
  HalfSide side = HalfSide::upper;

  [[nodiscard]] NumberSet members() const {
    NumberSet s;
    for (auto r : rows) s = s | r;
    return s;
  }
  bool operator==(const Partition&) const = default;
};

template <int N>
constexpr bool is_series(NumberSet s) {
  return s.size() == N && s.sum() == kOrder<N>.magic_constant;
}

/// Every n-subset of 1..n^2 summing to the magic constant, ascending by mask.
template <int N>
std::vector<NumberSet> generate_series() {
  constexpr OrderParams p = kOrder<N>;
  std::vector<NumberSet> out;
  auto rec = [&](auto&& self, int next, int left, int target, NumberSet acc) -> void {
    if (left == 0) {
      if (target == 0) out.push_back(acc);
      return;
    }
    for (int v = next; v <= p.cells(); ++v) {
      // the remaining picks are at least v, v+1, ...
      if (left * v + left * (left - 1) / 2 > target) break;
      if (left * p.cells() - left * (left - 1) / 2 < target) continue;
      self(self, v + 1, left - 1, target - v, acc.with(v));
    }
  };
  rec(rec, 1, N, p.magic_constant, NumberSet{});
  std::sort(out.begin(), out.end());
  return out;
}

/// Number of (n^2/2)-subsets of 1..n^2 whose sum is (n/2)*Z, by dynamic
/// programming over (element, cardinality, sum). Accepts even n in 2..6.
inline std::uint64_t count_half_sets(int n) {
  if (n < 2 || n > 6 || n % 2 != 0) throw std::invalid_argument("count_half_sets needs an even order in 2..6");
  const int cells = n * n;
  const int pick = cells / 2;
  const int target = (n / 2) * (n * (n * n + 1) / 2);
  // ways[k][s]: subsets of the elements seen so far with k members and sum s
  std::vector<std::vector<std::uint64_t>> ways(pick + 1, std::vector<std::uint64_t>(target + 1, 0));
  ways[0][0] = 1;
  for (int v = 1; v <= cells; ++v)
    for (int k = std::min(pick, v); k >= 1; --k)
      for (int s = target; s >= v; --s) ways[k][s] += ways[k - 1][s - v];
  return ways[pick][target];
}

/// The series contained in `m`, in input order.
inline std::vector<NumberSet> restrict_series(std::span<const NumberSet> series, NumberSet m) {
  std::vector<NumberSet> out;
  for (auto s : series)
    if (s.subset_of(m)) out.push_back(s);
  return out;
}

namespace detail {

/// Visits every split of `rest` into series drawn from `pool`, emitting
/// rows in order of increasing minima. `visit` returns false to stop.
template <int N, typename Visit>
bool for_each_split(std::span<const NumberSet> pool, NumberSet rest, int row,
                    std::array<NumberSet, N / 2>& rows, int upper_limit, Visit&& visit) {
  constexpr int h = N / 2;
  if (row == h - 1) {
    if (!is_series<N>(rest)) return true;
    if (upper_limit > 0 && rest.min_element() >= upper_limit) return true;
    rows[row] = rest;
    return visit(rows);
  }
  const NumberSet low = min_mask(rest);
  for (auto s : pool) {
    if ((s & low).empty() || !s.subset_of(rest)) continue;
    rows[row] = s;
    if (!for_each_split<N>(pool, rest - s, row + 1, rows, upper_limit, visit)) return false;
  }
  return true;
}

template <int N>
int upper_limit_of(NumberSet m) {
  return (kOrder<N>.universe - m).min_element();
}

}  // namespace detail

/// All partitions of `m` into n/2 series with strictly increasing minima.
/// For the upper side the last row's minimum must also be below the smallest
/// number outside `m`. `series` is the series list of the order (or any
/// superset of the series inside `m`).
template <int N>
std::vector<Partition<N>> partitions_of(NumberSet m, HalfSide side, std::span<const NumberSet> series) {
  const auto pool = restrict_series(series, m);
  std::vector<Partition<N>> out;
  std::array<NumberSet, N / 2> rows{};
  const int limit = side == HalfSide::upper ? detail::upper_limit_of<N>(m) : 0;
  detail::for_each_split<N>(pool, m, 0, rows, limit, [&](const auto& r) {
    out.push_back(Partition<N>{r, side});
    return true;
  });
  return out;
}

/// True when some split exists; `pool` must already be restricted to `m`.
template <int N>
bool has_split(std::span<const NumberSet> pool, NumberSet m, HalfSide side) {
  std::array<NumberSet, N / 2> rows{};
  const int limit = side == HalfSide::upper ? detail::upper_limit_of<N>(m) : 0;
  bool found = false;
  detail::for_each_split<N>(pool, m, 0, rows, limit, [&](const auto&) {
    found = true;
    return false;
  });
  return found;
}

template <int N>
bool is_admissible(NumberSet m, std::span<const NumberSet> series) {
  constexpr OrderParams p = kOrder<N>;
  if (m.size() != p.cells() / 2 || m.sum() != p.half_sum || !m.subset_of(p.universe)) return false;
  const NumberSet rest = p.universe - m;
  return has_split<N>(restrict_series(series, m), m, HalfSide::upper) &&
         has_split<N>(restrict_series(series, rest), rest, HalfSide::lower);
}

/// Streams the admissible half-sets of order N in catalog order: ascending
/// lexicographically by sorted members, i.e. descending by sum of 2^(n^2-i).
///
/// The search decides 1, 2, ..., n^2 in turn (include before exclude) and
/// keeps two shrinking candidate lists: series avoiding every excluded
/// number (possible upper rows) and series avoiding every included number
/// (possible lower rows). At a leaf these are exactly the series inside the
/// half-set and inside its complement.
template <int N>
  requires EvenOrder<N>
class ClassGenerator {
 public:
  static constexpr OrderParams kParams = kOrder<N>;
  static constexpr int kCells = N * N;
  static constexpr int kPick = kCells / 2;

  explicit ClassGenerator(std::vector<NumberSet> series) : series_(std::move(series)) {
    for (auto& level : upper_) level.reserve(series_.size());
    for (auto& level : lower_) level.reserve(series_.size());
  }

  ClassGenerator() : ClassGenerator(generate_series<N>()) {}

  /// Calls `emit(m)` for each class in order; `emit` returns false to stop.
  /// When `resume_after` is given, only classes strictly after it are emitted.
  /// Returns true when the whole catalog was traversed.
  template <typename Emit>
  bool run(Emit&& emit, std::optional<NumberSet> resume_after = std::nullopt) {
    resume_ = resume_after;
    stopped_ = false;
    search(0, NumberSet{}, 0, 0, std::span<const NumberSet>(series_), std::span<const NumberSet>(series_),
           resume_.has_value(), emit);
    return !stopped_;
  }

  [[nodiscard]] const std::vector<NumberSet>& series() const { return series_; }

 private:
  template <typename Emit>
  void search(int depth, NumberSet chosen, int count, int sum, std::span<const NumberSet> up,
              std::span<const NumberSet> low, bool tight, Emit& emit) {
    if (stopped_) return;
    const int v = depth + 1;
    if (count == kPick) {
      if (sum != kParams.half_sum) return;
      if (tight) return;  // this is the resume point itself
      if (!leaf_ok(chosen, up, low)) return;
      if (!emit(chosen)) stopped_ = true;
      return;
    }
    if (v > kCells) return;
    const int left = kPick - count;
    const int need = kParams.half_sum - sum;
    if (left * v + left * (left - 1) / 2 > need) return;
    if (left * kCells - left * (left - 1) / 2 < need) return;

    const bool resume_has_v = tight && resume_->contains(v);
    // include v
    if (!tight || resume_has_v) {
      auto& next_low = lower_[depth];
      next_low.clear();
      for (auto s : low)
        if (!s.contains(v)) next_low.push_back(s);
      if (count < depth ? lower_viable(chosen.with(v), next_low) : true)
        search(depth + 1, chosen.with(v), count + 1, sum + v, up, next_low, tight && resume_has_v, emit);
    }
    // exclude v: the first excluded number must exceed n/2, because the
    // n/2 upper row minima all lie below it
    if (count == depth && v <= N / 2) return;
    auto& next_up = upper_[depth];
    next_up.clear();
    bool has_one = false;
    for (auto s : up)
      if (!s.contains(v)) {
        next_up.push_back(s);
        has_one |= s.contains(1);
      }
    if (!has_one) return;
    if (count == depth && !lower_viable(chosen, low)) return;
    search(depth + 1, chosen, count, sum, next_up, low, tight && !resume_has_v, emit);
  }

  // Once the smallest excluded number k is known, some lower candidate must
  // contain it. Callers guarantee k is already decided.
  static bool lower_viable(NumberSet chosen, std::span<const NumberSet> low) {
    const NumberSet outside = kParams.universe - chosen;
    const int k = outside.min_element();
    for (auto s : low)
      if (s.contains(k)) return true;
    return false;
  }

  static bool leaf_ok(NumberSet m, std::span<const NumberSet> up, std::span<const NumberSet> low) {
    return has_split<N>(up, m, HalfSide::upper) && has_split<N>(low, kParams.universe - m, HalfSide::lower);
  }

  std::vector<NumberSet> series_;
  std::array<std::vector<NumberSet>, kCells + 1> upper_{};
  std::array<std::vector<NumberSet>, kCells + 1> lower_{};
  std::optional<NumberSet> resume_;
  bool stopped_ = false;
};

/// Ordered list of classes; position = class id.
struct ClassCatalog {
  int order = 0;
  std::vector<NumberSet> classes;

  static constexpr int kJobs = 100;
  [[nodiscard]] static constexpr int job_of(std::uint64_t id) { return static_cast<int>(id % kJobs); }
  [[nodiscard]] std::size_t size() const { return classes.size(); }
};

/// Materializes the full catalog (practical for n = 4; hours for n = 6).
template <int N>
ClassCatalog generate_classes() {
  ClassCatalog cat{N, {}};
  ClassGenerator<N> gen;
  gen.run([&](NumberSet m) {
    cat.classes.push_back(m);
    return true;
  });
  return cat;
}

}  // namespace hexacount
