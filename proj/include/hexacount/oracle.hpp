#pragma once

// Brute-force reference counts for small orders. Nothing here uses the
// canonical form, the class machinery or the transforms of the rest of the
// library: squares are enumerated by plain backtracking, symmetry is reduced
// by taking the lexicographically least of the eight dihedral images, and
// the line predicates are re-derived locally.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hexacount/core.hpp"

namespace hexacount {

struct OracleCounts {
  std::uint64_t semi_magic = 0;
  std::uint64_t magic = 0;
  std::uint64_t panmagic = 0;
  std::uint64_t raw_semi_magic = 0;  // before symmetry reduction
  std::uint64_t self_symmetric = 0;  // squares fixed by a non-identity transform

  auto operator<=>(const OracleCounts&) const = default;
};

namespace oracle_detail {

template <int N>
using Cells = std::array<std::uint8_t, N * N>;

template <int N>
constexpr int z() {
  return N * (N * N + 1) / 2;
}

// Image of cell (r, c) under transform t: bit 2 transposes, bits 0/1 mirror
// rows / columns. The eight combinations are the dihedral group.
template <int N>
Cells<N> image(const Cells<N>& x, int t) {
  Cells<N> out{};
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      int rr = (t & 1) ? N - 1 - r : r;
      int cc = (t & 2) ? N - 1 - c : c;
      if (t & 4) std::swap(rr, cc);
      out[rr * N + cc] = x[r * N + c];
    }
  return out;
}

template <int N>
bool magic_diagonals(const Cells<N>& x) {
  int d = 0;
  int a = 0;
  for (int i = 0; i < N; ++i) {
    d += x[i * N + i];
    a += x[i * N + (N - 1 - i)];
  }
  return d == z<N>() && a == z<N>();
}

template <int N>
bool all_broken_diagonals(const Cells<N>& x) {
  for (int k = 0; k < N; ++k) {
    int d = 0;
    int a = 0;
    for (int i = 0; i < N; ++i) {
      d += x[i * N + (i + k) % N];
      a += x[i * N + ((k - i) % N + N) % N];
    }
    if (d != z<N>() || a != z<N>()) return false;
  }
  return true;
}

}  // namespace oracle_detail

/// Calls visit(cells) for every semi-magic square of order N (row-major
/// cells). `order` lists the candidate values in the order they are tried;
/// only squares whose top-left value v satisfies (index of v in order) %
/// shards == shard are produced.
template <int N>
void for_each_semi_magic(const std::function<void(const oracle_detail::Cells<N>&)>& visit,
                         std::vector<int> order = {}, int shard = 0, int shards = 1) {
  constexpr int z = oracle_detail::z<N>();
  constexpr int K = N * N;
  if (order.empty()) {
    order.resize(K);
    std::iota(order.begin(), order.end(), 1);
  }
  if (static_cast<int>(order.size()) != K) throw std::invalid_argument("value order must list every number once");
  oracle_detail::Cells<N> x{};
  std::array<bool, K + 1> used{};
  std::array<int, N> row{};
  std::array<int, N> col{};

  auto place = [&](int cell, int v, bool on) {
    const int r = cell / N;
    const int c = cell % N;
    used[v] = on;
    row[r] += on ? v : -v;
    col[c] += on ? v : -v;
    x[cell] = static_cast<std::uint8_t>(on ? v : 0);
  };

  auto rec = [&](auto&& self, int cell) -> void {
    if (cell == K) {
      visit(x);
      return;
    }
    const int r = cell / N;
    const int c = cell % N;
    const bool last_col = c == N - 1;
    const bool last_row = r == N - 1;
    if (last_col || last_row) {
      const int need_r = z - row[r];
      const int need_c = z - col[c];
      const int v = last_col ? need_r : need_c;
      if (v < 1 || v > K || used[v]) return;
      if (last_col && last_row && need_r != need_c) return;
      if (last_row && !last_col && v != need_c) return;
      place(cell, v, true);
      self(self, cell + 1);
      place(cell, v, false);
      return;
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int v = order[k];
      if (cell == 0 && static_cast<int>(k) % shards != shard) continue;
      if (used[v] || row[r] + v >= z || col[c] + v >= z) continue;
      place(cell, v, true);
      self(self, cell + 1);
      place(cell, v, false);
    }
  };
  rec(rec, 0);
}

/// Essentially different semi-magic, magic and panmagic squares of order 3
/// or 4, counted as orbits under the dihedral group.
inline OracleCounts brute_force_counts(int order, unsigned threads = 1, std::vector<int> value_order = {}) {
  auto run = [&]<int N>() {
    const int shards = static_cast<int>(std::max(1U, threads));
    std::vector<OracleCounts> part(static_cast<std::size_t>(shards));
    auto work = [&](int s) {
      OracleCounts& out = part[static_cast<std::size_t>(s)];
      for_each_semi_magic<N>(
          [&](const oracle_detail::Cells<N>& x) {
            ++out.raw_semi_magic;
            bool least = true;
            bool fixed = false;
            for (int t = 1; t < 8; ++t) {
              const auto y = oracle_detail::image<N>(x, t);
              if (y < x) least = false;
              if (y == x) fixed = true;
            }
            if (fixed) ++out.self_symmetric;
            if (!least) return;
            ++out.semi_magic;
            if (oracle_detail::magic_diagonals<N>(x)) ++out.magic;
            if (oracle_detail::all_broken_diagonals<N>(x)) ++out.panmagic;
          },
          value_order, s, shards);
    };
    {
      std::vector<std::jthread> pool;
      for (int s = 1; s < shards; ++s) pool.emplace_back(work, s);
      work(0);
    }
    OracleCounts total;
    for (const auto& p : part) {
      total.semi_magic += p.semi_magic;
      total.magic += p.magic;
      total.panmagic += p.panmagic;
      total.raw_semi_magic += p.raw_semi_magic;
      total.self_symmetric += p.self_symmetric;
    }
    return total;
  };
  if (order == 3) return run.template operator()<3>();
  if (order == 4) return run.template operator()<4>();
  throw std::invalid_argument("brute force is limited to orders 3 and 4");
}

/// All 72 semi-magic squares of order 3.
inline std::vector<SquareGrid<3>> enumerate_all(int order = 3) {
  if (order != 3) throw std::invalid_argument("enumerate_all supports order 3 only");
  std::vector<SquareGrid<3>> out;
  for_each_semi_magic<3>([&](const oracle_detail::Cells<3>& x) {
    SquareGrid<3> g;
    for (int i = 0; i < 9; ++i) g(i / 3, i % 3) = x[i];
    out.push_back(g);
  });
  return out;
}

/// Canonical in the counting sense: rows ordered by increasing minimum,
/// columns by nondecreasing sum over the top n/2 rows, ties by top entry.
template <int N>
bool is_canonical_square(const oracle_detail::Cells<N>& x) {
  int prev_min = 0;
  for (int r = 0; r < N; ++r) {
    int m = N * N + 1;
    for (int c = 0; c < N; ++c) m = std::min<int>(m, x[r * N + c]);
    if (m <= prev_min) return false;
    prev_min = m;
  }
  auto upper = [&](int c) {
    int s = 0;
    for (int r = 0; r < N / 2; ++r) s += x[r * N + c];
    return s;
  };
  for (int c = 1; c < N; ++c) {
    const int a = upper(c - 1);
    const int b = upper(c);
    if (a > b || (a == b && x[c - 1] > x[c])) return false;
  }
  return true;
}

/// Canonical squares of order 4 grouped by upper-half set (mask bits).
inline const std::map<std::uint64_t, std::uint64_t>& canonical_counts_by_class_4() {
  static const auto table = [] {
    std::map<std::uint64_t, std::uint64_t> counts;
    for_each_semi_magic<4>([&](const oracle_detail::Cells<4>& x) {
      if (!is_canonical_square<4>(x)) return;
      std::uint64_t m = 0;
      for (int i = 0; i < 8; ++i) m |= std::uint64_t{1} << (x[i] - 1);
      ++counts[m];
    });
    return counts;
  }();
  return table;
}

/// Number of canonical order-4 squares whose top two rows hold exactly m.
inline std::uint64_t brute_force_class_count(int order, NumberSet m) {
  if (order != 4) throw std::invalid_argument("brute_force_class_count supports order 4 only");
  const auto& t = canonical_counts_by_class_4();
  const auto it = t.find(m.bits());
  return it == t.end() ? 0 : it->second;
}

/// Fillings of an r x c block by `values`, each once, with the given row and
/// column totals. Rows are chosen as subsets with the right sum, then the
/// entries of every row are matched to columns one column at a time.
inline std::uint64_t count_block_by_row_sets(NumberSet values, const std::vector<int>& row_targets,
                                             const std::vector<int>& col_targets) {
  const int R = static_cast<int>(row_targets.size());
  const int C = static_cast<int>(col_targets.size());
  if (values.size() != R * C) return 0;
  std::vector<NumberSet> rows(static_cast<std::size_t>(R));

  // subsets of `pool` of size C with the given sum, in increasing order
  auto subsets = [&](NumberSet pool, int sum, auto&& emit) {
    auto rec = [&](auto&& self, std::uint64_t rest, int left, int need, NumberSet acc) -> void {
      if (left == 0) {
        if (need == 0) emit(acc);
        return;
      }
      for (auto b = rest; b != 0; b &= b - 1) {
        const int v = std::countr_zero(b) + 1;
        if (v > need) break;
        self(self, b & (b - 1), left - 1, need - v, acc.with(v));
      }
    };
    rec(rec, pool.bits(), C, sum, NumberSet{});
  };

  std::vector<NumberSet> left(static_cast<std::size_t>(R));
  auto match = [&](auto&& self, int col, int r, int partial) -> std::uint64_t {
    if (col == C) return 1;
    if (r == R) return partial == col_targets[col] ? self(self, col + 1, 0, 0) : 0;
    std::uint64_t n = 0;
    const NumberSet here = left[r];
    for (auto b = here.bits(); b != 0; b &= b - 1) {
      const int v = std::countr_zero(b) + 1;
      if (partial + v > col_targets[col]) break;
      left[r] = here.without(v);
      n += self(self, col, r + 1, partial + v);
    }
    left[r] = here;
    return n;
  };

  std::uint64_t total = 0;
  auto choose = [&](auto&& self, int r, NumberSet pool) -> void {
    if (r == R) {
      std::copy(rows.begin(), rows.end(), left.begin());
      total += match(match, 0, 0, 0);
      return;
    }
    subsets(pool, row_targets[r], [&](NumberSet s) {
      rows[r] = s;
      self(self, r + 1, pool - s);
    });
  };
  choose(choose, 0, values);
  return total;
}

/// Semi-magic completions of a partial grid (0 = empty). The empty cells
/// must be exactly a set of rows times a set of columns.
template <int N>
std::uint64_t count_completions(const SquareGrid<N>& partial) {
  constexpr int z = oracle_detail::z<N>();
  std::vector<int> rows;
  std::vector<int> cols;
  NumberSet used;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      const int v = partial(r, c);
      if (v == 0) {
        if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
        if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
      } else {
        if (v < 1 || v > N * N || used.contains(v)) return 0;
        used = used.with(v);
      }
    }
  for (int r : rows)
    for (int c : cols)
      if (partial(r, c) != 0) throw std::invalid_argument("empty cells do not form a block");
  if (rows.size() * cols.size() + static_cast<std::size_t>(used.size()) != N * N)
    throw std::invalid_argument("empty cells do not form a block");
  for (int r = 0; r < N; ++r)
    if (std::find(rows.begin(), rows.end(), r) == rows.end() && partial.row_sum(r) != z) return 0;
  for (int c = 0; c < N; ++c)
    if (std::find(cols.begin(), cols.end(), c) == cols.end() && partial.col_sum(c) != z) return 0;
  if (rows.empty()) return 1;
  std::vector<int> rt;
  std::vector<int> ct;
  for (int r : rows) rt.push_back(z - partial.row_sum(r));
  for (int c : cols) ct.push_back(z - partial.col_sum(c));
  return count_block_by_row_sets(NumberSet::range(1, N * N) - used, rt, ct);
}

}  // namespace hexacount
