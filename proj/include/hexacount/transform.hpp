#pragma once

// Square predicates and transforms: semi-magic / magic / panmagic tests,
// the eight dihedral symmetries, canonical form, normalized form,
// complement and the complement-and-normalize involution.

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "hexacount/core.hpp"

namespace hexacount {

template <int N>
constexpr bool is_semi_magic(const SquareGrid<N>& g) {
  constexpr int z = kOrder<N>.magic_constant;
  if (!g.is_permutation()) return false;
  for (int i = 0; i < N; ++i)
    if (g.row_sum(i) != z || g.col_sum(i) != z) return false;
  return true;
}

template <int N>
constexpr bool is_magic(const SquareGrid<N>& g) {
  constexpr int z = kOrder<N>.magic_constant;
  if (!is_semi_magic(g)) return false;
  int d = 0;
  int a = 0;
  for (int i = 0; i < N; ++i) {
    d += g(i, i);
    a += g(i, N - 1 - i);
  }
  return d == z && a == z;
}

/// Magic, and every broken diagonal in both directions sums to Z.
template <int N>
constexpr bool is_panmagic(const SquareGrid<N>& g) {
  constexpr int z = kOrder<N>.magic_constant;
  if (!is_magic(g)) return false;
  for (int k = 0; k < N; ++k) {
    int down = 0;
    int up = 0;
    for (int i = 0; i < N; ++i) {
      down += g(i, (i + k) % N);
      up += g(i, (k - i + N) % N);
    }
    if (down != z || up != z) return false;
  }
  return true;
}

/// x -> R^rotation M^reflect x, where M mirrors columns and R is a
/// clockwise quarter turn.
struct DihedralElement {
  int rotation = 0;
  bool reflect = false;

  constexpr auto operator<=>(const DihedralElement&) const = default;

  /// Element equivalent to applying `first`, then `second`.
  static constexpr DihedralElement compose(DihedralElement first, DihedralElement second) {
    const int r = second.reflect ? (second.rotation - first.rotation + 4) % 4 : (second.rotation + first.rotation) % 4;
    return {r, first.reflect != second.reflect};
  }
};

constexpr std::array<DihedralElement, 8> all_dihedral() {
  std::array<DihedralElement, 8> out{};
  int k = 0;
  for (int f = 0; f < 2; ++f)
    for (int r = 0; r < 4; ++r) out[k++] = {r, f == 1};
  return out;
}

template <int N>
constexpr SquareGrid<N> apply(DihedralElement e, const SquareGrid<N>& g) {
  SquareGrid<N> cur = g;
  if (e.reflect) {
    SquareGrid<N> t;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t(i, N - 1 - j) = cur(i, j);
    cur = t;
  }
  for (int r = 0; r < e.rotation; ++r) {
    SquareGrid<N> t;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t(j, N - 1 - i) = cur(i, j);
    cur = t;
  }
  return cur;
}

namespace detail {

template <int N>
void require_semi_magic(const SquareGrid<N>& g, const char* op) {
  if (!is_semi_magic(g)) throw std::invalid_argument(std::string(op) + ": input is not semi-magic");
}

template <int N>
std::array<int, N> identity_order() {
  std::array<int, N> p{};
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace detail

/// Sum of column `c` over the upper n/2 rows.
template <int N>
constexpr int upper_sum(const SquareGrid<N>& g, int c) {
  int s = 0;
  for (int i = 0; i < N / 2; ++i) s += g(i, c);
  return s;
}

/// Rows ascending by minimal element, then columns ascending by the sum of
/// their upper half (ties by top entry). Defined for semi-magic squares of
/// even order.
template <int N>
  requires EvenOrder<N>
SquareGrid<N> canonicalize(const SquareGrid<N>& g) {
  detail::require_semi_magic(g, "canonicalize");
  auto rows = detail::identity_order<N>();
  std::sort(rows.begin(), rows.end(), [&](int a, int b) { return g.row_min(a) < g.row_min(b); });
  const SquareGrid<N> by_rows = g.permute_rows(rows);
  auto cols = detail::identity_order<N>();
  std::sort(cols.begin(), cols.end(), [&](int a, int b) {
    const int sa = upper_sum(by_rows, a);
    const int sb = upper_sum(by_rows, b);
    return sa != sb ? sa < sb : by_rows(0, a) < by_rows(0, b);
  });
  return by_rows.permute_cols(cols);
}

/// Rows and columns permuted so that 1 is top-left and the first row and
/// first column ascend; the transpose step of normalize() is not applied.
template <int N>
SquareGrid<N> normalize_without_transpose(const SquareGrid<N>& g) {
  detail::require_semi_magic(g, "normalize");
  int r1 = 0;
  int c1 = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (g(i, j) == 1) {
        r1 = i;
        c1 = j;
      }
  auto rows = detail::identity_order<N>();
  auto cols = detail::identity_order<N>();
  std::sort(rows.begin(), rows.end(), [&](int a, int b) { return g(a, c1) < g(b, c1); });
  std::sort(cols.begin(), cols.end(), [&](int a, int b) { return g(r1, a) < g(r1, b); });
  return g.permute_rows(rows).permute_cols(cols);
}

/// 1 in the top-left corner, first row and first column ascending, and
/// transposed if needed so that result(0,1) < result(1,0).
template <int N>
SquareGrid<N> normalize(const SquareGrid<N>& g) {
  SquareGrid<N> x = normalize_without_transpose(g);
  if (x(0, 1) > x(1, 0)) x = x.transposed();
  return x;
}

/// Every x becomes n*n + 1 - x.
template <int N>
constexpr SquareGrid<N> complement(const SquareGrid<N>& g) {
  SquareGrid<N> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out(i, j) = N * N + 1 - g(i, j);
  return out;
}

template <int N>
SquareGrid<N> cn(const SquareGrid<N>& g) {
  return normalize(complement(g));
}

template <int N>
bool is_self_complement(const SquareGrid<N>& normalized) {
  return cn(normalized) == normalized;
}

}  // namespace hexacount
