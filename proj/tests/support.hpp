#pragma once

// Shared fixtures for the unit tests and the acceptance runner.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hexacount/hexacount.hpp"

namespace hexacount::testing {

inline std::string data_path(const std::string& name) { return std::string(HEXACOUNT_DATA_DIR) + "/" + name; }

// order-5 semi-magic, magic and panmagic samples
inline const SquareGrid<5> kSemi5{SquareGrid<5>::Rows{{{4, 12, 25, 8, 16},
                                                        {23, 6, 19, 2, 15},
                                                        {11, 24, 7, 20, 3},
                                                        {17, 5, 13, 21, 9},
                                                        {10, 18, 1, 14, 22}}}};
inline const SquareGrid<5> kMagic5{SquareGrid<5>::Rows{{{13, 11, 15, 16, 10},
                                                         {17, 5, 19, 18, 6},
                                                         {14, 22, 1, 8, 20},
                                                         {9, 24, 7, 21, 4},
                                                         {12, 3, 23, 2, 25}}}};
inline const SquareGrid<5> kPan5{SquareGrid<5>::Rows{{{1, 15, 24, 8, 17},
                                                       {23, 7, 16, 5, 14},
                                                       {20, 4, 13, 22, 6},
                                                       {12, 21, 10, 19, 3},
                                                       {9, 18, 2, 11, 25}}}};

// canonical form: input and expected output
inline const SquareGrid<6> kCanonIn{SquareGrid<6>::Rows{{{1, 4, 16, 32, 27, 31},
                                                          {34, 35, 7, 19, 13, 3},
                                                          {15, 12, 20, 28, 14, 22},
                                                          {29, 18, 24, 2, 30, 8},
                                                          {26, 9, 23, 25, 17, 11},
                                                          {6, 33, 21, 5, 10, 36}}}};
inline const SquareGrid<6> kCanonOut{SquareGrid<6>::Rows{{{31, 16, 32, 4, 1, 27},
                                                           {8, 24, 2, 18, 29, 30},
                                                           {3, 7, 19, 35, 34, 13},
                                                           {36, 21, 5, 33, 6, 10},
                                                           {11, 23, 25, 9, 26, 17},
                                                           {22, 20, 28, 12, 15, 14}}}};

// normalized form: input, the sorted square before the transpose, result
inline const SquareGrid<6> kNormIn{SquareGrid<6>::Rows{{{35, 12, 18, 4, 9, 33},
                                                         {34, 15, 29, 1, 26, 6},
                                                         {7, 20, 24, 16, 23, 21},
                                                         {19, 28, 2, 32, 25, 5},
                                                         {13, 14, 30, 27, 17, 10},
                                                         {3, 22, 8, 31, 11, 36}}}};
inline const SquareGrid<6> kNormSorted{SquareGrid<6>::Rows{{{1, 6, 15, 26, 29, 34},
                                                             {4, 33, 12, 9, 18, 35},
                                                             {16, 21, 20, 23, 24, 7},
                                                             {27, 10, 14, 17, 30, 13},
                                                             {31, 36, 22, 11, 8, 3},
                                                             {32, 5, 28, 25, 2, 19}}}};
inline const SquareGrid<6> kNormOut{SquareGrid<6>::Rows{{{1, 4, 16, 27, 31, 32},
                                                          {6, 33, 21, 10, 36, 5},
                                                          {15, 12, 20, 14, 22, 28},
                                                          {26, 9, 23, 17, 11, 25},
                                                          {29, 18, 24, 30, 8, 2},
                                                          {34, 35, 7, 13, 3, 19}}}};

/// K followed by the three other swap-free squares.
inline std::vector<SquareGrid<6>> swap_free_fixtures() { return read_squares_file<6>(data_path("swap_free.txt")); }

template <int N>
std::array<int, N> random_perm(std::mt19937_64& rng) {
  std::array<int, N> p{};
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Random semi-magic square: a random prefix and c-filling are drawn until
/// the d-block has a filling, one filling is picked by a shuffled search,
/// then rows and columns are shuffled.
template <int N>
SquareGrid<N> random_semi_magic(const KnuthEstimator<N>& est, std::mt19937_64& rng) {
  constexpr int z = kOrder<N>.magic_constant;
  using Grid = typename KnuthEstimator<N>::Grid;
  for (;;) {
    const auto p = est.prefix(rng() % est.prefix_count());
    Grid g = KnuthEstimator<N>::start_grid(p);
    NumberSet pool = p.remaining();
    bool ok = true;
    for (const auto& cell : FillPlan<N>::cells()) {
      int v;
      if (cell.forced) {
        v = detail::forced_value<N>(g, cell.row, cell.col);
        if (v < 1 || v > N * N || !pool.contains(v)) {
          ok = false;
          break;
        }
      } else {
        auto m = pool.members();
        v = m[rng() % m.size()];
      }
      g[cell.row][cell.col] = v;
      pool = pool.without(v);
    }
    if (!ok || KnuthEstimator<N>::count_d(g, pool) == 0) continue;

    std::vector<int> values = pool.members();
    std::shuffle(values.begin(), values.end(), rng);
    std::array<int, N> rows{};
    std::array<int, N> cols{};
    std::array<int, N> row_left{};
    std::array<int, N> col_left{};
    for (int i = 3; i < N; ++i) rows[i] = z - g[i][0] - g[i][1];
    for (int j = 2; j < N; ++j) cols[j] = z - g[0][j] - g[1][j] - g[2][j];
    row_left.fill(N - 2);
    col_left.fill(N - 3);
    std::vector<bool> used(values.size(), false);
    auto rec = [&](auto&& self, int cell) -> bool {
      if (cell == (N - 3) * (N - 2)) return true;
      const int i = 3 + cell / (N - 2);
      const int j = 2 + cell % (N - 2);
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (used[k]) continue;
        const int v = values[k];
        if (v > rows[i] || v > cols[j]) continue;
        if (row_left[i] == 1 && v != rows[i]) continue;
        if (col_left[j] == 1 && v != cols[j]) continue;
        used[k] = true;
        rows[i] -= v;
        cols[j] -= v;
        --row_left[i];
        --col_left[j];
        g[i][j] = v;
        if (self(self, cell + 1)) return true;
        used[k] = false;
        rows[i] += v;
        cols[j] += v;
        ++row_left[i];
        ++col_left[j];
      }
      return false;
    };
    if (!rec(rec, 0)) continue;
    SquareGrid<N> out{g};
    return out.permute_rows(random_perm<N>(rng)).permute_cols(random_perm<N>(rng));
  }
}

/// Keys of a half grid's columns under every arrangement of rows 2..n/2,
/// computed without the sorting network; reference for midcount.
template <int N>
std::vector<Profile<N>> naive_profiles(const Partition<N>& part) {
  std::vector<Profile<N>> out;
  std::array<std::vector<int>, N / 2> rows;
  for (int r = 0; r < N / 2; ++r) rows[r] = part.rows[r].members();
  auto rec = [&](auto&& self, int r) -> void {
    if (r == N / 2) {
      std::array<int, N> sums{};
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N / 2; ++k) sums[j] += rows[k][j];
      Profile<N> p{};
      for (int j = 0; j < N; ++j)
        p[j] = static_cast<std::uint8_t>(part.side == HalfSide::upper ? sums[j] : kOrder<N>.magic_constant - sums[j]);
      std::sort(p.begin(), p.end());
      out.push_back(p);
      return;
    }
    std::sort(rows[r].begin(), rows[r].end());
    do {
      self(self, r + 1);
    } while (std::next_permutation(rows[r].begin(), rows[r].end()));
  };
  rec(rec, 1);
  return out;
}

// Random ascending profile with total 333 inside the radix bounds.
inline Profile<6> random_profile(std::mt19937_64& rng) {
  constexpr auto r = profile_radices<6>();
  for (;;) {
    Profile<6> p{};
    int total = 0;
    int lo = 0;
    bool ok = true;
    for (int i = 0; i < 5; ++i) {
      const int hi = static_cast<int>(r[i]) - 1;
      if (lo > hi) {
        ok = false;
        break;
      }
      p[i] = static_cast<std::uint8_t>(lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)));
      lo = p[i];
      total += p[i];
    }
    const int last = 333 - total;
    if (!ok || last < p[4] || last > 255) continue;
    p[5] = static_cast<std::uint8_t>(last);
    return p;
  }
}

}  // namespace hexacount::testing
