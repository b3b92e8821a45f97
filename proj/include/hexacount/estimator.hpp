#pragma once

// Knuth-style Monte Carlo estimate of the number of normalized squares.
//
// Fill order for order n (0-based cells):
//   prefix: row 0 (1 first, ascending) and column 0 below it (ascending,
//           with g(0,1) < g(1,0)), enumerated deterministically;
//   c:      row 1 columns 1..n-1, column 1 rows 2..n-1, row 2 columns 2..n-1,
//           each filled uniformly at random from the unused numbers, the last
//           cell of each of the three lines forced by its sum;
//   d:      rows 3..n-1 x columns 2..n-1, counted exactly.
// One measure xi sums, over every prefix, the number of d-fillings of one
// random c-filling. E[xi] * F = number of normalized squares, where F is the
// product of the free-choice pool sizes.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hexacount/core.hpp"
#include "hexacount/enumeration.hpp"

namespace hexacount {

/// Deterministic per-sample random stream: mt19937_64 seeded from
/// (seed, sample index). Bounded draws use Lemire's multiply-and-reject
/// method, so results do not depend on the standard library's distributions.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x68657861U};
    engine_.seed(seq);
  }

  /// Uniform integer in [0, bound).
  std::uint32_t below(std::uint32_t bound) {
    std::uint64_t x = engine_();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - std::uint64_t{bound}) % bound;
      while (low < threshold) {
        x = engine_();
        m = static_cast<unsigned __int128>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 64);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

template <int N>
struct Prefix {
  std::array<std::uint8_t, N> a{};      // row 0, a[0] == 1
  std::array<std::uint8_t, N - 1> b{};  // column 0, rows 1..n-1

  [[nodiscard]] NumberSet used() const {
    NumberSet s;
    for (auto v : a) s = s.with(v);
    for (auto v : b) s = s.with(v);
    return s;
  }
  [[nodiscard]] NumberSet remaining() const { return kOrder<N>.universe - used(); }
};

/// Product of the pool sizes of the free c-cells.
template <int N>
constexpr std::uint64_t probabilistic_factor() {
  std::uint64_t f = 1;
  int pool = N * N - (2 * N - 1);
  for (int k = 0; k < N - 2; ++k) f *= static_cast<std::uint64_t>(pool--);
  --pool;  // forced end of row 1
  for (int k = 0; k < N - 3; ++k) f *= static_cast<std::uint64_t>(pool--);
  --pool;  // forced end of column 1
  for (int k = 0; k < N - 3; ++k) f *= static_cast<std::uint64_t>(pool--);
  return f;
}

static_assert(probabilistic_factor<6>() == 6977456640000ULL);

/// (n!)^2 / 4: squares up to reflections and rotations per normalized square.
template <int N>
constexpr std::uint64_t normalized_multiplier() {
  return factorial(N) * factorial(N) / 4;
}

struct EstimateReport {
  std::uint64_t samples = 0;
  double mean = 0;      // mean of xi
  double variance = 0;  // estimated variance of the sample mean
  double estimate = 0;  // squares up to reflections and rotations
  double ci_low = 0;    // 3 sigma
  double ci_high = 0;
  std::uint64_t seed = 0;
  std::uint64_t sum = 0;
  unsigned __int128 sum_squares = 0;

  [[nodiscard]] bool contains(double value) const { return ci_low <= value && value <= ci_high; }
};

/// Cell plan shared by the sampler and the exhaustive reference.
template <int N>
struct FillPlan {
  struct Cell {
    int row;
    int col;
    bool forced;
  };
  static constexpr int kCells = (N - 1) + (N - 2) + (N - 2);

  static constexpr std::array<Cell, kCells> cells() {
    std::array<Cell, kCells> out{};
    int k = 0;
    for (int j = 1; j < N; ++j) out[k++] = {1, j, j == N - 1};
    for (int i = 2; i < N; ++i) out[k++] = {i, 1, i == N - 1};
    for (int j = 2; j < N; ++j) out[k++] = {2, j, j == N - 1};
    return out;
  }
};

namespace detail {

// Value of a forced cell: what its line still needs.
template <int N>
int forced_value(const std::array<std::array<int, N>, N>& g, int row, int col) {
  constexpr int z = kOrder<N>.magic_constant;
  int s = 0;
  if (col == N - 1) {  // end of a row
    for (int j = 0; j < N - 1; ++j) s += g[row][j];
  } else {  // end of column 1
    for (int i = 0; i < N - 1; ++i) s += g[i][col];
  }
  return z - s;
}

/// All 4-element subsets of 12 positions as 12-bit masks.
inline const std::array<std::uint16_t, 495>& four_of_twelve() {
  static const auto table = [] {
    std::array<std::uint16_t, 495> t{};
    int k = 0;
    for (unsigned m = 0; m < 4096; ++m)
      if (std::popcount(m) == 4) t[k++] = static_cast<std::uint16_t>(m);
    return t;
  }();
  return table;
}

}  // namespace detail

/// Number of ways to fill an r x c block with `values` (each used once) so
/// that row i sums to rows[i] and column j to cols[j]. Plain backtracking;
/// the last cell of each row and the whole last row are forced.
template <int R, int C>
std::uint64_t count_block_fillings(NumberSet values, const std::array<int, R>& rows, const std::array<int, C>& cols) {
  std::array<std::array<int, C>, R> cell{};
  std::uint64_t total = 0;
  auto rec = [&](auto&& self, int i, int j, NumberSet pool, int row_left) -> void {
    if (i == R - 1) {
      NumberSet p = pool;
      for (int jj = 0; jj < C; ++jj) {
        int v = cols[jj];
        for (int ii = 0; ii < R - 1; ++ii) v -= cell[ii][jj];
        if (v < 1 || v > NumberSet::kCapacity || !p.contains(v)) return;
        p = p.without(v);
        cell[i][jj] = v;
      }
      int s = 0;
      for (int jj = 0; jj < C; ++jj) s += cell[i][jj];
      if (s == rows[i]) ++total;
      return;
    }
    if (j == C - 1) {
      if (row_left < 1 || row_left > NumberSet::kCapacity || !pool.contains(row_left)) return;
      cell[i][j] = row_left;
      self(self, i + 1, 0, pool.without(row_left), i + 1 < R ? rows[i + 1] : 0);
      return;
    }
    for (auto b = pool.bits(); b != 0; b &= b - 1) {
      const int v = std::countr_zero(b) + 1;
      if (v >= row_left) break;
      cell[i][j] = v;
      self(self, i, j + 1, pool.without(v), row_left - v);
    }
  };
  rec(rec, 0, 0, values, rows[0]);
  return total;
}

/// count_block_fillings specialised to the 3 x 4 block of order 6: rows are
/// chosen as 4-subsets, then columns are matched one triple at a time.
inline std::uint64_t count_block_fillings_3x4(NumberSet values, const std::array<int, 3>& rows,
                                              const std::array<int, 4>& cols) {
  std::array<int, 12> v{};
  {
    int k = 0;
    for (auto b = values.bits(); b != 0 && k < 12; b &= b - 1) v[k++] = std::countr_zero(b) + 1;
    if (k != 12 || values.size() != 12) return 0;
  }
  std::array<int, 64> low_sum{};
  std::array<int, 64> high_sum{};
  for (unsigned m = 1; m < 64; ++m) {
    const int bit = std::countr_zero(m);
    low_sum[m] = low_sum[m & (m - 1)] + v[bit];
    high_sum[m] = high_sum[m & (m - 1)] + v[bit + 6];
  }
  std::array<std::uint16_t, 495> first{};
  std::array<std::uint16_t, 495> second{};
  int n_first = 0;
  int n_second = 0;
  for (auto m : detail::four_of_twelve()) {
    const int s = low_sum[m & 63] + high_sum[m >> 6];
    if (s == rows[0]) first[n_first++] = m;
    if (s == rows[1]) second[n_second++] = m;
  }
  if (n_first == 0 || n_second == 0) return 0;

  auto to_values = [&](unsigned m) {
    NumberSet s;
    for (; m != 0; m &= m - 1) s = s.with(v[std::countr_zero(m)]);
    return s;
  };

  // columns 0..2 searched, column 3 takes what is left
  auto match = [&](auto&& self, int col, NumberSet xs, NumberSet ys, NumberSet ws) -> std::uint64_t {
    if (col == 3) {
      const int x = xs.min_element();
      const int y = ys.min_element();
      const int w = ws.min_element();
      return x + y + w == cols[3] ? 1 : 0;
    }
    std::uint64_t n = 0;
    for (auto bx = xs.bits(); bx != 0; bx &= bx - 1) {
      const int x = std::countr_zero(bx) + 1;
      for (auto by = ys.bits(); by != 0; by &= by - 1) {
        const int y = std::countr_zero(by) + 1;
        const int w = cols[col] - x - y;
        if (w < 1 || w > NumberSet::kCapacity || !ws.contains(w)) continue;
        n += self(self, col + 1, xs.without(x), ys.without(y), ws.without(w));
      }
    }
    return n;
  };

  std::uint64_t total = 0;
  for (int i = 0; i < n_first; ++i)
    for (int k = 0; k < n_second; ++k) {
      if (first[i] & second[k]) continue;
      const unsigned rest = 0xFFFU & ~static_cast<unsigned>(first[i] | second[k]);
      if (low_sum[rest & 63] + high_sum[rest >> 6] != rows[2]) continue;
      total += match(match, 0, to_values(first[i]), to_values(second[k]), to_values(rest));
    }
  return total;
}

template <int N>
  requires(N >= 4 && N <= 6)
class KnuthEstimator {
 public:
  static constexpr OrderParams kParams = kOrder<N>;
  using Grid = std::array<std::array<int, N>, N>;

  struct PrefixRef {
    std::uint16_t a;  // index into first_row_series
    std::uint16_t b;
  };

  KnuthEstimator() {
    for (auto s : generate_series<N>())
      if (s.contains(1)) with_one_.push_back(s);
    for (auto s : with_one_) {
      std::array<std::uint8_t, N> m{};
      int k = 0;
      for (auto b = s.bits(); b != 0; b &= b - 1) m[k++] = static_cast<std::uint8_t>(std::countr_zero(b) + 1);
      members_.push_back(m);
    }
    for (std::size_t i = 0; i < with_one_.size(); ++i) {
      const NumberSet a = with_one_[i];
      const int a2 = (a.without(1)).min_element();
      for (std::size_t k = 0; k < with_one_.size(); ++k) {
        const NumberSet b = with_one_[k];
        if ((a & b) != NumberSet::single(1)) continue;
        if (b.without(1).min_element() <= a2) continue;
        prefixes_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(k)});
      }
    }
  }

  [[nodiscard]] const std::vector<NumberSet>& series_with_one() const { return with_one_; }
  [[nodiscard]] std::size_t prefix_count() const { return prefixes_.size(); }

  [[nodiscard]] Prefix<N> prefix(std::size_t i) const {
    Prefix<N> p;
    p.a = members_[prefixes_[i].a];
    const auto& b = members_[prefixes_[i].b];
    std::copy(b.begin() + 1, b.end(), p.b.begin());
    return p;
  }

  /// One draw of xi: every prefix with a fresh random c-filling.
  std::uint64_t measure(SampleStream& rng) const {
    std::uint64_t xi = 0;
    for (std::size_t i = 0; i < prefixes_.size(); ++i) xi += measure_prefix(prefix(i), rng);
    return xi;
  }

  /// Contribution of one prefix under one random c-filling; a forced value
  /// that is not available contributes 0.
  std::uint64_t measure_prefix(const Prefix<N>& p, SampleStream& rng) const {
    Grid g = start_grid(p);
    NumberSet pool = p.remaining();
    std::array<int, N * N> free{};
    int n_free = 0;
    for (auto b = pool.bits(); b != 0; b &= b - 1) free[n_free++] = std::countr_zero(b) + 1;
    for (const auto& cell : FillPlan<N>::cells()) {
      int v;
      if (cell.forced) {
        v = detail::forced_value<N>(g, cell.row, cell.col);
        if (v < 1 || v > kParams.cells() || !pool.contains(v)) return 0;
        // drop v from the free list
        for (int k = 0; k < n_free; ++k)
          if (free[k] == v) {
            free[k] = free[--n_free];
            break;
          }
      } else {
        const auto k = rng.below(static_cast<std::uint32_t>(n_free));
        v = free[k];
        free[k] = free[--n_free];
      }
      pool = pool.without(v);
      g[cell.row][cell.col] = v;
    }
    return count_d(g, pool);
  }

  /// Sum over every c-filling of the d-completions of prefix `p`, with the
  /// first `pinned.size()` c-cells fixed to the given values. Without pins
  /// this is the exact number of normalized squares extending the prefix.
  std::uint64_t exhaustive_total(const Prefix<N>& p, std::span<const int> pinned = {}) const {
    Grid g = start_grid(p);
    const auto plan = FillPlan<N>::cells();
    std::uint64_t total = 0;
    auto rec = [&](auto&& self, std::size_t k, NumberSet pool) -> void {
      if (k == plan.size()) {
        total += count_d(g, pool);
        return;
      }
      const auto& cell = plan[k];
      if (cell.forced) {
        const int v = detail::forced_value<N>(g, cell.row, cell.col);
        if (v < 1 || v > kParams.cells() || !pool.contains(v)) return;
        if (k < pinned.size() && pinned[k] != v) return;
        g[cell.row][cell.col] = v;
        self(self, k + 1, pool.without(v));
        return;
      }
      if (k < pinned.size()) {
        const int v = pinned[k];
        if (!pool.contains(v)) return;
        g[cell.row][cell.col] = v;
        self(self, k + 1, pool.without(v));
        return;
      }
      for (int v : pool.members()) {
        g[cell.row][cell.col] = v;
        self(self, k + 1, pool.without(v));
      }
    };
    rec(rec, 0, p.remaining());
    return total;
  }

  static Grid start_grid(const Prefix<N>& p) {
    Grid g{};
    for (int j = 0; j < N; ++j) g[0][j] = p.a[j];
    for (int i = 1; i < N; ++i) g[i][0] = p.b[i - 1];
    return g;
  }

  /// Exact number of fillings of rows 3.. x columns 2.. by `pool`.
  static std::uint64_t count_d(const Grid& g, NumberSet pool) {
    constexpr int z = kParams.magic_constant;
    constexpr int R = N - 3;
    constexpr int C = N - 2;
    std::array<int, R> rows{};
    std::array<int, C> cols{};
    for (int i = 0; i < R; ++i) rows[i] = z - g[i + 3][0] - g[i + 3][1];
    for (int j = 0; j < C; ++j) cols[j] = z - g[0][j + 2] - g[1][j + 2] - g[2][j + 2];
    if constexpr (N == 6)
      return count_block_fillings_3x4(pool, rows, cols);
    else
      return count_block_fillings<R, C>(pool, rows, cols);
  }

 private:
  std::vector<NumberSet> with_one_;
  std::vector<std::array<std::uint8_t, N>> members_;
  std::vector<PrefixRef> prefixes_;
};

/// Point estimate and 3-sigma interval from the measured xi values.
template <int N>
EstimateReport summarize(std::span<const std::uint64_t> xi, std::uint64_t seed) {
  EstimateReport r;
  r.samples = xi.size();
  r.seed = seed;
  for (auto x : xi) {
    r.sum += x;
    r.sum_squares += static_cast<unsigned __int128>(x) * x;
  }
  const auto n = static_cast<long double>(r.samples);
  const long double mean = static_cast<long double>(r.sum) / n;
  const long double mean_sq = static_cast<long double>(r.sum_squares) / n;
  const long double var_mean = (mean_sq - mean * mean) / n;
  const long double scale =
      static_cast<long double>(normalized_multiplier<N>()) * static_cast<long double>(probabilistic_factor<N>());
  r.mean = static_cast<double>(mean);
  r.variance = static_cast<double>(var_mean);
  r.estimate = static_cast<double>(scale * mean);
  const long double half = 3.0L * scale * std::sqrt(std::max(var_mean, 0.0L));
  r.ci_low = static_cast<double>(scale * mean - half);
  r.ci_high = static_cast<double>(scale * mean + half);
  return r;
}


/// Runs `samples` independent measures (sample i uses stream (seed, i)) on
/// `threads` workers and reduces them in sample order.
template <int N>
EstimateReport run_estimate(const KnuthEstimator<N>& est, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads = 1) {
  if (samples < 2) throw std::invalid_argument("run_estimate needs at least 2 samples");
  std::vector<std::uint64_t> xi(samples, 0);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < samples;) {
      SampleStream rng(seed, i);
      xi[i] = est.measure(rng);
    }
  };
  threads = std::max(1U, threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  return summarize<N>(xi, seed);
}

}  // namespace hexacount
