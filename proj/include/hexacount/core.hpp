#pragma once

// Order parameters, 36-bit number sets and square grids shared by every
// other header of the library.

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hexacount {

/// Raised when an internal counting invariant is violated (histogram
/// overflow, inconsistent intermediate state).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subset of {1..36}; bit (i-1) set means number i is a member.
class NumberSet {
 public:
  using mask_type = std::uint64_t;
  static constexpr int kCapacity = 36;
  static constexpr mask_type kValidBits = (mask_type{1} << kCapacity) - 1;

  constexpr NumberSet() = default;
  constexpr explicit NumberSet(mask_type bits) : bits_(bits) {}

  static constexpr NumberSet of(std::initializer_list<int> values) {
    NumberSet s;
    for (int v : values) s = s.with(v);
    return s;
  }

  /// {lo, lo+1, ..., hi}; empty when hi < lo.
  static constexpr NumberSet range(int lo, int hi) {
    NumberSet s;
    for (int v = lo; v <= hi; ++v) s = s.with(v);
    return s;
  }

  static constexpr NumberSet single(int v) { return NumberSet{mask_type{1} << (v - 1)}; }

  [[nodiscard]] constexpr mask_type bits() const { return bits_; }
  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  [[nodiscard]] constexpr int size() const { return std::popcount(bits_); }
  [[nodiscard]] constexpr bool contains(int v) const { return (bits_ >> (v - 1)) & 1U; }
  [[nodiscard]] constexpr NumberSet with(int v) const { return NumberSet{bits_ | (mask_type{1} << (v - 1))}; }
  [[nodiscard]] constexpr NumberSet without(int v) const { return NumberSet{bits_ & ~(mask_type{1} << (v - 1))}; }
  [[nodiscard]] constexpr bool subset_of(NumberSet other) const { return (bits_ & ~other.bits_) == 0; }
  [[nodiscard]] constexpr bool disjoint(NumberSet other) const { return (bits_ & other.bits_) == 0; }

  [[nodiscard]] constexpr int sum() const {
    int total = 0;
    for (mask_type b = bits_; b != 0; b &= b - 1) total += std::countr_zero(b) + 1;
    return total;
  }

  /// Smallest member. Precondition: nonempty.
  [[nodiscard]] constexpr int min_element() const { return std::countr_zero(bits_) + 1; }
  [[nodiscard]] constexpr int max_element() const { return 64 - std::countl_zero(bits_); }

  [[nodiscard]] std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (mask_type b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  constexpr NumberSet operator|(NumberSet o) const { return NumberSet{bits_ | o.bits_}; }
  constexpr NumberSet operator&(NumberSet o) const { return NumberSet{bits_ & o.bits_}; }
  constexpr NumberSet operator-(NumberSet o) const { return NumberSet{bits_ & ~o.bits_}; }
  constexpr NumberSet operator^(NumberSet o) const { return NumberSet{bits_ ^ o.bits_}; }
  constexpr auto operator<=>(const NumberSet&) const = default;

  /// Nine lowercase hex digits of the mask.
  [[nodiscard]] std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(9, '0');
    mask_type b = bits_;
    for (int i = 8; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = kDigits[b & 0xF];
      b >>= 4;
    }
    return out;
  }

  static NumberSet from_hex(std::string_view text) {
    mask_type value = 0;
    if (text.size() != 9) throw std::invalid_argument("number set hex must have 9 digits: '" + std::string(text) + "'");
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (ec != std::errc{} || ptr != text.data() + text.size() || (value & ~kValidBits) != 0)
      throw std::invalid_argument("malformed number set hex: '" + std::string(text) + "'");
    return NumberSet{value};
  }

  /// "{1,2,3}" form.
  [[nodiscard]] std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (int v : members()) {
      if (!first) out += ',';
      out += std::to_string(v);
      first = false;
    }
    return out + "}";
  }

 private:
  mask_type bits_ = 0;
};

/// Mask holding only the lowest member of `s`. Comparing two such masks
/// orders sets by their minimal element.
constexpr NumberSet min_mask(NumberSet s) {
  if (s.empty()) throw std::domain_error("min_mask of an empty set");
  const auto mask = s.bits();
  return NumberSet{(mask & (mask - 1)) ^ mask};
}

constexpr int set_sum(NumberSet s) { return s.sum(); }

struct OrderParams {
  int n = 0;
  int magic_constant = 0;
  int half_rows = 0;
  int half_sum = 0;
  NumberSet universe;

  [[nodiscard]] constexpr int cells() const { return n * n; }
  [[nodiscard]] constexpr bool even() const { return n % 2 == 0; }

  /// Supported orders are 3..6; odd orders only serve predicates and the oracle.
  static constexpr OrderParams of(int n) {
    if (n < 3 || n > 6) throw std::invalid_argument("unsupported order " + std::to_string(n) + " (expected 3..6)");
    OrderParams p;
    p.n = n;
    p.magic_constant = n * (n * n + 1) / 2;
    p.half_rows = n / 2;
    p.half_sum = p.half_rows * p.magic_constant;
    p.universe = NumberSet::range(1, n * n);
    return p;
  }
};

template <int N>
inline constexpr OrderParams kOrder = OrderParams::of(N);

template <int N>
concept EvenOrder = (N == 4 || N == 6);

/// n x n arrangement of integers, zero-based (row, col) indexing.
template <int N>
class SquareGrid {
 public:
  static constexpr int kSize = N;
  using Rows = std::array<std::array<int, N>, N>;

  constexpr SquareGrid() = default;
  constexpr explicit SquareGrid(const Rows& rows) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) cells_[idx(i, j)] = rows[i][j];
  }

  /// Row-major list of n*n values.
  static SquareGrid from_values(const std::vector<int>& values) {
    if (values.size() != static_cast<std::size_t>(N * N))
      throw std::invalid_argument("grid needs " + std::to_string(N * N) + " values, got " + std::to_string(values.size()));
    SquareGrid g;
    std::copy(values.begin(), values.end(), g.cells_.begin());
    return g;
  }

  constexpr int operator()(int r, int c) const { return cells_[idx(r, c)]; }
  constexpr int& operator()(int r, int c) { return cells_[idx(r, c)]; }

  [[nodiscard]] constexpr int row_sum(int r) const {
    int s = 0;
    for (int j = 0; j < N; ++j) s += (*this)(r, j);
    return s;
  }
  [[nodiscard]] constexpr int col_sum(int c) const {
    int s = 0;
    for (int i = 0; i < N; ++i) s += (*this)(i, c);
    return s;
  }
  [[nodiscard]] constexpr int row_min(int r) const {
    int m = (*this)(r, 0);
    for (int j = 1; j < N; ++j) m = std::min(m, (*this)(r, j));
    return m;
  }

  [[nodiscard]] NumberSet row_set(int r) const {
    NumberSet s;
    for (int j = 0; j < N; ++j) s = s.with((*this)(r, j));
    return s;
  }

  /// True when the cells are exactly 1..n*n, each once.
  [[nodiscard]] constexpr bool is_permutation() const {
    std::array<bool, N * N + 1> seen{};
    for (int v : cells_) {
      if (v < 1 || v > N * N || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  [[nodiscard]] constexpr SquareGrid transposed() const {
    SquareGrid t;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Row i of the result is row perm[i] of this grid.
  [[nodiscard]] constexpr SquareGrid permute_rows(const std::array<int, N>& perm) const {
    SquareGrid t;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t(i, j) = (*this)(perm[i], j);
    return t;
  }

  /// Column j of the result is column perm[j] of this grid.
  [[nodiscard]] constexpr SquareGrid permute_cols(const std::array<int, N>& perm) const {
    SquareGrid t;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t(i, j) = (*this)(i, perm[j]);
    return t;
  }

  [[nodiscard]] constexpr const std::array<int, N * N>& cells() const { return cells_; }

  constexpr auto operator<=>(const SquareGrid&) const = default;

  /// n lines of n space-separated integers.
  [[nodiscard]] std::string to_string() const {
    std::string out;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (j) out += ' ';
        out += std::to_string((*this)(i, j));
      }
      out += '\n';
    }
    return out;
  }

  static SquareGrid parse(std::istream& in) {
    std::vector<int> values;
    values.reserve(N * N);
    int v = 0;
    while (static_cast<int>(values.size()) < N * N && in >> v) values.push_back(v);
    if (static_cast<int>(values.size()) != N * N)
      throw std::invalid_argument("grid text ended after " + std::to_string(values.size()) + " values");
    auto g = from_values(values);
    if (!g.is_permutation()) throw std::invalid_argument("grid is not a permutation of 1.." + std::to_string(N * N));
    return g;
  }

  static SquareGrid parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
  }

 private:
  static constexpr std::size_t idx(int r, int c) { return static_cast<std::size_t>(r * N + c); }
  std::array<int, N * N> cells_{};
};

/// All permutations of 0..K-1 in lexicographic order.
template <int K>
std::vector<std::array<std::uint8_t, K>> all_permutations() {
  std::array<std::uint8_t, K> p{};
  for (int i = 0; i < K; ++i) p[i] = static_cast<std::uint8_t>(i);
  std::vector<std::array<std::uint8_t, K>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

constexpr std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace hexacount
