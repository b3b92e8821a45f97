#pragma once

// Meet-in-the-middle counting of the canonical squares of one class.
//
// For a class m every upper partition (rows in increasing-minimum order,
// first row written ascending) yields (n!)^(n/2-1) upper halves, one per
// arrangement of the remaining rows. Each half is reduced to its profile,
// the ascending column sums, and counted in a histogram. Every count is
// then multiplied by the symmetry factor of its profile. Lower halves of the
// complement are enumerated the same way with profile entries Z - column
// sum, and every lower half contributes the histogram value of its profile.

#include <algorithm>
#include <bit>
#include <chrono>
#include <exception>
#include <stdexcept>
#include <thread>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hexacount/core.hpp"
#include "hexacount/enumeration.hpp"
#include "hexacount/histogram.hpp"
#include "hexacount/profile.hpp"
#include "hexacount/sort_network.hpp"

namespace hexacount {

struct CountOptions {
  bool batching = false;  // sort queries by slot region first; same result
  int hash_bits = ProfileHistogram::kDefaultHashBits;
};

struct ClassResult {
  std::int64_t class_id = -1;
  NumberSet mask;
  std::uint64_t count = 0;
  std::int64_t millis = 0;
  std::string run_tag;
};

struct ClassDiagnostics {
  std::size_t upper_partitions = 0;
  std::size_t lower_partitions = 0;
  std::uint64_t upper_halves = 0;  // histogram total before the factor step
  std::uint32_t max_before_factor = 0;
  std::uint32_t max_after_factor = 0;
  std::size_t highest_slot = 0;
  std::size_t distinct_profiles = 0;
};

namespace detail {

template <int N>
std::array<std::uint8_t, N> sorted_members(NumberSet s) {
  std::array<std::uint8_t, N> out{};
  int k = 0;
  for (auto b = s.bits(); b != 0; b &= b - 1) out[k++] = static_cast<std::uint8_t>(std::countr_zero(b) + 1);
  return out;
}

}  // namespace detail

/// Ascending column sums of a half given as n/2 rows; for the lower side
/// the entries are Z - column sum. Also returns the column order that sorts
/// the half: upper ties by top entry, lower ties by top (first lower row)
/// entry.
template <int N>
std::pair<Profile<N>, std::array<int, N>> profile_of_half(const std::array<std::array<int, N>, N / 2>& rows,
                                                          HalfSide side) {
  constexpr int z = kOrder<N>.magic_constant;
  std::array<int, N> sums{};
  for (int j = 0; j < N; ++j) {
    int s = 0;
    for (const auto& r : rows) s += r[j];
    sums[j] = side == HalfSide::upper ? s : z - s;
  }
  std::array<int, N> order{};
  for (int j = 0; j < N; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return sums[a] != sums[b] ? sums[a] < sums[b] : rows[0][a] < rows[0][b];
  });
  Profile<N> p{};
  for (int j = 0; j < N; ++j) p[j] = static_cast<std::uint8_t>(sums[order[j]]);
  return {p, order};
}

/// Per-worker counting state; owns one histogram, reused across classes.
template <int N>
  requires EvenOrder<N>
class ClassCounter {
 public:
  static constexpr OrderParams kParams = kOrder<N>;
  static constexpr int kHalfRows = N / 2;
  using Perm = std::array<std::uint8_t, N>;

  explicit ClassCounter(std::vector<NumberSet> series, CountOptions options = {})
      : series_(std::move(series)), options_(options), table_(options.hash_bits), perms_(all_permutations<N>()) {
    std::uint64_t per_partition = 1;
    for (int r = 1; r < kHalfRows; ++r) per_partition *= perms_.size();
    keys_.reserve(per_partition);
    sorted_.reserve(per_partition);
  }

  explicit ClassCounter(CountOptions options = {}) : ClassCounter(generate_series<N>(), options) {}

  [[nodiscard]] static constexpr std::uint64_t halves_per_partition() {
    std::uint64_t v = 1;
    for (int r = 1; r < kHalfRows; ++r) v *= factorial(N);
    return v;
  }

  ClassResult count(NumberSet m, std::int64_t class_id = -1) {
    const auto start = std::chrono::steady_clock::now();
    begin(m);

    // steps 1-2: upper halves into the histogram
    const auto upper = partitions_of<N>(m, HalfSide::upper, series_);
    diag_.upper_partitions = upper.size();
    for (const auto& part : upper) add_upper(part);

    // step 3: symmetry factors
    apply_factors();

    // steps 4-5: lower halves of the complement look up matching profiles
    const auto lower = partitions_of<N>(kParams.universe - m, HalfSide::lower, series_);
    diag_.lower_partitions = lower.size();
    std::uint64_t total = 0;
    for (const auto& part : lower) total += lower_sum(part, table_);

    return finish(class_id, total, start);
  }

  // Building blocks of count(), also used to split one class over workers.

  void begin(NumberSet m) {
    diag_ = {};
    mask_ = m;
    table_.clear();
  }

  void add_upper(const Partition<N>& part) {
    fill_keys(part, HalfSide::upper);
    table_.add_all(queries());
    diag_.upper_halves += halves_per_partition();
  }

  /// Adds the (pre-factor) histogram of another worker into this one.
  void absorb(const ClassCounter& other) {
    other.table_.for_each([&](const ProfileHistogram::Slot& slot) { table_.add(slot.key, slot.count); });
    diag_.upper_halves += other.diag_.upper_halves;
  }

  /// Multiplies every count by f(p), with an explicit 32-bit overflow check.
  void apply_factors() {
    table_.for_each([&](ProfileHistogram::Slot& slot) {
      diag_.max_before_factor = std::max(diag_.max_before_factor, slot.count);
      const std::uint64_t scaled = std::uint64_t{slot.count} * symmetry_factor<N>(decode_profile<N>(slot.key));
      if (scaled > std::numeric_limits<std::uint32_t>::max())
        throw InvariantError("histogram value overflow for class " + mask_.to_hex() + ": " +
                             std::to_string(slot.count) + " * f(p) exceeds 32 bits");
      slot.count = static_cast<std::uint32_t>(scaled);
      diag_.max_after_factor = std::max(diag_.max_after_factor, slot.count);
      ++diag_.distinct_profiles;
    });
    diag_.highest_slot = table_.highest_slot();
  }

  /// Histogram values of the profiles of every half of a lower partition.
  std::uint64_t lower_sum(const Partition<N>& part, const ProfileHistogram& table) {
    fill_keys(part, HalfSide::lower);
    return table.sum_found(queries());
  }

  ClassResult finish(std::int64_t class_id, std::uint64_t total, std::chrono::steady_clock::time_point start) const {
    ClassResult r;
    r.class_id = class_id;
    r.mask = mask_;
    r.count = total;
    r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return r;
  }

  ClassDiagnostics& mutable_diagnostics() { return diag_; }

  [[nodiscard]] const ClassDiagnostics& diagnostics() const { return diag_; }
  [[nodiscard]] const ProfileHistogram& histogram() const { return table_; }
  [[nodiscard]] const CountOptions& options() const { return options_; }
  [[nodiscard]] const std::vector<NumberSet>& series() const { return series_; }

  /// Profile keys of every half of one partition, in arrangement order
  /// (rows 2.. of the half permuted lexicographically).
  const std::vector<std::uint32_t>& half_keys(const Partition<N>& part, HalfSide side) {
    fill_keys(part, side);
    return keys_;
  }

 private:
  std::span<const std::uint32_t> queries() {
    if (!options_.batching) return keys_;
    batch_queries(keys_, sorted_, options_.hash_bits, bucket_counts_);
    return sorted_;
  }

  void fill_keys(const Partition<N>& part, HalfSide side) {
    keys_.clear();
    const auto top = detail::sorted_members<N>(part.rows[0]);
    const auto second = detail::sorted_members<N>(part.rows[1]);
    if constexpr (kHalfRows == 2) {
      for (const Perm& pi : perms_) {
        Profile<N> s{};
        for (int j = 0; j < N; ++j) s[j] = column_value(top[j] + second[pi[j]], side);
        sort_small(s);
        keys_.push_back(encode_profile_unchecked<N>(s));
      }
    } else {
      static_assert(kHalfRows == 3);
      const auto third = detail::sorted_members<N>(part.rows[2]);
      // third-row values per column, laid out per arrangement so the inner
      // loop runs over arrangements and vectorizes
      for (std::size_t a = 0; a < perms_.size(); ++a)
        for (int j = 0; j < N; ++j) third_by_column_[j][a] = third[perms_[a][j]];
      keys_.resize(perms_.size() * perms_.size());
      std::array<std::uint8_t, N> partial{};
      std::uint32_t* out = keys_.data();
      for (const Perm& pi : perms_) {
        for (int j = 0; j < N; ++j) partial[j] = static_cast<std::uint8_t>(top[j] + second[pi[j]]);
        if (side == HalfSide::upper)
          emit_third_row<false>(partial, out);
        else
          emit_third_row<true>(partial, out);
        out += perms_.size();
      }
    }
  }

  template <bool Lower>
  void emit_third_row(const std::array<std::uint8_t, N>& partial, std::uint32_t* out) const
    requires(N == 6)
  {
    constexpr auto z = static_cast<std::uint8_t>(kParams.magic_constant);
    constexpr auto r = profile_radices<N>();
    const std::size_t count = perms_.size();
    std::array<std::uint8_t, N> base{};
    for (int j = 0; j < N; ++j) base[j] = Lower ? static_cast<std::uint8_t>(z - partial[j]) : partial[j];
    const auto* t0 = third_by_column_[0].data();
    const auto* t1 = third_by_column_[1].data();
    const auto* t2 = third_by_column_[2].data();
    const auto* t3 = third_by_column_[3].data();
    const auto* t4 = third_by_column_[4].data();
    const auto* t5 = third_by_column_[5].data();
    for (std::size_t a = 0; a < count; ++a) {
      std::uint8_t v0, v1, v2, v3, v4, v5;
      if constexpr (Lower) {
        v0 = static_cast<std::uint8_t>(base[0] - t0[a]);
        v1 = static_cast<std::uint8_t>(base[1] - t1[a]);
        v2 = static_cast<std::uint8_t>(base[2] - t2[a]);
        v3 = static_cast<std::uint8_t>(base[3] - t3[a]);
        v4 = static_cast<std::uint8_t>(base[4] - t4[a]);
        v5 = static_cast<std::uint8_t>(base[5] - t5[a]);
      } else {
        v0 = static_cast<std::uint8_t>(base[0] + t0[a]);
        v1 = static_cast<std::uint8_t>(base[1] + t1[a]);
        v2 = static_cast<std::uint8_t>(base[2] + t2[a]);
        v3 = static_cast<std::uint8_t>(base[3] + t3[a]);
        v4 = static_cast<std::uint8_t>(base[4] + t4[a]);
        v5 = static_cast<std::uint8_t>(base[5] + t5[a]);
      }
      sort6_values(v0, v1, v2, v3, v4, v5);
      std::uint32_t k = v4;
      k = k * r[3] + v3;
      k = k * r[2] + v2;
      k = k * r[1] + v1;
      k = k * r[0] + v0;
      out[a] = k;
    }
  }

  static std::uint8_t column_value(int col, HalfSide side) {
    return static_cast<std::uint8_t>(side == HalfSide::upper ? col : kParams.magic_constant - col);
  }

  std::vector<NumberSet> series_;
  CountOptions options_;
  ProfileHistogram table_;
  std::vector<Perm> perms_;
  std::vector<std::uint32_t> keys_;
  std::vector<std::uint32_t> sorted_;
  std::vector<std::uint32_t> bucket_counts_;
  std::array<std::array<std::uint8_t, factorial(N)>, N> third_by_column_{};
  ClassDiagnostics diag_;
  NumberSet mask_;
};

/// Counts one class with workers.size() threads: upper partitions are
/// spread over the workers' own histograms, merged into the first, and the
/// lower lookups are spread again. The result does not depend on the number
/// of workers.
template <int N>
  requires EvenOrder<N>
ClassResult count_class_parallel(std::span<ClassCounter<N>> workers, NumberSet m, std::int64_t class_id = -1) {
  if (workers.empty()) throw std::invalid_argument("count_class_parallel needs at least one worker");
  if (workers.size() == 1) return workers[0].count(m, class_id);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t t_count = workers.size();
  ClassCounter<N>& main = workers[0];
  const auto& series = main.series();
  const auto upper = partitions_of<N>(m, HalfSide::upper, series);
  const auto lower = partitions_of<N>(kOrder<N>.universe - m, HalfSide::lower, series);

  auto spread = [&](auto&& body) {
    std::vector<std::exception_ptr> errors(t_count);
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 1; t < t_count; ++t)
        pool.emplace_back([&, t] {
          try {
            body(t);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      try {
        body(0);
      } catch (...) {
        errors[0] = std::current_exception();
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  };

  spread([&](std::size_t t) {
    workers[t].begin(m);
    for (std::size_t i = t; i < upper.size(); i += t_count) workers[t].add_upper(upper[i]);
  });
  for (std::size_t t = 1; t < t_count; ++t) main.absorb(workers[t]);
  main.apply_factors();

  std::vector<std::uint64_t> partial(t_count, 0);
  spread([&](std::size_t t) {
    for (std::size_t i = t; i < lower.size(); i += t_count)
      partial[t] += workers[t].lower_sum(lower[i], main.histogram());
  });
  std::uint64_t total = 0;
  for (auto v : partial) total += v;

  auto& d = main.mutable_diagnostics();
  d.upper_partitions = upper.size();
  d.lower_partitions = lower.size();
  return main.finish(class_id, total, start);
}

/// One-shot convenience wrapper; allocates a histogram per call.
template <int N>
  requires EvenOrder<N>
ClassResult count_class(NumberSet m, CountOptions options = {}) {
  ClassCounter<N> counter(options);
  return counter.count(m);
}

}  // namespace hexacount
