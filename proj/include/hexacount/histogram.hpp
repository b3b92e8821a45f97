#pragma once

// Open-addressing profile histogram with linear probing. The home slot is
// the low `hash_bits` bits of the key, shifted by a golden-ratio offset for
// each multiple of the table size in the key; keys close together stay in
// neighbouring slots. Probing never wraps around, it runs into a fixed tail
// instead, and reaching the end of the tail is an error.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexacount/core.hpp"

namespace hexacount {

/// Home slot of `key` in a table of 2^hash_bits slots. Without the offset,
/// order-6 keys one step apart in the last profile entry land almost on the
/// same slots (the radix product is just below 2^25) and pile up.
constexpr std::uint32_t home_slot_of(std::uint32_t key, int hash_bits) {
  const std::uint32_t mask = (std::uint32_t{1} << hash_bits) - 1;
  const std::uint32_t offset = (0x9E3779B1U >> (32 - hash_bits)) | 1U;
  return (key + (key >> hash_bits) * offset) & mask;
}

class ProfileHistogram {
 public:
  static constexpr int kDefaultHashBits = 24;
  static constexpr std::size_t kTail = 1024;
  static constexpr int kBatchBits = 12;

  struct Slot {
    std::uint32_t key = 0;
    std::uint32_t count = 0;  // 0 marks an empty slot
  };

  explicit ProfileHistogram(int hash_bits = kDefaultHashBits)
      : hash_bits_(hash_bits),
        mask_((std::uint32_t{1} << hash_bits) - 1),
        offset_((0x9E3779B1U >> (32 - hash_bits)) | 1U),
        slots_((std::size_t{1} << hash_bits) + kTail) {
    if (hash_bits < kBatchBits || hash_bits > 30) throw std::invalid_argument("hash_bits must be in 12..30");
  }

  [[nodiscard]] int hash_bits() const { return hash_bits_; }
  [[nodiscard]] std::size_t slot_count() const { return slots_.size(); }
  [[nodiscard]] std::uint32_t home_slot(std::uint32_t key) const { return slot_of(key); }

  void clear() {
    std::fill(slots_.begin(), slots_.end(), Slot{});
    highest_slot_ = 0;
  }

  void add(std::uint32_t key) {
    std::size_t i = slot_of(key);
    for (;;) {
      Slot& s = slots_[i];
      if (s.count == 0) {
        s.key = key;
        s.count = 1;
        note_slot(i);
        return;
      }
      if (s.key == key) {
        if (s.count == std::numeric_limits<std::uint32_t>::max()) throw InvariantError("histogram count overflow");
        ++s.count;
        return;
      }
      if (++i == slots_.size()) throw InvariantError("histogram overflow: probe reached the end of the tail");
    }
  }

  /// Adds `count` occurrences of key at once.
  void add(std::uint32_t key, std::uint32_t count) {
    if (count == 0) return;
    std::size_t i = slot_of(key);
    for (;;) {
      Slot& s = slots_[i];
      if (s.count == 0) {
        s.key = key;
        s.count = count;
        note_slot(i);
        return;
      }
      if (s.key == key) {
        if (s.count > std::numeric_limits<std::uint32_t>::max() - count) throw InvariantError("histogram count overflow");
        s.count += count;
        return;
      }
      if (++i == slots_.size()) throw InvariantError("histogram overflow: probe reached the end of the tail");
    }
  }

  [[nodiscard]] std::uint32_t find(std::uint32_t key) const {
    std::size_t i = slot_of(key);
    for (; i < slots_.size(); ++i) {
      const Slot& s = slots_[i];
      if (s.count == 0) return 0;
      if (s.key == key) return s.count;
    }
    return 0;
  }

  /// add() for every key, prefetching the home slots a few keys ahead.
  void add_all(std::span<const std::uint32_t> keys) {
    const std::size_t n = keys.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i + kPrefetchDistance < n) prefetch(keys[i + kPrefetchDistance]);
      add(keys[i]);
    }
  }

  /// Sum of find() over all keys.
  [[nodiscard]] std::uint64_t sum_found(std::span<const std::uint32_t> keys) const {
    const std::size_t n = keys.size();
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + kPrefetchDistance < n) prefetch(keys[i + kPrefetchDistance]);
      total += find(keys[i]);
    }
    return total;
  }

  /// Calls f(Slot&) for every occupied slot.
  template <typename F>
  void for_each(F&& f) {
    for (std::size_t i = 0; i <= highest_slot_ && i < slots_.size(); ++i)
      if (slots_[i].count != 0) f(slots_[i]);
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i <= highest_slot_ && i < slots_.size(); ++i)
      if (slots_[i].count != 0) f(slots_[i]);
  }

  /// Highest slot index ever written since the last clear().
  [[nodiscard]] std::size_t highest_slot() const { return highest_slot_; }

 private:
  static constexpr std::size_t kPrefetchDistance = 16;

  void prefetch(std::uint32_t key) const { __builtin_prefetch(&slots_[slot_of(key)]); }

  [[nodiscard]] std::uint32_t slot_of(std::uint32_t key) const {
    return (key + (key >> hash_bits_) * offset_) & mask_;
  }

  void note_slot(std::size_t i) { highest_slot_ = std::max(highest_slot_, i); }

  int hash_bits_;
  std::uint32_t mask_;
  std::uint32_t offset_;
  std::vector<Slot> slots_;
  std::size_t highest_slot_ = 0;
};

/// Bucket used to batch queries: the top 12 bits of the home slot, so each
/// bucket covers a run of consecutive slots.
inline std::uint32_t batch_bucket(std::uint32_t key, int hash_bits) {
  return home_slot_of(key, hash_bits) >> (hash_bits - ProfileHistogram::kBatchBits);
}

/// Stable counting sort of `keys` by batch bucket into `out`. `counts` is
/// scratch space.
inline void batch_queries(std::span<const std::uint32_t> keys, std::vector<std::uint32_t>& out, int hash_bits,
                          std::vector<std::uint32_t>& counts) {
  constexpr std::size_t kBuckets = std::size_t{1} << ProfileHistogram::kBatchBits;
  counts.assign(kBuckets + 1, 0);
  for (auto k : keys) ++counts[batch_bucket(k, hash_bits) + 1];
  for (std::size_t b = 1; b <= kBuckets; ++b) counts[b] += counts[b - 1];
  out.resize(keys.size());
  for (auto k : keys) out[counts[batch_bucket(k, hash_bits)]++] = k;
}

inline std::vector<std::uint32_t> batch_queries(std::span<const std::uint32_t> keys,
                                                int hash_bits = ProfileHistogram::kDefaultHashBits) {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> counts;
  batch_queries(keys, out, hash_bits, counts);
  return out;
}

}  // namespace hexacount
