#pragma once

// Branch-free sorting networks for the tiny fixed-size arrays of column sums.

#include <algorithm>
#include <array>
#include <cstdint>

namespace hexacount {

namespace detail {

template <typename T>
inline void compare_exchange(T& a, T& b) {
  const T lo = std::min(a, b);
  const T hi = std::max(a, b);
  a = lo;
  b = hi;
}

}  // namespace detail

/// 12 comparators in 5 layers, on six scalars. Written on plain values so
/// that loops calling it over many independent inputs vectorize.
template <typename T>
inline void sort6_values(T& v0, T& v1, T& v2, T& v3, T& v4, T& v5) {
  using detail::compare_exchange;
  compare_exchange(v0, v5);
  compare_exchange(v1, v3);
  compare_exchange(v2, v4);

  compare_exchange(v1, v2);
  compare_exchange(v3, v4);

  compare_exchange(v0, v3);
  compare_exchange(v2, v5);

  compare_exchange(v0, v1);
  compare_exchange(v2, v3);
  compare_exchange(v4, v5);

  compare_exchange(v1, v2);
  compare_exchange(v3, v4);
}

template <typename T>
inline void sort6(std::array<T, 6>& v) {
  sort6_values(v[0], v[1], v[2], v[3], v[4], v[5]);
}

template <typename T>
inline void sort4(std::array<T, 4>& v) {
  using detail::compare_exchange;
  compare_exchange(v[0], v[1]);
  compare_exchange(v[2], v[3]);
  compare_exchange(v[0], v[2]);
  compare_exchange(v[1], v[3]);
  compare_exchange(v[1], v[2]);
}

template <typename T, std::size_t K>
inline void sort_small(std::array<T, K>& v) {
  if constexpr (K == 6) {
    sort6(v);
  } else if constexpr (K == 4) {
    sort4(v);
  } else {
    std::sort(v.begin(), v.end());
  }
}

}  // namespace hexacount
