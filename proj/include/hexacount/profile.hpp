#pragma once

// Profiles (ascending column sums of a half square) and their mixed-radix
// integer keys.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "hexacount/core.hpp"

namespace hexacount {

template <int N>
using Profile = std::array<std::uint8_t, N>;

/// Radix bounds of the first N-1 profile entries. Entry i (0-based) of an
/// ascending N-tuple with total S is at most S/(N-i), and no column of a half
/// can exceed the sum of the N/2 largest numbers.
template <int N>
constexpr std::array<std::uint32_t, N - 1> profile_radices() {
  constexpr OrderParams p = kOrder<N>;
  int max_column = 0;
  for (int k = 0; k < N / 2; ++k) max_column += p.cells() - k;
  std::array<std::uint32_t, N - 1> r{};
  for (int i = 0; i < N - 1; ++i) r[i] = static_cast<std::uint32_t>(std::min(p.half_sum / (N - i), max_column) + 1);
  return r;
}

template <int N>
constexpr std::uint64_t profile_key_limit() {
  std::uint64_t prod = 1;
  for (auto r : profile_radices<N>()) prod *= r;
  return prod;
}

static_assert(profile_key_limit<6>() == 3541227648ULL);
static_assert(profile_key_limit<6>() < (std::uint64_t{1} << 32));

/// Hot-path encoding; the caller guarantees a valid ascending profile.
template <int N>
inline std::uint32_t encode_profile_unchecked(const Profile<N>& p) {
  constexpr auto r = profile_radices<N>();
  std::uint32_t key = p[N - 2];
  for (int i = N - 3; i >= 0; --i) key = key * r[i] + p[i];
  return key;
}

template <int N>
constexpr bool is_valid_profile(const Profile<N>& p) {
  constexpr auto r = profile_radices<N>();
  int total = 0;
  for (int i = 0; i < N; ++i) {
    total += p[i];
    if (i > 0 && p[i] < p[i - 1]) return false;
    if (i < N - 1 && p[i] >= r[i]) return false;
  }
  return total == kOrder<N>.half_sum;
}

template <int N>
std::uint32_t encode_profile(const Profile<N>& p) {
  if (!is_valid_profile<N>(p)) throw std::invalid_argument("profile out of bounds or not ascending");
  return encode_profile_unchecked<N>(p);
}

/// Inverse of encode_profile; the last entry is recovered from the total.
template <int N>
Profile<N> decode_profile(std::uint32_t key) {
  constexpr auto r = profile_radices<N>();
  if (key >= profile_key_limit<N>()) throw std::invalid_argument("profile key out of range");
  Profile<N> p{};
  int total = 0;
  for (int i = 0; i < N - 1; ++i) {
    p[i] = static_cast<std::uint8_t>(key % r[i]);
    key /= r[i];
    total += p[i];
  }
  const int last = kOrder<N>.half_sum - total;
  if (last < 0 || last > 255) throw std::invalid_argument("profile key decodes to an invalid profile");
  p[N - 1] = static_cast<std::uint8_t>(last);
  return p;
}

/// Product of factorials of the multiplicities of equal entries.
template <int N>
constexpr std::uint32_t symmetry_factor(const Profile<N>& p) {
  std::uint32_t f = 1;
  int run = 1;
  for (int i = 1; i <= N; ++i) {
    if (i < N && p[i] == p[i - 1]) {
      ++run;
      f *= static_cast<std::uint32_t>(run);
    } else {
      run = 1;
    }
  }
  return f;
}

template <int N>
std::string profile_to_string(const Profile<N>& p) {
  std::string out = "(";
  for (int i = 0; i < N; ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out + ")";
}

}  // namespace hexacount
