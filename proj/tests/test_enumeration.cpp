#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hexacount/hexacount.hpp"
#include "support.hpp"

using namespace hexacount;
using namespace hexacount::testing;

namespace {

const std::vector<NumberSet>& series6() {
  static const auto s = generate_series<6>();
  return s;
}

const std::vector<NumberSet>& series4() {
  static const auto s = generate_series<4>();
  return s;
}

// Straightforward split search over nested loops.
template <int N>
std::vector<std::array<NumberSet, N / 2>> naive_splits(NumberSet m, HalfSide side, const std::vector<NumberSet>& series) {
  std::vector<std::array<NumberSet, N / 2>> out;
  const int limit = (kOrder<N>.universe - m).empty() ? 1000 : (kOrder<N>.universe - m).min_element();
  std::array<NumberSet, N / 2> rows{};
  auto rec = [&](auto&& self, int r, NumberSet rest) -> void {
    if (r == N / 2) {
      if (!rest.empty()) return;
      for (int k = 1; k < N / 2; ++k)
        if (rows[k].min_element() <= rows[k - 1].min_element()) return;
      if (side == HalfSide::upper && rows[N / 2 - 1].min_element() >= limit) return;
      out.push_back(rows);
      return;
    }
    for (auto s : series) {
      if (!s.subset_of(rest)) continue;
      if (s.min_element() != rest.min_element()) continue;
      rows[r] = s;
      self(self, r + 1, rest - s);
    }
  };
  rec(rec, 0, m);
  return out;
}

template <int N>
bool naive_admissible(NumberSet m, const std::vector<NumberSet>& series) {
  if (m.size() != N * N / 2 || m.sum() != kOrder<N>.half_sum) return false;
  return !naive_splits<N>(m, HalfSide::upper, series).empty() &&
         !naive_splits<N>(kOrder<N>.universe - m, HalfSide::lower, series).empty();
}

NumberSet upper_set(const SquareGrid<6>& c) {
  NumberSet m;
  for (int i = 0; i < 3; ++i) m = m | c.row_set(i);
  return m;
}

}  // namespace

TEST(Series, CountsOrderSix) {
  EXPECT_EQ(series6().size(), 32134U);
  std::size_t with_one = 0;
  for (auto s : series6()) with_one += s.contains(1);
  EXPECT_EQ(with_one, 4739U);
  for (auto s : series6()) ASSERT_TRUE(is_series<6>(s));
  EXPECT_TRUE(std::is_sorted(series6().begin(), series6().end()));
}

TEST(Series, OrderThree) {
  const auto s = generate_series<3>();
  EXPECT_EQ(s.size(), 8U);
  std::set<NumberSet> ones;
  for (auto x : s)
    if (x.contains(1)) ones.insert(x);
  EXPECT_EQ(ones, (std::set<NumberSet>{NumberSet::of({1, 5, 9}), NumberSet::of({1, 6, 8})}));
}

TEST(HalfSets, DynamicProgramming) {
  EXPECT_EQ(count_half_sets(6), 113093022U);
  EXPECT_EQ(count_half_sets(2), 2U);
  std::uint64_t scan = 0;
  for (std::uint32_t b = 0; b < (1U << 16); ++b)
    if (std::popcount(b) == 8 && NumberSet{b}.sum() == 68) ++scan;
  EXPECT_EQ(count_half_sets(4), scan);
  EXPECT_THROW(count_half_sets(5), std::invalid_argument);
}

TEST(RestrictSeries, Basics) {
  EXPECT_EQ(restrict_series(series6(), kOrder<6>.universe), series6());
  EXPECT_TRUE(restrict_series(series6(), NumberSet::range(1, 5)).empty());
  const NumberSet m0 = NumberSet::range(1, 9) | NumberSet::range(28, 36);
  const auto pool = restrict_series(series6(), m0);
  std::size_t direct = 0;
  for (auto s : series6()) direct += s.subset_of(m0);
  EXPECT_EQ(pool.size(), direct);
  const std::set<NumberSet> in_pool(pool.begin(), pool.end());
  for (const auto& p : partitions_of<6>(m0, HalfSide::upper, series6()))
    for (auto r : p.rows) EXPECT_TRUE(in_pool.count(r));
}

TEST(Partitions, MatchNaiveSearch) {
  std::mt19937_64 rng(21);
  const KnuthEstimator<6> est;
  for (int it = 0; it < 100; ++it) {
    const NumberSet m = upper_set(canonicalize(random_semi_magic(est, rng)));
    for (auto side : {HalfSide::upper, HalfSide::lower}) {
      const NumberSet half = side == HalfSide::upper ? m : kOrder<6>.universe - m;
      const auto got = partitions_of<6>(half, side, series6());
      const auto want = naive_splits<6>(half, side, series6());
      std::set<std::array<NumberSet, 3>> seen;
      for (const auto& p : got) {
        ASSERT_EQ(p.members(), half);
        ASSERT_TRUE(seen.insert(p.rows).second) << "duplicate partition";
      }
      ASSERT_EQ(seen, (std::set<std::array<NumberSet, 3>>(want.begin(), want.end())));
      ASSERT_FALSE(got.empty());
    }
  }
}

TEST(Partitions, NoSplitGivesEmpty) {
  // sum-valid half-sets that are not classes have a side without splits
  std::mt19937_64 rng(23);
  std::vector<int> v(36);
  std::iota(v.begin(), v.end(), 1);
  int seen = 0;
  while (seen < 20) {
    std::shuffle(v.begin(), v.end(), rng);
    NumberSet m;
    for (int i = 0; i < 18; ++i) m = m.with(v[i]);
    if (m.sum() != 333 || is_admissible<6>(m, series6())) continue;
    ++seen;
    const bool up = partitions_of<6>(m, HalfSide::upper, series6()).empty();
    const bool low = partitions_of<6>(kOrder<6>.universe - m, HalfSide::lower, series6()).empty();
    EXPECT_TRUE(up || low);
  }
}

TEST(Admissible, CatalogEndpoints) {
  EXPECT_TRUE(is_admissible<6>(NumberSet::range(1, 9) | NumberSet::range(28, 36), series6()));
  EXPECT_TRUE(is_admissible<6>(NumberSet::range(1, 3) | NumberSet::range(14, 16) | NumberSet::range(18, 29), series6()));
  EXPECT_FALSE(is_admissible<6>(NumberSet::range(1, 17), series6()));
}

TEST(Admissible, SampledOrderSixAgainstNaive) {
  std::mt19937_64 rng(22);
  std::vector<int> v(36);
  std::iota(v.begin(), v.end(), 1);
  int rejected = 0;
  int accepted = 0;
  while (rejected < 1000) {
    std::shuffle(v.begin(), v.end(), rng);
    NumberSet m;
    for (int i = 0; i < 18; ++i) m = m.with(v[i]);
    if (m.sum() != 333) continue;
    const bool a = is_admissible<6>(m, series6());
    ASSERT_EQ(a, naive_admissible<6>(m, series6())) << m.to_string();
    (a ? accepted : rejected)++;
  }
  EXPECT_GT(accepted, 0);
}

TEST(Catalog, OrderFourExhaustive) {
  const auto cat = generate_classes<4>();
  EXPECT_EQ(cat.order, 4);
  const std::set<NumberSet> in_cat(cat.classes.begin(), cat.classes.end());
  std::size_t admissible = 0;
  for (std::uint32_t b = 0; b < (1U << 16); ++b) {
    const NumberSet m{b};
    if (m.size() != 8 || m.sum() != 68) continue;
    const bool a = is_admissible<4>(m, series4());
    ASSERT_EQ(a, naive_admissible<4>(m, series4()));
    ASSERT_EQ(a, in_cat.count(m) == 1) << m.to_string();
    if (!a) {
      ASSERT_EQ(brute_force_class_count(4, m), 0U);
    }
    admissible += a;
  }
  EXPECT_EQ(admissible, cat.size());
  for (std::size_t i = 1; i < cat.size(); ++i) ASSERT_GT(catalog_key(cat.classes[i - 1]), catalog_key(cat.classes[i]));
}

TEST(Catalog, OrderSixStartAndResume) {
  std::vector<NumberSet> first;
  ClassGenerator<6> gen(series6());
  EXPECT_FALSE(gen.run([&](NumberSet m) {
    first.push_back(m);
    return first.size() < 300;
  }));
  ASSERT_EQ(first.size(), 300U);
  EXPECT_EQ(first[0], NumberSet::range(1, 9) | NumberSet::range(28, 36));
  for (std::size_t i = 0; i < first.size(); ++i) {
    ASSERT_TRUE(is_admissible<6>(first[i], series6()));
    if (i) {
      ASSERT_GT(catalog_key(first[i - 1]), catalog_key(first[i]));
    }
  }
  // resuming after entry 149 reproduces entries 150..299
  std::vector<NumberSet> rest;
  gen.run(
      [&](NumberSet m) {
        rest.push_back(m);
        return rest.size() < 150;
      },
      first[149]);
  EXPECT_EQ(rest, std::vector<NumberSet>(first.begin() + 150, first.end()));
}

TEST(Catalog, Jobs) {
  EXPECT_EQ(ClassCatalog::job_of(100), 0);
  EXPECT_EQ(ClassCatalog::job_of(9366137), 37);
  EXPECT_EQ(ClassCatalog::job_of(428467), 67);
}
