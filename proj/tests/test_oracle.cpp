#include <gtest/gtest.h>

#include <set>

#include "hexacount/hexacount.hpp"

using namespace hexacount;

TEST(Oracle, OrderThree) {
  const auto c = brute_force_counts(3);
  EXPECT_EQ(c.semi_magic, 9U);
  EXPECT_EQ(c.magic, 1U);
  EXPECT_EQ(c.panmagic, 0U);
  EXPECT_EQ(c.raw_semi_magic, 72U);
  EXPECT_EQ(c.self_symmetric, 0U);
}

TEST(Oracle, OrderFour) {
  const auto c = brute_force_counts(4);
  EXPECT_EQ(c.semi_magic, 68688U);
  EXPECT_EQ(c.magic, 880U);
  EXPECT_EQ(c.panmagic, 48U);
  EXPECT_EQ(c.raw_semi_magic, 8 * c.semi_magic);
  EXPECT_EQ(c.self_symmetric, 0U);
}

TEST(Oracle, SearchOrderDoesNotMatter) {
  std::vector<int> order(9);
  for (int i = 0; i < 9; ++i) order[i] = 9 - i;
  const auto a = brute_force_counts(3);
  const auto b = brute_force_counts(3, 1, order);
  EXPECT_EQ(a.semi_magic, b.semi_magic);
  EXPECT_EQ(a.magic, b.magic);
  EXPECT_EQ(a.raw_semi_magic, b.raw_semi_magic);
  const auto c = brute_force_counts(3, 3, {5, 1, 9, 2, 8, 3, 7, 4, 6});
  EXPECT_EQ(a.semi_magic, c.semi_magic);
}

TEST(Oracle, RefusesLargeOrders) {
  EXPECT_THROW(brute_force_counts(5), std::invalid_argument);
  EXPECT_THROW(brute_force_class_count(6, NumberSet{}), std::invalid_argument);
}

TEST(Oracle, EnumerateAllOrderThree) {
  const auto all = enumerate_all(3);
  EXPECT_EQ(all.size(), 72U);
  std::size_t magic = 0;
  for (const auto& g : all) {
    EXPECT_TRUE(is_semi_magic(g));
    magic += is_magic(g);
  }
  EXPECT_EQ(magic, 8U);
  EXPECT_EQ(std::set<SquareGrid<3>>(all.begin(), all.end()).size(), 72U);
}

TEST(Oracle, ClassCountsCoverAllCanonicalSquares) {
  const auto& table = canonical_counts_by_class_4();
  std::uint64_t total = 0;
  for (const auto& [m, n] : table) total += n;
  // each canonical square stands for (4!)^2 squares, 8 per dihedral orbit
  EXPECT_EQ(total * 576, 68688U * 8);
  EXPECT_EQ(brute_force_class_count(4, NumberSet::range(1, 8)), 0U);
}

TEST(Oracle, CompletionsOfAFullSquare) {
  auto g = SquareGrid<3>::parse("2 7 6 9 5 1 4 3 8");
  EXPECT_EQ(count_completions(g), 1U);
  g(2, 2) = 0;
  g(2, 1) = 0;
  g(1, 1) = 0;
  g(1, 2) = 0;
  EXPECT_GE(count_completions(g), 1U);
  g(1, 2) = 1;
  EXPECT_THROW(count_completions(g), std::invalid_argument);
}
