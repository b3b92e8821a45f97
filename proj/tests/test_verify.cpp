#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hexacount/hexacount.hpp"
#include "support.hpp"

using namespace hexacount;
using namespace hexacount::testing;

namespace {

const CheckItem* find_item(const VerifyReport& r, const std::string& name) {
  for (const auto& i : r.items)
    if (i.name == name) return &i;
  return nullptr;
}

ClassResult row(std::int64_t id, std::uint64_t count, std::string tag = "a") {
  ClassResult r;
  r.class_id = id;
  r.mask = NumberSet{static_cast<std::uint64_t>(id) + 1};
  r.count = count;
  r.run_tag = std::move(tag);
  return r;
}

}  // namespace

TEST(SwapReport, FixturesAreAllClear) {
  const auto squares = swap_free_fixtures();
  ASSERT_EQ(squares.size(), 4U);
  for (const auto& k : squares) {
    ASSERT_TRUE(is_semi_magic(k));
    for (auto e : all_dihedral()) {
      const auto r = swap_report(apply(e, k));
      EXPECT_TRUE(r.all_clear()) << k.to_string();
      EXPECT_EQ(r.pair_configs, 0U);
      EXPECT_EQ(r.triple_configs, 0U);
      EXPECT_EQ(r.cycle_configs, 0U);
    }
  }
}

TEST(SwapReport, PairSwappableOrderFour) {
  // the first order-4 square of the enumerator holding x, x+C next to y, y+C
  bool found = false;
  for_each_semi_magic<4>([&](const oracle_detail::Cells<4>& x) {
    if (found) return;
    SquareGrid<4> g;
    for (int i = 0; i < 16; ++i) g(i / 4, i % 4) = x[i];
    for (int i = 0; i < 4 && !found; ++i)
      for (int j = i + 1; j < 4 && !found; ++j)
        for (int a = 0; a < 4 && !found; ++a)
          for (int b = a + 1; b < 4 && !found; ++b)
            if (g(i, a) - g(i, b) == g(j, b) - g(j, a)) {
              found = true;
              EXPECT_TRUE(swap_report(g).pair_swappable) << g.to_string();
            }
  });
  EXPECT_TRUE(found);
}

TEST(SwapReport, DihedralInvariantOnSamples) {
  const KnuthEstimator<6> est;
  std::mt19937_64 rng(51);
  std::uint64_t cycles = 0;
  std::uint64_t triples = 0;
  for (int it = 0; it < 30; ++it) {
    const auto g = random_semi_magic(est, rng);
    const auto base = swap_report(g);
    cycles += base.cycle_configs;
    triples += base.triple_configs;
    for (auto e : all_dihedral()) {
      const auto r = swap_report(apply(e, g));
      ASSERT_EQ(r.pair_configs, base.pair_configs);
      ASSERT_EQ(r.triple_configs, base.triple_configs);
      ASSERT_EQ(r.cycle_configs, base.cycle_configs);
    }
  }
  // random squares are far from swap-free
  EXPECT_GT(cycles, 0U);
  EXPECT_GT(triples, 0U);
}

TEST(SwapReport, RejectsNonSemiMagic) {
  auto k = swap_free_fixtures().at(0);
  std::swap(k(0, 0), k(0, 1));
  std::swap(k(0, 0), k(1, 0));
  EXPECT_THROW(swap_report(k), std::invalid_argument);
}

TEST(SwapReport, SchemesAreBalanced) {
  for (const auto& s : kCycleSchemes) EXPECT_EQ(balanced_orientations(s).size(), 2U) << s.name;
}

TEST(Golden, ShippedFile) {
  const auto g = read_golden_file(data_path("golden.csv"));
  EXPECT_EQ(g.order, 6);
  EXPECT_EQ(g.jobs.size(), 100U);
  EXPECT_EQ(g.jobs.at(0), 14595299890506839ULL);
  ASSERT_EQ(g.classes.size(), 20U);
  EXPECT_EQ(g.classes.front().id, 0U);
  EXPECT_EQ(g.classes.front().mask, NumberSet::range(1, 9) | NumberSet::range(28, 36));
  EXPECT_EQ(g.classes.front().count, 1314107173695ULL);
  EXPECT_EQ(g.classes.back().id, 9366137U);
  EXPECT_EQ(g.classes.back().mask, NumberSet::range(1, 3) | NumberSet::range(14, 16) | NumberSet::range(18, 29));
  EXPECT_EQ(g.classes.back().count, 25787950205ULL);
  ASSERT_TRUE(g.total_c && g.total_q);
  EXPECT_EQ(*g.total_c, 1459732411194444392ULL);
  EXPECT_EQ(u128_to_string(*g.total_q), "94590660245399996601600");
  u128 sum = 0;
  for (const auto& [j, v] : g.jobs) sum += v;
  EXPECT_EQ(sum, *g.total_c);
  EXPECT_EQ(u128{*g.total_c} * 720 * 720 / 8, *g.total_q);
  EXPECT_EQ(*g.total_c % 4, 0U);
  for (const auto& c : g.classes) {
    EXPECT_EQ(c.mask.size(), 18);
    EXPECT_EQ(c.mask.sum(), 333);
  }
}

TEST(Golden, MalformedInput) {
  std::istringstream a("kind,id,expected\njob,0,12x\n");
  EXPECT_THROW(read_golden(a), std::exception);
  std::istringstream b("kind,id,expected\nbogus,0,1\n");
  EXPECT_THROW(read_golden(b), std::exception);
  std::istringstream c("job,0,1\n");
  EXPECT_THROW(read_golden(c), std::exception);
}

TEST(Numbers, U128) {
  EXPECT_EQ(u128_to_string(parse_u128("94590660245399996601600")), "94590660245399996601600");
  EXPECT_EQ(u128_to_string(0), "0");
  EXPECT_THROW(parse_u128("-1"), std::invalid_argument);
  EXPECT_THROW(parse_u128("999999999999999999999999999999999999999999"), std::invalid_argument);
  EXPECT_THROW(parse_u64("18446744073709551616"), std::invalid_argument);
  EXPECT_EQ(parse_u64("18446744073709551615"), 18446744073709551615ULL);
}

TEST(VerifyResults, PartialResultsSkipChecks) {
  GoldenValues g;
  g.jobs[0] = 30;
  g.jobs[1] = 7;
  g.classes.push_back({0, NumberSet{1}, 10});
  g.classes.push_back({150, NumberSet{151}, 1});
  // 250 classes: job 0 holds ids 0, 100, 200
  std::vector<ClassResult> rows{row(0, 10), row(100, 15), row(200, 5), row(1, 7), row(0, 10, "b")};
  const auto rep = verify_results(250, rows, g);
  EXPECT_TRUE(rep.ok()) << rep.to_text();
  EXPECT_EQ(find_item(rep, "class 0")->status, CheckStatus::pass);
  EXPECT_EQ(find_item(rep, "class 150")->status, CheckStatus::skipped);
  EXPECT_EQ(find_item(rep, "job 0")->status, CheckStatus::pass);
  EXPECT_EQ(find_item(rep, "job 1")->status, CheckStatus::skipped);  // id 101 missing
  EXPECT_EQ(find_item(rep, "total canonical squares")->status, CheckStatus::skipped);
  EXPECT_EQ(rep.complete_jobs, 1U);
}

TEST(VerifyResults, MismatchesFail) {
  GoldenValues g;
  g.jobs[0] = 30;
  const std::vector<ClassResult> disagree{row(0, 10), row(0, 11, "b")};
  EXPECT_FALSE(verify_results(1, disagree, g).ok());
  const std::vector<ClassResult> wrong_job{row(0, 31)};
  EXPECT_FALSE(verify_results(1, wrong_job, g).ok());
  const std::vector<ClassResult> outside{row(5, 1)};
  EXPECT_FALSE(verify_results(1, outside, g).ok());
  ClassCatalog cat{6, {NumberSet{99}}};
  const std::vector<ClassResult> masked{row(0, 30)};
  EXPECT_FALSE(verify_results(1, masked, g, &cat).ok());
}

TEST(VerifyResults, CompleteTotalsAndDivisibility) {
  GoldenValues g;
  g.total_c = 12;
  g.total_q = u128{12} * 720 * 720 / 8;
  std::vector<ClassResult> rows;
  for (int id = 0; id < 4; ++id) rows.push_back(row(id, 3));
  auto rep = verify_results(4, rows, g);
  EXPECT_TRUE(rep.ok()) << rep.to_text();
  EXPECT_EQ(find_item(rep, "total canonical squares")->status, CheckStatus::pass);
  EXPECT_EQ(find_item(rep, "total squares up to symmetry")->status, CheckStatus::pass);
  EXPECT_EQ(find_item(rep, "canonical total divisible by 4")->status, CheckStatus::pass);
  EXPECT_EQ(find_item(rep, "canonical total divisible by 8")->status, CheckStatus::info);
  EXPECT_EQ(find_item(rep, "job 7")->status, CheckStatus::info);  // no classes
  rows[0].count = 4;
  g.total_c = 13;
  rep = verify_results(4, rows, g);
  EXPECT_EQ(find_item(rep, "canonical total divisible by 4")->status, CheckStatus::fail);
  // other orders only report divisibility
  rep = verify_results(4, rows, GoldenValues{4, {}, {}, {}, {}}, nullptr, 4);
  EXPECT_EQ(find_item(rep, "canonical total divisible by 4")->status, CheckStatus::info);
}
