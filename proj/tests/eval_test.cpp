#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gridner/eval.hpp"
#include "oracles.hpp"

namespace gridner {
namespace {

TEST(BinaryPrf, HandCounts) {
  // tp=2, fp=1, fn=1
  const auto s = binary_prf(std::vector<int>{1, 1, 1, 0, 0}, std::vector<int>{1, 1, 0, 1, 0});
  EXPECT_EQ(s.tp, 2u);
  EXPECT_EQ(s.fp, 1u);
  EXPECT_EQ(s.fn, 1u);
  EXPECT_NEAR(s.precision, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.recall, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.f1, 2.0 / 3.0, 1e-15);
}

TEST(BinaryPrf, ZeroDenominators) {
  const auto none = binary_prf(std::vector<int>{0, 0}, std::vector<int>{0, 0});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  const auto miss = binary_prf(std::vector<int>{1, 0}, std::vector<int>{0, 1});
  EXPECT_EQ(miss.f1, 0.0);
  EXPECT_THROW(binary_prf(std::vector<int>{1}, std::vector<int>{1, 0}), LengthMismatch);
}

TEST(StrictMatch, TypeOrTokenMismatchScoresZero) {
  const std::vector<EntityMention> gold{{"SYMPTOM", {1, 2}}};
  EXPECT_EQ(ner_strict_prf({{"DRUG", {1, 2}}}, gold).f1, 0.0);
  EXPECT_EQ(ner_strict_prf({{"SYMPTOM", {1}}}, gold).f1, 0.0);
  EXPECT_EQ(ner_strict_prf({{"SYMPTOM", {1, 2, 3}}}, gold).f1, 0.0);
  EXPECT_EQ(ner_strict_prf({{"SYMPTOM", {1, 2}}}, gold).f1, 1.0);
}

TEST(StrictMatch, PartialMentionIsMiss) {
  const auto s = ner_strict_prf({{"A", {0}}, {"B", {2, 3}}}, {{"A", {0}}, {"B", {2}}});
  EXPECT_EQ(s.tp, 1u);
  EXPECT_EQ(s.fp, 1u);
  EXPECT_EQ(s.fn, 1u);
  EXPECT_NEAR(s.precision, 0.5, 1e-15);
  EXPECT_NEAR(s.recall, 0.5, 1e-15);
  EXPECT_NEAR(s.f1, 0.5, 1e-15);
}

TEST(StrictMatch, DuplicatesCountOnce) {
  const auto c = strict_match_counts({{"A", {0}}, {"A", {0}}}, {{"A", {0}}});
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 0u);
  EXPECT_EQ(c.fn, 0u);
}

TEST(StrictMatch, CountsAggregate) {
  MatchCounts total;
  total += strict_match_counts({{"A", {0}}}, {{"A", {0}}});
  total += strict_match_counts({{"A", {1}}}, {{"B", {1}}});
  const auto s = PrfScores::from_counts(total.tp, total.fp, total.fn);
  EXPECT_NEAR(s.f1, 0.5, 1e-15);
}

TEST(StrictMatchProperty, AgreesWithSetIntersection) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 300; ++i) {
    const auto pred = oracle::random_mentions(rng, 10, false).mentions;
    const auto gold = oracle::random_mentions(rng, 10, false).mentions;
    const auto p = oracle::as_keys(pred);
    const auto g = oracle::as_keys(gold);
    std::size_t both = 0;
    for (const auto& key : p) both += g.count(key);
    const auto c = strict_match_counts(pred, gold);
    ASSERT_EQ(c.tp, both);
    ASSERT_EQ(c.fp, p.size() - both);
    ASSERT_EQ(c.fn, g.size() - both);
  }
}

}  // namespace
}  // namespace gridner
