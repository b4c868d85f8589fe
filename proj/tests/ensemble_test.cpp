#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gridner/ensemble.hpp"
#include "oracles.hpp"

namespace gridner {
namespace {

LabeledDataset make_dataset(std::size_t n, std::size_t positives) {
  LabeledDataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    ds.push_back({"r" + std::to_string(i), "text " + std::to_string(i), i < positives ? 1 : 0});
  }
  return ds;
}

std::map<std::string, int> label_of(const LabeledDataset& ds) {
  std::map<std::string, int> out;
  for (const auto& r : ds) out[r.id] = r.label;
  return out;
}

TEST(StratifiedKfold, TenRecordsTwoPositives) {
  const auto ds = make_dataset(10, 2);
  const auto split = stratified_kfold(ds, 5, 42);
  const auto labels = label_of(ds);
  ASSERT_EQ(split.folds.size(), 5u);
  std::size_t folds_with_pos = 0;
  for (const auto& fold : split.folds) {
    EXPECT_EQ(fold.size(), 2u);
    std::size_t pos = 0;
    for (const auto& id : fold) pos += labels.at(id);
    EXPECT_LE(pos, 1u);
    folds_with_pos += pos;
  }
  EXPECT_EQ(folds_with_pos, 2u);
}

TEST(StratifiedKfold, TwoFoldsOfFour) {
  const auto ds = make_dataset(4, 2);
  const auto split = stratified_kfold(ds, 2, 7);
  const auto labels = label_of(ds);
  for (const auto& fold : split.folds) {
    ASSERT_EQ(fold.size(), 2u);
    EXPECT_EQ(labels.at(fold[0]) + labels.at(fold[1]), 1);
  }
}

TEST(StratifiedKfold, Errors) {
  EXPECT_THROW(stratified_kfold(make_dataset(10, 2), 1, 0), std::invalid_argument);
  EXPECT_THROW(stratified_kfold(make_dataset(3, 1), 5, 0), TooFewRecords);
  EXPECT_THROW(stratified_kfold(make_dataset(10, 0), 5, 0), EmptyClass);
  EXPECT_THROW(stratified_kfold(make_dataset(10, 10), 5, 0), EmptyClass);
  auto dup = make_dataset(10, 2);
  dup[3].id = dup[4].id;
  EXPECT_THROW(stratified_kfold(dup, 5, 0), DataError);
  auto bad = make_dataset(10, 2);
  bad[0].label = 2;
  EXPECT_THROW(stratified_kfold(bad, 5, 0), DataError);
}

TEST(StratifiedKfold, AssignmentAgreesWithSplit) {
  const auto ds = make_dataset(23, 6);
  std::vector<int> labels;
  for (const auto& r : ds) labels.push_back(r.label);
  const auto assignment = stratified_fold_assignment(labels, 4, 99);
  const auto split = stratified_kfold(ds, 4, 99);
  for (std::size_t f = 0; f < 4; ++f) {
    for (const auto& id : split.folds[f]) {
      EXPECT_EQ(assignment[std::stoul(id.substr(1))], f);
    }
  }
}

TEST(FoldProperty, PartitionBalanceStratificationDeterminism) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(k, 300)(rng);
    const std::size_t pos = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    auto ds = make_dataset(n, pos);
    std::shuffle(ds.begin(), ds.end(), rng);
    const std::uint64_t seed = rng();
    const auto split = stratified_kfold(ds, k, seed);
    ASSERT_EQ(split, stratified_kfold(ds, k, seed));
    const auto labels = label_of(ds);

    std::multiset<std::string> seen;
    std::size_t min_size = n, max_size = 0, min_pos = n, max_pos = 0;
    for (const auto& fold : split.folds) {
      std::size_t p = 0;
      for (const auto& id : fold) {
        seen.insert(id);
        p += labels.at(id);
      }
      min_size = std::min(min_size, fold.size());
      max_size = std::max(max_size, fold.size());
      min_pos = std::min(min_pos, p);
      max_pos = std::max(max_pos, p);
    }
    ASSERT_EQ(seen.size(), n);
    ASSERT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), n);
    ASSERT_LE(max_size - min_size, 1u);
    ASSERT_LE(max_pos - min_pos, 1u);
  }
}

TEST(Oversample, ThreeNegativesOnePositive) {
  const auto out = oversample(make_dataset(4, 1), 5);
  ASSERT_EQ(out.size(), 6u);
  EXPECT_EQ(std::count_if(out.begin(), out.end(), [](const auto& r) { return r.label == 1; }), 3);
  EXPECT_EQ(out[4].id, "r0#dup1");
  EXPECT_EQ(out[5].id, "r0#dup2");
  EXPECT_EQ(out[4].text, "text 0");
}

TEST(Oversample, BalancedIsUnchanged) {
  const auto ds = make_dataset(6, 3);
  EXPECT_EQ(oversample(ds, 1), ds);
}

TEST(Oversample, SkewedBecomesExactlyHalf) {
  const auto ds = make_dataset(1000, 176);
  const auto out = oversample(ds, 2);
  const auto pos = std::count_if(out.begin(), out.end(), [](const auto& r) { return r.label == 1; });
  EXPECT_EQ(out.size(), 1648u);
  EXPECT_EQ(static_cast<std::size_t>(pos) * 2, out.size());
  EXPECT_TRUE(std::equal(ds.begin(), ds.end(), out.begin()));
  std::set<std::string> ids;
  for (const auto& r : out) ids.insert(r.id);
  EXPECT_EQ(ids.size(), out.size());
}

TEST(Oversample, DuplicateIdsAvoidExistingIds) {
  LabeledDataset ds{{"a", "x", 1}, {"a#dup1", "y", 0}, {"b", "z", 0}};
  const auto out = oversample(ds, 3);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[3].id, "a#dup2");
}

TEST(Oversample, MinorityNegativeClass) {
  const auto out = oversample(make_dataset(5, 4), 3);
  EXPECT_EQ(std::count_if(out.begin(), out.end(), [](const auto& r) { return r.label == 0; }), 4);
}

TEST(MeanPool, AveragesMembers) {
  const std::vector<std::vector<double>> members{{0.6}, {0.8}};
  EXPECT_NEAR(mean_pool_probs(members)[0], 0.7, 1e-15);
  EXPECT_THROW(mean_pool_probs(std::span<const std::vector<double>>{}), std::invalid_argument);
  const std::vector<std::vector<double>> ragged{{0.6}, {0.8, 0.1}};
  EXPECT_THROW(mean_pool_probs(ragged), LengthMismatch);
}

TEST(Threshold, InclusiveAtCutoff) {
  EXPECT_EQ(threshold_labels(std::vector<double>{0.5}), (std::vector<int>{1}));
  EXPECT_EQ(threshold_labels(std::vector<double>{0.49, 0.51}), (std::vector<int>{0, 1}));
  EXPECT_EQ(threshold_labels(std::vector<double>{0.7}, 0.8), (std::vector<int>{0}));
}

TEST(FusionProperty, MatchesOracleAndIsPermutationInvariant) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    std::vector<std::vector<double>> members(m, std::vector<double>(len));
    for (auto& member : members) {
      for (double& p : member) p = u(rng);
    }
    const auto pooled = mean_pool_probs(members);
    const auto expected = oracle::elementwise_mean(members);
    for (std::size_t i = 0; i < len; ++i) ASSERT_NEAR(pooled[i], expected[i], 1e-12);
    std::shuffle(members.begin(), members.end(), rng);
    ASSERT_EQ(mean_pool_probs(members), pooled);
  }
}

}  // namespace
}  // namespace gridner
