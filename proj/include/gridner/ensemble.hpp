#pragma once

// Stratified k-fold splitting, minority oversampling and probability
// mean-pooling. Single-model fusion (k fold models) and multi-model fusion
// (different models) both reduce through mean_pool_probs.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gridner/errors.hpp"
#include "gridner/random.hpp"

namespace gridner {

struct LabeledRecord {
  std::string id;
  std::string text;
  int label = 0;

  friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

using LabeledDataset = std::vector<LabeledRecord>;

inline void validate_dataset(std::span<const LabeledRecord> records) {
  std::unordered_set<std::string_view> seen;
  for (const auto& r : records) {
    if (r.label != 0 && r.label != 1) {
      throw DataError("record '" + r.id + "': label must be 0 or 1");
    }
    if (!seen.insert(r.id).second) throw DataError("duplicate record id '" + r.id + "'");
  }
}

struct FoldSplit {
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::string>> folds;

  friend bool operator==(const FoldSplit&, const FoldSplit&) = default;
};

namespace detail {

inline void require_both_classes(std::span<const int> labels) {
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0) throw EmptyClass("no positive records");
  if (static_cast<std::size_t>(pos) == labels.size()) throw EmptyClass("no negative records");
}

/// Record indices in dealing order: each class shuffled with the seed, the
/// minority class first.
inline std::vector<std::size_t> dealing_order(std::span<const int> labels, std::uint64_t seed) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  Rng rng(seed);
  shuffle(std::span(pos), rng);
  shuffle(std::span(neg), rng);
  const bool pos_first = pos.size() <= neg.size();
  std::vector<std::size_t> order = pos_first ? pos : neg;
  const auto& rest = pos_first ? neg : pos;
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

inline void check_fold_request(std::size_t records, std::size_t k) {
  if (k < 2) throw std::invalid_argument("k-fold needs k >= 2");
  if (records < k) {
    throw TooFewRecords(std::to_string(records) + " records cannot fill " +
                        std::to_string(k) + " folds");
  }
}

}  // namespace detail

/// Fold index for every record.
///
/// The dealing order is assigned round-robin, so fold sizes, and the per-fold
/// count of each class, differ by at most one.
inline std::vector<std::size_t> stratified_fold_assignment(std::span<const int> labels,
                                                           std::size_t k, std::uint64_t seed) {
  detail::check_fold_request(labels.size(), k);
  detail::require_both_classes(labels);
  const auto order = detail::dealing_order(labels, seed);
  std::vector<std::size_t> fold(labels.size());
  for (std::size_t slot = 0; slot < order.size(); ++slot) fold[order[slot]] = slot % k;
  return fold;
}

inline FoldSplit stratified_kfold(std::span<const LabeledRecord> ds, std::size_t k,
                                  std::uint64_t seed) {
  validate_dataset(ds);
  detail::check_fold_request(ds.size(), k);
  std::vector<int> labels;
  labels.reserve(ds.size());
  for (const auto& r : ds) labels.push_back(r.label);
  detail::require_both_classes(labels);

  FoldSplit split{k, seed, std::vector<std::vector<std::string>>(k)};
  const auto order = detail::dealing_order(labels, seed);
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    split.folds[slot % k].push_back(ds[order[slot]].id);
  }
  return split;
}

/// Indices of the balanced dataset: every original index in order, then the
/// minority-class draws (with replacement) needed to equalize the classes.
inline std::vector<std::size_t> oversample_indices(std::span<const int> labels,
                                                   std::uint64_t seed) {
  detail::require_both_classes(labels);
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  const auto& minority = pos.size() <= neg.size() ? pos : neg;
  const std::size_t deficit = std::max(pos.size(), neg.size()) - minority.size();

  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  Rng rng(seed);
  for (std::size_t d = 0; d < deficit; ++d) {
    out.push_back(minority[uniform_below(rng, minority.size())]);
  }
  return out;
}

/// Balanced copy of the dataset. Duplicates get ids "<id>#dup<n>".
inline LabeledDataset oversample(std::span<const LabeledRecord> ds, std::uint64_t seed) {
  validate_dataset(ds);
  std::vector<int> labels;
  labels.reserve(ds.size());
  for (const auto& r : ds) labels.push_back(r.label);
  const auto picks = oversample_indices(labels, seed);

  LabeledDataset out(ds.begin(), ds.end());
  std::unordered_set<std::string> ids;
  for (const auto& r : ds) ids.insert(r.id);
  std::vector<std::size_t> copies(ds.size(), 0);
  for (std::size_t p = ds.size(); p < picks.size(); ++p) {
    const LabeledRecord& src = ds[picks[p]];
    std::string id;
    do {
      id = src.id + "#dup" + std::to_string(++copies[picks[p]]);
    } while (!ids.insert(id).second);
    out.push_back({std::move(id), src.text, src.label});
  }
  return out;
}

/// Elementwise mean of member probability vectors. Each position is summed in
/// ascending order, so the result does not depend on member order.
inline std::vector<double> mean_pool_probs(std::span<const std::vector<double>> members) {
  if (members.empty()) throw std::invalid_argument("mean_pool_probs: no members");
  const std::size_t len = members.front().size();
  for (const auto& m : members) {
    if (m.size() != len) throw LengthMismatch("mean_pool_probs: member lengths differ");
  }
  std::vector<double> out(len);
  std::vector<double> column(members.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t m = 0; m < members.size(); ++m) column[m] = members[m][i];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    out[i] = sum / static_cast<double>(members.size());
  }
  return out;
}

/// 1 iff p >= t.
inline std::vector<int> threshold_labels(std::span<const double> probs, double t = 0.5) {
  std::vector<int> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(p >= t ? 1 : 0);
  return out;
}

}  // namespace gridner
