#pragma once

// Positive-class binary P/R/F1 and strict-match NER P/R/F1.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gridner/errors.hpp"
#include "gridner/grid.hpp"

namespace gridner {

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  /// Zero denominators give 0 rather than NaN.
  static PrfScores from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    PrfScores s{0.0, 0.0, 0.0, tp, fp, fn};
    if (tp + fp > 0) s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (s.precision + s.recall > 0.0) {
      s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    }
    return s;
  }
};

inline PrfScores binary_prf(std::span<const int> preds, std::span<const int> golds) {
  if (preds.size() != golds.size()) {
    throw LengthMismatch("binary_prf: " + std::to_string(preds.size()) + " predictions, " +
                         std::to_string(golds.size()) + " gold labels");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == 1 && golds[i] == 1) ++tp;
    else if (preds[i] == 1) ++fp;
    else if (golds[i] == 1) ++fn;
  }
  return PrfScores::from_counts(tp, fp, fn);
}

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

/// Exact type and exact token set; duplicates on either side are ignored.
inline MatchCounts strict_match_counts(std::vector<EntityMention> pred,
                                       std::vector<EntityMention> gold) {
  sort_unique(pred);
  sort_unique(gold);
  MatchCounts c;
  std::size_t i = 0, j = 0;
  while (i < pred.size() && j < gold.size()) {
    if (pred[i] == gold[j]) {
      ++c.tp;
      ++i;
      ++j;
    } else if (mention_less(pred[i], gold[j])) {
      ++c.fp;
      ++i;
    } else {
      ++c.fn;
      ++j;
    }
  }
  c.fp += pred.size() - i;
  c.fn += gold.size() - j;
  return c;
}

inline PrfScores ner_strict_prf(std::vector<EntityMention> pred, std::vector<EntityMention> gold) {
  const auto c = strict_match_counts(std::move(pred), std::move(gold));
  return PrfScores::from_counts(c.tp, c.fp, c.fn);
}

}  // namespace gridner
