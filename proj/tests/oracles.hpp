#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridner/grid.hpp"

namespace gridner {

// Readable gtest failure output.
inline void PrintTo(const EntityMention& m, std::ostream* os) { *os << m.to_string(); }

}  // namespace gridner

namespace gridner::oracle {

using MentionKey = std::pair<std::string, std::vector<std::size_t>>;

/// Every token subset whose first/last tokens carry a THW of some type and
/// whose consecutive members are NNW-linked. Exponential in n; keep n small.
inline std::set<MentionKey> brute_force_paths(const RelationGrid& grid) {
  const std::size_t n = grid.n();
  std::set<MentionKey> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const CellLabel& anchor = grid.at(idx.back(), idx.front());
    if (anchor.relation != Relation::kThw) continue;
    bool linked = true;
    for (std::size_t i = 0; i + 1 < idx.size() && linked; ++i) {
      linked = grid.at(idx[i], idx[i + 1]).relation == Relation::kNnw;
    }
    if (linked) out.insert({anchor.type, idx});
  }
  return out;
}

inline std::set<MentionKey> as_keys(const std::vector<EntityMention>& ms) {
  std::set<MentionKey> out;
  for (const auto& m : ms) out.insert({m.type, m.tokens});
  return out;
}

/// Plain long-double elementwise average.
inline std::vector<double> elementwise_mean(const std::vector<std::vector<double>>& members) {
  std::vector<double> out(members.front().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    long double s = 0;
    for (const auto& m : members) s += m[i];
    out[i] = static_cast<double>(s / members.size());
  }
  return out;
}

/// Focal loss straight from its probability-space definition, in long double
/// so finite differences of it stay accurate.
inline long double focal_reference(long double z, int y, long double alpha, long double gamma) {
  const long double p = 1.0L / (1.0L + std::exp(-z));
  if (y == 1) return -alpha * std::pow(1.0L - p, gamma) * std::log(p);
  return -(1.0L - alpha) * std::pow(p, gamma) * std::log(1.0L - p);
}

inline double central_difference(double z, int y, double alpha, double gamma, double h = 1e-6) {
  const long double up = focal_reference(static_cast<long double>(z) + h, y, alpha, gamma);
  const long double down = focal_reference(static_cast<long double>(z) - h, y, alpha, gamma);
  return static_cast<double>((up - down) / (2.0L * h));
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct MentionSet {
  std::size_t n = 0;
  std::vector<EntityMention> mentions;
  bool disjoint = true;
};

/// Random conflict-free mention set mixing flat, nested and discontinuous
/// mentions. With disjoint_only, no two mentions share a token.
inline MentionSet random_mentions(std::mt19937_64& rng, std::size_t max_n, bool disjoint_only) {
  const auto draw = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  static const char* kTypes[] = {"SYMPTOM", "DRUG", "PERSON"};
  MentionSet set;
  set.n = draw(1, max_n);
  std::set<std::size_t> used;
  std::set<std::pair<std::size_t, std::size_t>> anchors;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::string>> anchor_types;
  const std::size_t want = draw(0, std::min<std::size_t>(5, set.n));
  for (std::size_t attempt = 0; attempt < 20 && set.mentions.size() < want; ++attempt) {
    EntityMention m{kTypes[draw(0, 2)], {}};
    const std::size_t start = draw(0, set.n - 1);
    const std::size_t len = draw(1, std::min<std::size_t>(4, set.n - start));
    const int shape = static_cast<int>(draw(0, 2));  // 0 flat, 1 discontinuous, 2 single
    if (shape == 2) {
      m.tokens = {start};
    } else if (shape == 0) {
      for (std::size_t i = 0; i < len; ++i) m.tokens.push_back(start + i);
    } else {
      for (std::size_t i = start; i < set.n && m.tokens.size() < len + 1; ++i) {
        if (i == start || draw(0, 2) != 0) m.tokens.push_back(i);
      }
    }
    bool clash = false;
    for (std::size_t t : m.tokens) clash |= used.count(t) > 0;
    if (disjoint_only && clash) continue;
    const std::pair cell{m.tokens.back(), m.tokens.front()};
    bool conflict = false;
    for (const auto& [c, type] : anchor_types) conflict |= c == cell && type != m.type;
    if (conflict) continue;
    bool duplicate = false;
    for (const auto& other : set.mentions) duplicate |= other == m;
    if (duplicate) continue;
    set.disjoint &= !clash;
    for (std::size_t t : m.tokens) used.insert(t);
    anchor_types.push_back({cell, m.type});
    set.mentions.push_back(std::move(m));
  }
  return set;
}

}  // namespace gridner::oracle
