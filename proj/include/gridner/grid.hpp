#pragma once

// Word-pair relation grid for unified NER.
//
// A mention w1 < w2 < ... < wk of type T is written into an n x n grid as
//   NNW    at (w_i, w_{i+1})  -- strict upper triangle
//   THW(T) at (w_k, w_1)      -- lower triangle incl. the diagonal
// Decoding enumerates, for every THW cell, the NNW paths from head to tail.
// The scheme is lossy for overlapping discontinuous mentions: decoding may
// produce extra paths, so encode->decode is a superset in general and exact
// only when mentions are token-disjoint.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "gridner/errors.hpp"

namespace gridner {

struct EntityMention {
  std::string type;
  std::vector<std::size_t> tokens;

  friend bool operator==(const EntityMention&, const EntityMention&) = default;

  std::string to_string() const {
    std::string s = type + "[";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(tokens[i]);
    }
    return s + "]";
  }
};

/// Output order: first token, then length, then type, then the tokens.
inline bool mention_less(const EntityMention& a, const EntityMention& b) {
  const auto key = [](const EntityMention& m) {
    return std::tuple(m.tokens.empty() ? 0 : m.tokens.front(), m.tokens.size(),
                      std::string_view(m.type));
  };
  if (key(a) != key(b)) return key(a) < key(b);
  return a.tokens < b.tokens;
}

/// Sorts with mention_less and drops exact duplicates.
inline void sort_unique(std::vector<EntityMention>& mentions) {
  std::sort(mentions.begin(), mentions.end(), mention_less);
  mentions.erase(std::unique(mentions.begin(), mentions.end()), mentions.end());
}

/// Throws DataError unless tokens are nonempty, strictly increasing and < n.
inline void validate_mention(const EntityMention& m, std::size_t n) {
  if (m.type.empty()) throw DataError("mention has an empty type");
  if (m.tokens.empty()) throw DataError("mention " + m.to_string() + " has no tokens");
  for (std::size_t i = 0; i < m.tokens.size(); ++i) {
    if (m.tokens[i] >= n) {
      throw DataError("mention " + m.to_string() + " exceeds token count " +
                      std::to_string(n));
    }
    if (i > 0 && m.tokens[i] <= m.tokens[i - 1]) {
      throw DataError("mention " + m.to_string() + " is not strictly increasing");
    }
  }
}

enum class Relation : unsigned char { kNone, kNnw, kThw };

struct CellLabel {
  Relation relation = Relation::kNone;
  std::string type;  // only for kThw

  static CellLabel none() { return {}; }
  static CellLabel nnw() { return {Relation::kNnw, {}}; }
  static CellLabel thw(std::string type) { return {Relation::kThw, std::move(type)}; }

  bool is_none() const noexcept { return relation == Relation::kNone; }

  std::string name() const {
    switch (relation) {
      case Relation::kNnw: return "NNW";
      case Relation::kThw: return "THW:" + type;
      case Relation::kNone: break;
    }
    return "NONE";
  }

  static CellLabel parse(std::string_view name) {
    if (name == "NONE") return none();
    if (name == "NNW") return nnw();
    if (name.size() > 4 && name.substr(0, 4) == "THW:") {
      return thw(std::string(name.substr(4)));
    }
    throw DataError("unknown cell label '" + std::string(name) + "'");
  }

  /// Whether this label may sit at (row, col) of the grid.
  bool allowed_at(std::size_t row, std::size_t col) const noexcept {
    switch (relation) {
      case Relation::kNnw: return row < col;
      case Relation::kThw: return row >= col;
      case Relation::kNone: return true;
    }
    return false;
  }

  friend bool operator==(const CellLabel&, const CellLabel&) = default;
};

class ConflictError : public Error {
 public:
  ConflictError(EntityMention first, EntityMention second)
      : Error("mentions " + first.to_string() + " and " + second.to_string() +
              " require different labels at the same THW cell"),
        first_(std::move(first)),
        second_(std::move(second)) {}

  const EntityMention& first() const noexcept { return first_; }
  const EntityMention& second() const noexcept { return second_; }

 private:
  EntityMention first_;
  EntityMention second_;
};

class RelationGrid {
 public:
  RelationGrid() = default;
  explicit RelationGrid(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t n() const noexcept { return n_; }

  const CellLabel& at(std::size_t row, std::size_t col) const {
    check(row, col);
    return cells_[row * n_ + col];
  }

  /// Enforces the triangle discipline; throws std::invalid_argument.
  void set(std::size_t row, std::size_t col, CellLabel label) {
    check(row, col);
    if (!label.allowed_at(row, col)) {
      throw std::invalid_argument(label.name() + " not allowed at (" +
                                  std::to_string(row) + "," + std::to_string(col) + ")");
    }
    cells_[row * n_ + col] = std::move(label);
  }

  friend bool operator==(const RelationGrid&, const RelationGrid&) = default;

 private:
  void check(std::size_t row, std::size_t col) const {
    if (row >= n_ || col >= n_) throw std::out_of_range("grid cell out of range");
  }

  std::size_t n_ = 0;
  std::vector<CellLabel> cells_;
};

struct DecodeLimits {
  std::size_t max_entity_tokens = 32;
  std::size_t max_paths_per_anchor = 100;
};

inline RelationGrid encode_grid(std::span<const EntityMention> entities, std::size_t n) {
  std::vector<EntityMention> unique(entities.begin(), entities.end());
  for (const auto& m : unique) validate_mention(m, n);
  sort_unique(unique);

  RelationGrid grid(n);
  std::map<std::pair<std::size_t, std::size_t>, const EntityMention*> anchors;
  for (const auto& m : unique) {
    for (std::size_t i = 0; i + 1 < m.tokens.size(); ++i) {
      grid.set(m.tokens[i], m.tokens[i + 1], CellLabel::nnw());
    }
    const std::pair cell{m.tokens.back(), m.tokens.front()};
    auto [it, inserted] = anchors.emplace(cell, &m);
    if (!inserted && it->second->type != m.type) throw ConflictError(*it->second, m);
    grid.set(cell.first, cell.second, CellLabel::thw(m.type));
  }
  return grid;
}

namespace detail {

class PathEnumerator {
 public:
  PathEnumerator(const RelationGrid& grid, const DecodeLimits& limits)
      : grid_(grid), limits_(limits), successors_(grid.n()) {
    for (std::size_t i = 0; i < grid.n(); ++i) {
      for (std::size_t j = i + 1; j < grid.n(); ++j) {
        if (grid.at(i, j).relation == Relation::kNnw) successors_[i].push_back(j);
      }
    }
  }

  void run(std::size_t head, std::size_t tail, const std::string& type,
           std::vector<EntityMention>& out) {
    // Fewest tokens on any NNW path from i to tail; prunes dead branches so
    // the path budget is only spent on complete paths.
    shortest_.assign(grid_.n(), kUnreachable);
    shortest_[tail] = 1;
    for (std::size_t i = tail; i-- > head;) {
      for (std::size_t j : successors_[i]) {
        if (j > tail) break;
        if (shortest_[j] != kUnreachable) shortest_[i] = std::min(shortest_[i], shortest_[j] + 1);
      }
    }
    if (shortest_[head] > limits_.max_entity_tokens) return;
    tail_ = tail;
    type_ = &type;
    out_ = &out;
    budget_ = limits_.max_paths_per_anchor;
    path_.assign(1, head);
    extend();
  }

 private:
  static constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

  void extend() {
    const std::size_t last = path_.back();
    if (last == tail_) {
      out_->push_back({*type_, path_});
      --budget_;
      return;
    }
    for (std::size_t next : successors_[last]) {
      if (budget_ == 0 || next > tail_) return;
      if (shortest_[next] == kUnreachable) continue;
      if (path_.size() + shortest_[next] > limits_.max_entity_tokens) continue;
      path_.push_back(next);
      extend();
      path_.pop_back();
    }
  }

  const RelationGrid& grid_;
  DecodeLimits limits_;
  std::vector<std::vector<std::size_t>> successors_;
  std::vector<std::size_t> shortest_;
  std::vector<std::size_t> path_;
  std::size_t tail_ = 0;
  const std::string* type_ = nullptr;
  std::vector<EntityMention>* out_ = nullptr;
  std::size_t budget_ = 0;
};

}  // namespace detail

/// Every NNW path anchored by a THW cell, deduplicated and sorted.
inline std::vector<EntityMention> decode_grid(const RelationGrid& grid,
                                              const DecodeLimits& limits = {}) {
  std::vector<EntityMention> out;
  if (limits.max_entity_tokens == 0 || limits.max_paths_per_anchor == 0) return out;
  detail::PathEnumerator paths(grid, limits);
  for (std::size_t tail = 0; tail < grid.n(); ++tail) {
    for (std::size_t head = 0; head <= tail; ++head) {
      const CellLabel& cell = grid.at(tail, head);
      if (cell.relation == Relation::kThw) paths.run(head, tail, cell.type, out);
    }
  }
  sort_unique(out);
  return out;
}

/// Per-cell probability distributions over an ordered label set.
class GridScores {
 public:
  static constexpr double kSumTolerance = 1e-9;

  GridScores() = default;

  /// dist is row-major n x n x labels.size(); throws DataError when malformed.
  GridScores(std::size_t n, std::vector<CellLabel> labels, std::vector<double> dist)
      : n_(n), labels_(std::move(labels)), dist_(std::move(dist)) {
    if (labels_.empty()) throw DataError("scores: empty label set");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (labels_[i] == labels_[j]) {
          throw DataError("scores: duplicate label " + labels_[i].name());
        }
      }
    }
    if (dist_.size() != n_ * n_ * labels_.size()) {
      throw DataError("scores: expected " + std::to_string(n_ * n_ * labels_.size()) +
                      " probabilities, got " + std::to_string(dist_.size()));
    }
    for (std::size_t row = 0; row < n_; ++row) {
      for (std::size_t col = 0; col < n_; ++col) {
        double sum = 0.0;
        for (double p : cell(row, col)) {
          if (!std::isfinite(p) || p < 0.0) {
            throw DataError("scores: invalid probability at (" + std::to_string(row) +
                            "," + std::to_string(col) + ")");
          }
          sum += p;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) {
          throw DataError("scores: cell (" + std::to_string(row) + "," +
                          std::to_string(col) + ") does not sum to 1");
        }
      }
    }
  }

  /// One-hot scores reproducing a grid, over the given label set.
  static GridScores one_hot(const RelationGrid& grid, std::vector<CellLabel> labels) {
    const std::size_t n = grid.n();
    const std::size_t width = labels.size();
    std::vector<double> dist(n * n * width, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
      for (std::size_t col = 0; col < n; ++col) {
        const auto it = std::find(labels.begin(), labels.end(), grid.at(row, col));
        if (it == labels.end()) {
          throw DataError("label " + grid.at(row, col).name() + " missing from label set");
        }
        dist[(row * n + col) * width + static_cast<std::size_t>(it - labels.begin())] = 1.0;
      }
    }
    return GridScores(n, std::move(labels), std::move(dist));
  }

  std::size_t n() const noexcept { return n_; }
  const std::vector<CellLabel>& labels() const noexcept { return labels_; }
  const std::vector<double>& dist() const noexcept { return dist_; }

  std::span<const double> cell(std::size_t row, std::size_t col) const {
    return std::span(dist_).subspan((row * n_ + col) * labels_.size(), labels_.size());
  }

 private:
  std::size_t n_ = 0;
  std::vector<CellLabel> labels_;
  std::vector<double> dist_;
};

/// Per-cell argmax (ties to the earliest label) with out-of-triangle winners
/// forced to NONE.
inline RelationGrid argmax_grid(const GridScores& scores) {
  RelationGrid grid(scores.n());
  for (std::size_t row = 0; row < scores.n(); ++row) {
    for (std::size_t col = 0; col < scores.n(); ++col) {
      const auto probs = scores.cell(row, col);
      const auto best = static_cast<std::size_t>(
          std::max_element(probs.begin(), probs.end()) - probs.begin());
      const CellLabel& label = scores.labels()[best];
      if (!label.is_none() && label.allowed_at(row, col)) grid.set(row, col, label);
    }
  }
  return grid;
}

inline std::vector<EntityMention> decode_scores(const GridScores& scores,
                                                const DecodeLimits& limits = {}) {
  return decode_grid(argmax_grid(scores), limits);
}

/// Mean-pools member distributions cell by cell.
///
/// Values at each position are summed in ascending order, which makes the
/// result bitwise independent of member order.
inline GridScores fuse_scores(std::span<const GridScores> members) {
  if (members.empty()) throw std::invalid_argument("fuse_scores: no members");
  const GridScores& first = members.front();
  for (const auto& m : members) {
    if (m.n() != first.n()) throw ShapeMismatch("fuse_scores: token counts differ");
    if (m.labels() != first.labels()) throw ShapeMismatch("fuse_scores: label sets differ");
  }
  const std::size_t size = first.dist().size();
  const auto count = static_cast<double>(members.size());
  std::vector<double> fused(size);
  std::vector<double> column(members.size());
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t m = 0; m < members.size(); ++m) column[m] = members[m].dist()[i];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    fused[i] = sum / count;
  }
  return GridScores(first.n(), first.labels(), std::move(fused));
}

}  // namespace gridner
