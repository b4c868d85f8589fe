#pragma once

// On-disk formats: JSONL records, grid and score JSON, fold files, model
// checkpoints and metric reports. Parsing errors surface as DataError.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridner/ensemble.hpp"
#include "gridner/errors.hpp"
#include "gridner/eval.hpp"
#include "gridner/grid.hpp"
#include "gridner/optim.hpp"
#include "gridner/textnorm.hpp"
#include "gridner/toymodel.hpp"

namespace gridner {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

struct JsonLine {
  std::size_t line = 0;  // 1-based
  json value;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

/// Parses one JSON object per non-blank line.
inline std::vector<JsonLine> parse_jsonl(std::string_view content, std::string_view source) {
  std::vector<JsonLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    const std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      json value = json::parse(line);
      if (!value.is_object()) throw DataError("expected a JSON object");
      out.push_back({line_no, std::move(value)});
    } catch (const std::exception& e) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<JsonLine> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_file(path), path.string());
}

inline std::string to_jsonl(std::span<const json> values) {
  std::string out;
  for (const auto& v : values) {
    out += v.dump();
    out += '\n';
  }
  return out;
}

namespace detail {

template <class T>
T field(const json& obj, const char* key, std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string(context) + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string(context) + ": field '" + key + "' has the wrong type");
  }
}

inline std::string record_context(const JsonLine& rec, std::string_view source) {
  std::string ctx = std::string(source) + ":" + std::to_string(rec.line);
  auto it = rec.value.find("id");
  if (it != rec.value.end() && it->is_string()) ctx += " (id '" + it->get<std::string>() + "')";
  return ctx;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classification records: {"id", "text", "label"}
// ---------------------------------------------------------------------------

inline LabeledRecord labeled_from_json(const json& j, std::string_view ctx) {
  LabeledRecord r{detail::field<std::string>(j, "id", ctx), detail::field<std::string>(j, "text", ctx),
                  detail::field<int>(j, "label", ctx)};
  if (r.label != 0 && r.label != 1) throw DataError(std::string(ctx) + ": label must be 0 or 1");
  return r;
}

inline json to_json(const LabeledRecord& r) {
  return json{{"id", r.id}, {"text", r.text}, {"label", r.label}};
}

inline LabeledDataset read_labeled(const std::filesystem::path& path) {
  LabeledDataset out;
  for (const auto& rec : read_jsonl(path)) {
    out.push_back(labeled_from_json(rec.value, detail::record_context(rec, path.string())));
  }
  validate_dataset(out);
  return out;
}

// ---------------------------------------------------------------------------
// NER records: {"id", "text", "entities": [{"type", "spans": [[start, end], ...]}]}
// ---------------------------------------------------------------------------

struct SpanEntity {
  std::string type;
  std::vector<CharSpan> spans;

  friend bool operator==(const SpanEntity&, const SpanEntity&) = default;
};

struct NerRecord {
  std::string id;
  std::string text;
  std::vector<SpanEntity> entities;
};

inline NerRecord ner_from_json(const json& j, std::string_view ctx) {
  NerRecord r{detail::field<std::string>(j, "id", ctx), detail::field<std::string>(j, "text", ctx), {}};
  auto it = j.find("entities");
  if (it == j.end()) return r;
  if (!it->is_array()) throw DataError(std::string(ctx) + ": 'entities' must be an array");
  for (const auto& e : *it) {
    SpanEntity ent{detail::field<std::string>(e, "type", ctx), {}};
    for (const auto& s : detail::field<std::vector<std::vector<std::size_t>>>(e, "spans", ctx)) {
      if (s.size() != 2 || s[0] >= s[1]) {
        throw DataError(std::string(ctx) + ": spans must be [start, end) pairs with start < end");
      }
      ent.spans.push_back({s[0], s[1]});
    }
    if (ent.spans.empty()) throw DataError(std::string(ctx) + ": entity without spans");
    r.entities.push_back(std::move(ent));
  }
  return r;
}

inline json to_json(const SpanEntity& e) {
  json spans = json::array();
  for (const auto& s : e.spans) spans.push_back({s.start, s.end});
  return json{{"type", e.type}, {"spans", std::move(spans)}};
}

inline json to_json(const NerRecord& r) {
  json ents = json::array();
  for (const auto& e : r.entities) ents.push_back(to_json(e));
  return json{{"id", r.id}, {"text", r.text}, {"entities", std::move(ents)}};
}

/// Token indices covered by the spans. Every span boundary must coincide with
/// a token boundary.
inline EntityMention spans_to_mention(std::span<const Token> tokens, const SpanEntity& entity) {
  EntityMention m{entity.type, {}};
  for (const auto& span : entity.spans) {
    std::optional<std::size_t> first;
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].start == span.start) first = i;
      if (tokens[i].end == span.end) last = i;
    }
    if (!first || !last || *first > *last) {
      throw DataError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                      ") of '" + entity.type + "' does not align with token boundaries");
    }
    for (std::size_t i = *first; i <= *last; ++i) m.tokens.push_back(i);
  }
  std::sort(m.tokens.begin(), m.tokens.end());
  if (std::adjacent_find(m.tokens.begin(), m.tokens.end()) != m.tokens.end()) {
    throw DataError("entity '" + entity.type + "' has overlapping spans");
  }
  return m;
}

/// One span per run of consecutive token indices.
inline SpanEntity mention_to_spans(std::span<const Token> tokens, const EntityMention& m) {
  SpanEntity e{m.type, {}};
  for (std::size_t i = 0; i < m.tokens.size(); ++i) {
    const Token& t = tokens[m.tokens[i]];
    if (i > 0 && m.tokens[i] == m.tokens[i - 1] + 1) {
      e.spans.back().end = t.end;
    } else {
      e.spans.push_back({t.start, t.end});
    }
  }
  return e;
}

inline std::vector<EntityMention> record_mentions(const NerRecord& r, std::span<const Token> tokens) {
  std::vector<EntityMention> out;
  for (const auto& e : r.entities) out.push_back(spans_to_mention(tokens, e));
  return out;
}

inline json to_json(const EntityMention& m) {
  return json{{"type", m.type}, {"tokens", m.tokens}};
}

inline EntityMention mention_from_json(const json& j, std::string_view ctx) {
  return {detail::field<std::string>(j, "type", ctx),
          detail::field<std::vector<std::size_t>>(j, "tokens", ctx)};
}

// ---------------------------------------------------------------------------
// Grids and scores
// ---------------------------------------------------------------------------

/// {"n", "cells": [{"row", "col", "label"}]}; NONE cells omitted.
inline json to_json(const RelationGrid& grid) {
  json cells = json::array();
  for (std::size_t r = 0; r < grid.n(); ++r) {
    for (std::size_t c = 0; c < grid.n(); ++c) {
      const auto& label = grid.at(r, c);
      if (!label.is_none()) cells.push_back({{"row", r}, {"col", c}, {"label", label.name()}});
    }
  }
  return json{{"n", grid.n()}, {"cells", std::move(cells)}};
}

inline RelationGrid grid_from_json(const json& j, std::string_view ctx) {
  const auto n = detail::field<std::size_t>(j, "n", ctx);
  RelationGrid grid(n);
  for (const auto& cell : detail::field<json>(j, "cells", ctx)) {
    const auto row = detail::field<std::size_t>(cell, "row", ctx);
    const auto col = detail::field<std::size_t>(cell, "col", ctx);
    const auto label = CellLabel::parse(detail::field<std::string>(cell, "label", ctx));
    if (row >= n || col >= n) throw DataError(std::string(ctx) + ": cell outside the grid");
    if (!label.allowed_at(row, col)) {
      throw DataError(std::string(ctx) + ": " + label.name() + " not allowed at (" +
                      std::to_string(row) + "," + std::to_string(col) + ")");
    }
    grid.set(row, col, label);
  }
  return grid;
}

/// {"n", "labels": [...], "dist": [[[p, ...]]]}
inline json to_json(const GridScores& s) {
  json labels = json::array();
  for (const auto& l : s.labels()) labels.push_back(l.name());
  json dist = json::array();
  for (std::size_t r = 0; r < s.n(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < s.n(); ++c) {
      const auto cell = s.cell(r, c);
      row.push_back(std::vector<double>(cell.begin(), cell.end()));
    }
    dist.push_back(std::move(row));
  }
  return json{{"n", s.n()}, {"labels", std::move(labels)}, {"dist", std::move(dist)}};
}

inline GridScores scores_from_json(const json& j, std::string_view ctx) {
  const auto n = detail::field<std::size_t>(j, "n", ctx);
  std::vector<CellLabel> labels;
  for (const auto& name : detail::field<std::vector<std::string>>(j, "labels", ctx)) {
    labels.push_back(CellLabel::parse(name));
  }
  const auto nested = detail::field<std::vector<std::vector<std::vector<double>>>>(j, "dist", ctx);
  if (nested.size() != n) throw DataError(std::string(ctx) + ": dist has the wrong row count");
  std::vector<double> flat;
  flat.reserve(n * n * labels.size());
  for (const auto& row : nested) {
    if (row.size() != n) throw DataError(std::string(ctx) + ": dist has the wrong column count");
    for (const auto& cell : row) {
      if (cell.size() != labels.size()) {
        throw DataError(std::string(ctx) + ": a cell distribution has the wrong length");
      }
      flat.insert(flat.end(), cell.begin(), cell.end());
    }
  }
  try {
    return GridScores(n, std::move(labels), std::move(flat));
  } catch (const DataError& e) {
    throw DataError(std::string(ctx) + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Folds, metrics, checkpoints
// ---------------------------------------------------------------------------

inline json to_json(const FoldSplit& s) {
  return json{{"k", s.k}, {"seed", s.seed}, {"folds", s.folds}};
}

inline FoldSplit folds_from_json(const json& j, std::string_view ctx) {
  FoldSplit s{detail::field<std::size_t>(j, "k", ctx), detail::field<std::uint64_t>(j, "seed", ctx),
              detail::field<std::vector<std::vector<std::string>>>(j, "folds", ctx)};
  if (s.folds.size() != s.k) throw DataError(std::string(ctx) + ": fold count differs from k");
  return s;
}

inline json to_json(const PrfScores& s) {
  return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
              {"tp", s.tp},               {"fp", s.fp},         {"fn", s.fn}};
}

namespace detail {

inline json sparse(std::span<const double> values) {
  json out = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) out.push_back(json::array({i, values[i]}));
  }
  return out;
}

inline void fill_sparse(const json& pairs, std::vector<double>& values, std::string_view ctx) {
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2) throw DataError(std::string(ctx) + ": expected [index, value]");
    const auto i = p[0].get<std::size_t>();
    if (i >= values.size()) throw DataError(std::string(ctx) + ": index out of range");
    values[i] = p[1].get<double>();
  }
}

}  // namespace detail

/// {"dim", "seed", "weights": [[i, w]...], "bias", "ema": {"decay", "step", "shadow": [[i, v]...]}}
/// The EMA shadow spans dim + 1 entries; entry dim is the bias.
inline json checkpoint_to_json(const ToyModel& model, const EmaState& ema) {
  const std::span<const double> all(model.weights.values);
  return json{{"dim", model.dim},
              {"seed", model.seed},
              {"weights", detail::sparse(all.first(model.dim))},
              {"bias", model.bias()},
              {"ema", {{"decay", ema.decay}, {"step", ema.step}, {"shadow", detail::sparse(ema.shadow)}}}};
}

struct Checkpoint {
  ToyModel model;
  EmaState ema;
};

inline Checkpoint checkpoint_from_json(const json& j, std::string_view ctx) {
  try {
    const auto dim = detail::field<std::uint32_t>(j, "dim", ctx);
    Checkpoint c{ToyModel::zeros(dim, detail::field<std::uint64_t>(j, "seed", ctx)), {}};
    std::vector<double> weights(static_cast<std::size_t>(dim) + 1, 0.0);
    detail::fill_sparse(detail::field<json>(j, "weights", ctx), weights, ctx);
    weights[dim] = detail::field<double>(j, "bias", ctx);
    c.model.weights.values = std::move(weights);

    const auto ema = detail::field<json>(j, "ema", ctx);
    c.ema = EmaState::zeros(detail::field<double>(ema, "decay", ctx), c.model.weights.size());
    c.ema.step = detail::field<std::uint64_t>(ema, "step", ctx);
    detail::fill_sparse(detail::field<json>(ema, "shadow", ctx), c.ema.shadow, ctx);
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string(ctx) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string(ctx) + ": " + e.what());
  }
}

}  // namespace gridner
