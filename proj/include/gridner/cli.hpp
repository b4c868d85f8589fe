#pragma once

// The `gridner` command line. run() is callable in-process so the test suite
// can exercise the same entry point as the binary.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "gridner/ensemble.hpp"
#include "gridner/errors.hpp"
#include "gridner/eval.hpp"
#include "gridner/formats.hpp"
#include "gridner/grid.hpp"
#include "gridner/synth.hpp"
#include "gridner/textnorm.hpp"
#include "gridner/toymodel.hpp"

namespace gridner::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;


namespace detail {

struct Globals {
  std::uint64_t seed = 0;
  bool quiet = false;
  std::string emoji_map;
};

inline EmojiMap load_emoji_map(const std::string& flag) {
  if (!flag.empty()) return EmojiMap::load(flag);
  if (const char* env = std::getenv("GRIDNER_EMOJI_MAP"); env != nullptr && *env != '\0') {
    return EmojiMap::load(env);
  }
  return EmojiMap::builtin();
}

/// A file holding one JSON object, or JSONL.
struct JsonInput {
  bool single = false;
  std::vector<JsonLine> records;
};

inline JsonInput read_json_or_jsonl(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  json whole = json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (!whole.is_discarded() && whole.is_object()) {
    JsonInput in{true, {}};
    in.records.push_back({1, std::move(whole)});
    return in;
  }
  return {false, parse_jsonl(content, path.string())};
}

inline void write_json_output(const std::string& path, bool single, std::span<const json> values,
                              std::ostream& out) {
  std::string text = single && values.size() == 1 ? values.front().dump() + "\n" : to_jsonl(values);
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

inline std::vector<std::string> feature_tokens(const std::string& text, const EmojiMap& map) {
  std::vector<std::string> out;
  for (auto& t : tokenize(normalize(text, map))) out.push_back(std::move(t.surface));
  return out;
}

inline std::string id_of(const JsonLine& rec) {
  auto it = rec.value.find("id");
  return it != rec.value.end() && it->is_string() ? it->get<std::string>() : std::string();
}

// --- subcommands -----------------------------------------------------------

inline void cmd_normalize(const std::string& in, const std::string& out_path, const Globals& g) {
  const EmojiMap map = load_emoji_map(g.emoji_map);
  std::vector<json> out;
  for (auto rec : read_jsonl(in)) {
    const std::string ctx = gridner::detail::record_context(rec, in);
    const auto text = gridner::detail::field<std::string>(rec.value, "text", ctx);
    AlignedText norm;
    try {
      norm = normalize_aligned(text, map);
    } catch (const DataError& e) {
      throw DataError(ctx + ": " + e.what());
    }
    if (rec.value.contains("entities")) {
      NerRecord ner = ner_from_json(rec.value, ctx);
      for (auto& ent : ner.entities) {
        for (auto& span : ent.spans) {
          auto mapped = norm.map_span(span);
          if (!mapped) throw DataError(ctx + ": a '" + ent.type + "' span vanishes after normalization");
          span = *mapped;
        }
      }
      rec.value["entities"] = to_json(ner)["entities"];
    }
    rec.value["text"] = unicode::encode(norm.text);
    out.push_back(std::move(rec.value));
  }
  write_file(out_path, to_jsonl(out));
}

inline void cmd_tokenize(const std::string& in, const std::string& out_path) {
  std::vector<json> out;
  for (auto rec : read_jsonl(in)) {
    const std::string ctx = gridner::detail::record_context(rec, in);
    json tokens = json::array();
    try {
      for (const auto& t : tokenize(gridner::detail::field<std::string>(rec.value, "text", ctx))) {
        tokens.push_back({{"text", t.surface}, {"start", t.start}, {"end", t.end}});
      }
    } catch (const DataError& e) {
      throw DataError(ctx + ": " + e.what());
    }
    rec.value["tokens"] = std::move(tokens);
    out.push_back(std::move(rec.value));
  }
  write_file(out_path, to_jsonl(out));
}

inline void cmd_grid_encode(const std::string& in, const std::string& out_path, std::ostream& out) {
  std::vector<json> grids;
  for (const auto& rec : read_jsonl(in)) {
    const std::string ctx = gridner::detail::record_context(rec, in);
    try {
      const NerRecord ner = ner_from_json(rec.value, ctx);
      const auto tokens = tokenize(ner.text);
      json grid = to_json(encode_grid(record_mentions(ner, tokens), tokens.size()));
      grid["id"] = ner.id;
      grid["text"] = ner.text;
      grids.push_back(std::move(grid));
    } catch (const ConflictError& e) {
      throw DataError(ctx + ": " + e.what());
    } catch (const DataError& e) {
      if (std::string_view(e.what()).starts_with(ctx)) throw;
      throw DataError(ctx + ": " + e.what());
    }
  }
  write_json_output(out_path, false, grids, out);
}

inline json decoded_record(const json& source, const std::vector<EntityMention>& mentions) {
  json rec = json::object();
  if (auto it = source.find("id"); it != source.end()) rec["id"] = *it;
  std::optional<std::vector<Token>> tokens;
  if (auto it = source.find("text"); it != source.end() && it->is_string()) {
    rec["text"] = *it;
    tokens = tokenize(it->get<std::string>());
  }
  json ents = json::array();
  for (const auto& m : mentions) {
    json e = to_json(m);
    if (tokens) {
      if (m.tokens.back() >= tokens->size()) throw DataError("grid larger than the record's token count");
      e["spans"] = to_json(mention_to_spans(*tokens, m))["spans"];
    }
    ents.push_back(std::move(e));
  }
  rec["entities"] = std::move(ents);
  return rec;
}

inline void cmd_grid_decode(const std::string& in, const std::string& out_path,
                            const DecodeLimits& limits, std::ostream& out) {
  const JsonInput input = read_json_or_jsonl(in);
  std::vector<json> decoded;
  for (const auto& rec : input.records) {
    const std::string ctx = gridner::detail::record_context(rec, in);
    try {
      std::vector<EntityMention> mentions;
      if (rec.value.contains("dist")) {
        mentions = decode_scores(scores_from_json(rec.value, ctx), limits);
      } else {
        mentions = decode_grid(grid_from_json(rec.value, ctx), limits);
      }
      decoded.push_back(decoded_record(rec.value, mentions));
    } catch (const DataError& e) {
      if (std::string_view(e.what()).starts_with(ctx)) throw;
      throw DataError(ctx + ": " + e.what());
    }
  }
  write_json_output(out_path, input.single, decoded, out);
}

inline void cmd_grid_fuse(const std::vector<std::string>& inputs, const std::string& out_path,
                          std::ostream& out) {
  std::vector<JsonInput> files;
  for (const auto& path : inputs) files.push_back(read_json_or_jsonl(path));
  const std::size_t count = files.front().records.size();
  for (std::size_t f = 0; f < files.size(); ++f) {
    if (files[f].records.size() != count) {
      throw DataError(inputs[f] + ": holds " + std::to_string(files[f].records.size()) +
                      " score objects, expected " + std::to_string(count));
    }
  }
  std::vector<json> fused;
  for (std::size_t r = 0; r < count; ++r) {
    std::vector<GridScores> members;
    const std::string id = id_of(files.front().records[r]);
    for (std::size_t f = 0; f < files.size(); ++f) {
      const auto& rec = files[f].records[r];
      if (id_of(rec) != id) {
        throw DataError(inputs[f] + ":" + std::to_string(rec.line) + ": id '" + id_of(rec) +
                        "' does not match '" + id + "'");
      }
      members.push_back(scores_from_json(rec.value, gridner::detail::record_context(rec, inputs[f])));
    }
    json j;
    try {
      j = to_json(fuse_scores(members));
    } catch (const ShapeMismatch& e) {
      throw DataError("record " + std::to_string(r + 1) + (id.empty() ? "" : " (id '" + id + "')") +
                      ": " + e.what());
    }
    if (!id.empty()) j["id"] = id;
    if (auto it = files.front().records[r].value.find("text"); it != files.front().records[r].value.end()) {
      j["text"] = *it;
    }
    fused.push_back(std::move(j));
  }
  write_json_output(out_path, files.front().single, fused, out);
}

inline void cmd_folds(const std::string& in, const std::string& out_path, std::size_t k,
                      const Globals& g, std::ostream& out) {
  const auto ds = read_labeled(in);
  const json j = to_json(stratified_kfold(ds, k, g.seed));
  write_json_output(out_path, true, std::span(&j, 1), out);
}

inline void cmd_oversample(const std::string& in, const std::string& out_path, const Globals& g) {
  std::vector<json> out;
  for (const auto& r : oversample(read_labeled(in), g.seed)) out.push_back(to_json(r));
  write_file(out_path, to_jsonl(out));
}

struct TrainFlags {
  std::string in;
  std::string out;
  std::string loss = "focal";
  FocalParams focal;
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  double lr_backbone = kToyLrBackbone;
  double lr_head = kToyLrHead;
  double wd_backbone = 0.01;
  double wd_head = 0.0;
  double ema_decay = kToyEmaDecay;
  bool oversample = false;
  std::uint32_t dim = kDefaultHashDim;
  std::string folds;
  int holdout_fold = -1;
};

inline void cmd_train(const TrainFlags& f, const Globals& g, std::ostream& err) {
  TrainConfig config;
  if (f.loss == "focal") {
    config.loss = LossKind::kFocal;
  } else if (f.loss == "ce") {
    config.loss = LossKind::kCrossEntropy;
  } else {
    throw std::invalid_argument("--loss must be 'focal' or 'ce'");
  }
  config.focal = f.focal;
  config.epochs = f.epochs;
  config.batch_size = f.batch_size;
  config.seed = g.seed;
  config.hash_seed = g.seed;
  config.ema_decay = f.ema_decay;
  config.oversample = f.oversample;
  config.dim = f.dim;
  config.adamw.groups = {{"backbone", {f.lr_backbone, f.wd_backbone}}, {"head", {f.lr_head, f.wd_head}}};
  if (!is_power_of_two(f.dim)) throw std::invalid_argument("--dim must be a power of two");

  LabeledDataset ds = read_labeled(f.in);
  if (!f.folds.empty()) {
    const FoldSplit split = folds_from_json(json::parse(read_file(f.folds)), f.folds);
    if (f.holdout_fold < 0 || static_cast<std::size_t>(f.holdout_fold) >= split.k) {
      throw std::invalid_argument("--holdout-fold must name one of the folds");
    }
    std::unordered_set<std::string> held(split.folds[f.holdout_fold].begin(),
                                         split.folds[f.holdout_fold].end());
    std::erase_if(ds, [&](const LabeledRecord& r) { return held.contains(r.id); });
    // Matches train_fold_models, so per-fold CLI runs reproduce the library.
    config.seed = fold_seed(g.seed, static_cast<std::size_t>(f.holdout_fold));
  } else if (f.holdout_fold >= 0) {
    throw std::invalid_argument("--holdout-fold requires --folds");
  }

  const EmojiMap map = load_emoji_map(g.emoji_map);
  std::vector<Example> examples;
  examples.reserve(ds.size());
  for (const auto& r : ds) {
    try {
      examples.push_back({featurize(feature_tokens(r.text, map), config.dim, config.hash_seed), r.label});
    } catch (const DataError& e) {
      throw DataError("record '" + r.id + "': " + e.what());
    }
  }
  const TrainResult result = train(examples, config);
  if (!g.quiet) {
    err << "trained on " << examples.size() << " records: loss " << result.initial_loss << " -> "
        << result.final_loss << "\n";
  }
  write_file(f.out, checkpoint_to_json(result.model, result.ema).dump() + "\n");
}

inline void cmd_predict(const std::string& model_path, const std::string& in,
                        const std::string& out_path, bool raw, const Globals& g) {
  const Checkpoint ckpt = checkpoint_from_json(json::parse(read_file(model_path)), model_path);
  const ToyModel model = raw || ckpt.ema.step == 0 ? ckpt.model
                                                   : ckpt.model.with_values(ema_debias(ckpt.ema));
  const EmojiMap map = load_emoji_map(g.emoji_map);
  std::vector<json> out;
  for (const auto& rec : read_jsonl(in)) {
    const std::string ctx = gridner::detail::record_context(rec, in);
    const auto id = gridner::detail::field<std::string>(rec.value, "id", ctx);
    const auto text = gridner::detail::field<std::string>(rec.value, "text", ctx);
    double p = 0.0;
    try {
      p = predict_proba(model, featurize(feature_tokens(text, map), model.dim, model.seed));
    } catch (const DataError& e) {
      throw DataError(ctx + ": " + e.what());
    }
    out.push_back({{"id", id}, {"prob", p}});
  }
  write_file(out_path, to_jsonl(out));
}

/// id -> probability, keeping file order.
inline std::pair<std::vector<std::string>, std::map<std::string, double>> read_probs(
    const std::string& path) {
  std::vector<std::string> order;
  std::map<std::string, double> probs;
  for (const auto& rec : read_jsonl(path)) {
    const std::string ctx = gridner::detail::record_context(rec, path);
    const auto id = gridner::detail::field<std::string>(rec.value, "id", ctx);
    const auto p = gridner::detail::field<double>(rec.value, "prob", ctx);
    if (!(p >= 0.0 && p <= 1.0)) throw DataError(ctx + ": prob must lie in [0, 1]");
    if (!probs.emplace(id, p).second) throw DataError(ctx + ": duplicate id");
    order.push_back(id);
  }
  return {order, probs};
}

inline void cmd_fuse(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<std::pair<std::vector<std::string>, std::map<std::string, double>>> files;
  for (const auto& path : inputs) files.push_back(read_probs(path));
  const auto& order = files.front().first;
  std::vector<std::vector<double>> members;
  for (std::size_t f = 0; f < files.size(); ++f) {
    if (files[f].second.size() != order.size()) {
      throw DataError(inputs[f] + ": holds " + std::to_string(files[f].second.size()) +
                      " predictions, expected " + std::to_string(order.size()));
    }
    std::vector<double> probs;
    for (const auto& id : order) {
      auto it = files[f].second.find(id);
      if (it == files[f].second.end()) throw DataError(inputs[f] + ": no prediction for id '" + id + "'");
      probs.push_back(it->second);
    }
    members.push_back(std::move(probs));
  }
  const auto fused = mean_pool_probs(members);
  std::vector<json> out;
  for (std::size_t i = 0; i < order.size(); ++i) out.push_back({{"id", order[i]}, {"prob", fused[i]}});
  write_file(out_path, to_jsonl(out));
}

inline void cmd_eval_cls(const std::string& pred_path, const std::string& gold_path, double threshold,
                         std::ostream& out) {
  std::map<std::string, int> pred;
  for (const auto& rec : read_jsonl(pred_path)) {
    const std::string ctx = gridner::detail::record_context(rec, pred_path);
    const auto id = gridner::detail::field<std::string>(rec.value, "id", ctx);
    int label = 0;
    if (rec.value.contains("label")) {
      label = gridner::detail::field<int>(rec.value, "label", ctx);
    } else {
      label = gridner::detail::field<double>(rec.value, "prob", ctx) >= threshold ? 1 : 0;
    }
    if (!pred.emplace(id, label).second) throw DataError(ctx + ": duplicate id");
  }
  std::vector<int> preds;
  std::vector<int> golds;
  for (const auto& r : read_labeled(gold_path)) {
    auto it = pred.find(r.id);
    if (it == pred.end()) throw DataError(pred_path + ": no prediction for id '" + r.id + "'");
    preds.push_back(it->second);
    golds.push_back(r.label);
    pred.erase(it);
  }
  if (!pred.empty()) throw DataError(pred_path + ": id '" + pred.begin()->first + "' is not in the gold file");
  out << to_json(binary_prf(preds, golds)).dump() << "\n";
}

inline std::vector<EntityMention> mentions_of(const JsonLine& rec, const std::string& ctx) {
  const auto text = gridner::detail::field<std::string>(rec.value, "text", ctx);
  const auto tokens = tokenize(text);
  std::vector<EntityMention> out;
  auto it = rec.value.find("entities");
  if (it == rec.value.end()) return out;
  for (const auto& e : *it) {
    EntityMention m;
    if (e.contains("tokens")) {
      m = mention_from_json(e, ctx);
    } else {
      json single = rec.value;
      single["entities"] = json::array({e});
      m = spans_to_mention(tokens, ner_from_json(single, ctx).entities.front());
    }
    validate_mention(m, tokens.size());
    out.push_back(std::move(m));
  }
  return out;
}

inline void cmd_eval_ner(const std::string& pred_path, const std::string& gold_path, std::ostream& out) {
  std::map<std::string, std::vector<EntityMention>> pred;
  for (const auto& rec : read_jsonl(pred_path)) {
    const std::string ctx = gridner::detail::record_context(rec, pred_path);
    try {
      const auto id = gridner::detail::field<std::string>(rec.value, "id", ctx);
      if (!pred.emplace(id, mentions_of(rec, ctx)).second) throw DataError("duplicate id");
    } catch (const DataError& e) {
      if (std::string_view(e.what()).starts_with(ctx)) throw;
      throw DataError(ctx + ": " + e.what());
    }
  }
  MatchCounts total;
  for (const auto& rec : read_jsonl(gold_path)) {
    const std::string ctx = gridner::detail::record_context(rec, gold_path);
    try {
      const auto id = gridner::detail::field<std::string>(rec.value, "id", ctx);
      auto gold = mentions_of(rec, ctx);
      auto it = pred.find(id);
      std::vector<EntityMention> p;
      if (it != pred.end()) {
        p = std::move(it->second);
        pred.erase(it);
      }
      total += strict_match_counts(std::move(p), std::move(gold));
    } catch (const DataError& e) {
      if (std::string_view(e.what()).starts_with(ctx)) throw;
      throw DataError(ctx + ": " + e.what());
    }
  }
  if (!pred.empty()) throw DataError(pred_path + ": id '" + pred.begin()->first + "' is not in the gold file");
  out << to_json(PrfScores::from_counts(total.tp, total.fp, total.fn)).dump() << "\n";
}

inline void cmd_gen_synth(const std::string& out_path, std::size_t n, double pos_rate, const Globals& g) {
  std::vector<json> out;
  for (const auto& r : generate_synthetic(n, pos_rate, g.seed)) out.push_back(to_json(r));
  write_file(out_path, to_jsonl(out));
}

}  // namespace detail

/// Runs one subcommand. args excludes the program name.
inline int run(std::span<const std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"gridner: tweet normalization, word-pair grid NER codec, and a fused toy classifier"};
  app.name("gridner");
  app.require_subcommand(1);
  app.fallthrough();

  detail::Globals g;
  app.add_option("--seed", g.seed, "Random seed")->default_val(0);
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");
  app.add_option("--emoji-map", g.emoji_map, "Emoji map TSV (default: $GRIDNER_EMOJI_MAP or built-in)");

  std::string in, out_path, pred, gold, model;
  std::vector<std::string> inputs;
  std::size_t k = 5;
  std::size_t n_records = 2000;
  double pos_rate = 0.176;
  double threshold = 0.5;
  bool raw = false;
  DecodeLimits limits;
  detail::TrainFlags tf;

  auto* normalize_cmd = app.add_subcommand("normalize", "Normalize the \"text\" field of JSONL records");
  normalize_cmd->add_option("--in", in, "Input JSONL")->required();
  normalize_cmd->add_option("--out", out_path, "Output JSONL")->required();

  auto* tokenize_cmd = app.add_subcommand("tokenize", "Add codepoint-offset tokens to JSONL records");
  tokenize_cmd->add_option("--in", in)->required();
  tokenize_cmd->add_option("--out", out_path)->required();

  auto* encode_cmd = app.add_subcommand("grid-encode", "Encode NER records as word-pair grids");
  encode_cmd->add_option("--in", in, "NER JSONL")->required();
  encode_cmd->add_option("--out", out_path, "Grid JSONL (default: stdout)");

  auto* decode_cmd = app.add_subcommand("grid-decode", "Decode grid or score JSON into mentions");
  decode_cmd->add_option("--in", in, "Grid/scores JSON or JSONL")->required();
  decode_cmd->add_option("--out", out_path, "Output (default: stdout)");
  decode_cmd->add_option("--max-entity-tokens", limits.max_entity_tokens)
      ->default_val(limits.max_entity_tokens)->check(CLI::PositiveNumber);
  decode_cmd->add_option("--max-paths", limits.max_paths_per_anchor, "Paths per THW anchor")
      ->default_val(limits.max_paths_per_anchor)->check(CLI::PositiveNumber);

  auto* gfuse_cmd = app.add_subcommand("grid-fuse", "Mean-pool grid score files");
  gfuse_cmd->add_option("--in", inputs, "Score files (repeat)")->required();
  gfuse_cmd->add_option("--out", out_path, "Output (default: stdout)");

  auto* folds_cmd = app.add_subcommand("folds", "Stratified k-fold split");
  folds_cmd->add_option("--in", in, "Classification JSONL")->required();
  folds_cmd->add_option("--out", out_path, "Fold JSON (default: stdout)");
  folds_cmd->add_option("--k", k)->default_val(5);

  auto* over_cmd = app.add_subcommand("oversample", "Replicate minority-class records");
  over_cmd->add_option("--in", in)->required();
  over_cmd->add_option("--out", out_path)->required();

  auto* train_cmd = app.add_subcommand("train", "Train the hashed logistic model");
  train_cmd->add_option("--in", tf.in, "Classification JSONL")->required();
  train_cmd->add_option("--out", tf.out, "Checkpoint JSON")->required();
  train_cmd->add_option("--loss", tf.loss, "focal | ce")->default_val("focal");
  train_cmd->add_option("--alpha", tf.focal.alpha)->default_val(0.25);
  train_cmd->add_option("--gamma", tf.focal.gamma)->default_val(2.0);
  train_cmd->add_option("--epochs", tf.epochs)->default_val(30);
  train_cmd->add_option("--batch-size", tf.batch_size)->default_val(32)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr-backbone", tf.lr_backbone)->default_val(kToyLrBackbone);
  train_cmd->add_option("--lr-head", tf.lr_head)->default_val(kToyLrHead);
  train_cmd->add_option("--wd-backbone", tf.wd_backbone)->default_val(0.01);
  train_cmd->add_option("--wd-head", tf.wd_head)->default_val(0.0);
  train_cmd->add_option("--ema-decay", tf.ema_decay)->default_val(kToyEmaDecay);
  train_cmd->add_flag("--oversample", tf.oversample);
  train_cmd->add_option("--dim", tf.dim, "Hash dimension (power of two)")->default_val(kDefaultHashDim);
  train_cmd->add_option("--folds", tf.folds, "Fold JSON; train on all folds but --holdout-fold");
  train_cmd->add_option("--holdout-fold", tf.holdout_fold);

  auto* predict_cmd = app.add_subcommand("predict", "Predict probabilities");
  predict_cmd->add_option("--model", model)->required();
  predict_cmd->add_option("--in", in)->required();
  predict_cmd->add_option("--out", out_path)->required();
  predict_cmd->add_flag("--raw", raw, "Use raw weights instead of the EMA shadow");

  auto* fuse_cmd = app.add_subcommand("fuse", "Mean-pool prediction files by id");
  fuse_cmd->add_option("--in", inputs, "Prediction JSONL (repeat)")->required();
  fuse_cmd->add_option("--out", out_path)->required();

  auto* evalc_cmd = app.add_subcommand("eval-cls", "Positive-class P/R/F1");
  evalc_cmd->add_option("--pred", pred)->required();
  evalc_cmd->add_option("--gold", gold)->required();
  evalc_cmd->add_option("--threshold", threshold)->default_val(0.5);

  auto* evaln_cmd = app.add_subcommand("eval-ner", "Strict-match NER P/R/F1");
  evaln_cmd->add_option("--pred", pred)->required();
  evaln_cmd->add_option("--gold", gold)->required();

  auto* synth_cmd = app.add_subcommand("gen-synth", "Generate the synthetic classification set");
  synth_cmd->add_option("--out", out_path)->required();
  synth_cmd->add_option("--n", n_records)->default_val(2000);
  synth_cmd->add_option("--pos-rate", pos_rate)->default_val(0.176);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gridner: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*normalize_cmd) detail::cmd_normalize(in, out_path, g);
    else if (*tokenize_cmd) detail::cmd_tokenize(in, out_path);
    else if (*encode_cmd) detail::cmd_grid_encode(in, out_path, out);
    else if (*decode_cmd) detail::cmd_grid_decode(in, out_path, limits, out);
    else if (*gfuse_cmd) detail::cmd_grid_fuse(inputs, out_path, out);
    else if (*folds_cmd) detail::cmd_folds(in, out_path, k, g, out);
    else if (*over_cmd) detail::cmd_oversample(in, out_path, g);
    else if (*train_cmd) detail::cmd_train(tf, g, err);
    else if (*predict_cmd) detail::cmd_predict(model, in, out_path, raw, g);
    else if (*fuse_cmd) detail::cmd_fuse(inputs, out_path);
    else if (*evalc_cmd) detail::cmd_eval_cls(pred, gold, threshold, out);
    else if (*evaln_cmd) detail::cmd_eval_ner(pred, gold, out);
    else if (*synth_cmd) detail::cmd_gen_synth(out_path, n_records, pos_rate, g);
  } catch (const std::invalid_argument& e) {
    err << "gridner: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "gridner: " << e.what() << "\n";
    return kExitData;
  } catch (const json::exception& e) {
    err << "gridner: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace gridner::cli
