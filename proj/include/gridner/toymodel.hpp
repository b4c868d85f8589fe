#pragma once

// A hashed bag-of-words logistic classifier. Small on purpose: it exists to
// drive the losses, AdamW, EMA, oversampling and fusion end to end.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridner/ensemble.hpp"
#include "gridner/errors.hpp"
#include "gridner/optim.hpp"
#include "gridner/random.hpp"

namespace gridner {

inline constexpr std::uint32_t kDefaultHashDim = 1u << 18;

// Learning rates sized for the hashed logistic model trained from zero. The
// AdamWConfig defaults are transformer fine-tuning rates and barely move it.
inline constexpr double kToyLrBackbone = 0.05;
inline constexpr double kToyLrHead = 0.05;
// A run is ~2,000 steps; 0.999 would average over half of training and wash
// out the differences between fold models that fusion relies on.
inline constexpr double kToyEmaDecay = 0.8;

/// FNV-1a over the 8 little-endian seed bytes and then the token bytes,
/// finished with the splitmix64 avalanche.
inline std::uint64_t token_hash(std::string_view token, std::uint64_t seed) {
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int b = 0; b < 8; ++b) {
    h ^= (seed >> (8 * b)) & 0xFF;
    h *= kPrime;
  }
  for (unsigned char c : token) {
    h ^= c;
    h *= kPrime;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

struct FeatureCount {
  std::uint32_t index = 0;
  std::uint32_t count = 0;

  friend bool operator==(const FeatureCount&, const FeatureCount&) = default;
};

/// Sparse token counts, sorted by index.
struct HashedFeatures {
  std::uint32_t dim = kDefaultHashDim;
  std::vector<FeatureCount> entries;

  std::uint32_t count_at(std::uint32_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const FeatureCount& f, std::uint32_t i) { return f.index < i; });
    return it != entries.end() && it->index == index ? it->count : 0;
  }

  friend bool operator==(const HashedFeatures&, const HashedFeatures&) = default;
};

inline bool is_power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline HashedFeatures featurize(std::span<const std::string> tokens, std::uint32_t dim,
                                std::uint64_t seed) {
  if (!is_power_of_two(dim)) throw std::invalid_argument("hash dimension must be a power of two");
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const auto& t : tokens) {
    ++counts[static_cast<std::uint32_t>(token_hash(t, seed) & (dim - 1))];
  }
  HashedFeatures out{dim, {}};
  out.entries.reserve(counts.size());
  for (const auto& [index, count] : counts) out.entries.push_back({index, count});
  return out;
}

/// Feature weights in group "backbone" followed by the bias in group "head".
struct ToyModel {
  std::uint32_t dim = kDefaultHashDim;
  std::uint64_t seed = 0;  // featurization seed
  ParamVector weights;

  static ToyModel zeros(std::uint32_t dim, std::uint64_t seed) {
    if (!is_power_of_two(dim)) throw std::invalid_argument("hash dimension must be a power of two");
    ToyModel m{dim, seed, {}};
    m.weights.append("backbone", dim);
    m.weights.append("head", 1);
    return m;
  }

  double bias() const { return weights.values[dim]; }
  double& bias() { return weights.values[dim]; }

  double logit(const HashedFeatures& x) const {
    if (x.dim != dim) {
      throw ShapeMismatch("features have dimension " + std::to_string(x.dim) +
                          ", model expects " + std::to_string(dim));
    }
    double z = bias();
    for (const auto& f : x.entries) z += weights.values[f.index] * f.count;
    return z;
  }

  /// Same model with a replacement parameter vector (e.g. EMA weights).
  ToyModel with_values(std::vector<double> values) const {
    if (values.size() != weights.values.size()) throw ShapeMismatch("parameter count differs");
    ToyModel m = *this;
    m.weights.values = std::move(values);
    return m;
  }

  friend bool operator==(const ToyModel&, const ToyModel&) = default;
};

inline double predict_proba(const ToyModel& model, const HashedFeatures& x) {
  return sigmoid(model.logit(x));
}

struct Example {
  HashedFeatures features;
  int label = 0;
};

enum class LossKind { kCrossEntropy, kFocal };

struct TrainConfig {
  LossKind loss = LossKind::kFocal;
  FocalParams focal;
  AdamWConfig adamw;
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  double ema_decay = 0.999;
  bool oversample = false;
  std::uint32_t dim = kDefaultHashDim;
  std::uint64_t hash_seed = 0;

  double loss_at(double z, int y) const {
    return loss == LossKind::kFocal ? focal_loss_logit(z, y, focal) : cross_entropy_logit(z, y);
  }
  double grad_at(double z, int y) const {
    return loss == LossKind::kFocal ? focal_loss_grad(z, y, focal) : cross_entropy_grad(z, y);
  }
};

struct TrainResult {
  ToyModel model;
  EmaState ema;
  double initial_loss = 0.0;  // mean loss over the training set at zero weights
  double final_loss = 0.0;    // same, with the final raw weights
  std::vector<double> epoch_losses;

  /// The model with bias-corrected EMA weights, used for evaluation.
  ToyModel ema_model() const { return model.with_values(ema_debias(ema)); }
};

namespace detail {

inline double mean_loss(const ToyModel& model, std::span<const Example> data,
                        std::span<const std::size_t> rows, const TrainConfig& config) {
  double total = 0.0;
  for (std::size_t r : rows) total += config.loss_at(model.logit(data[r].features), data[r].label);
  return total / static_cast<double>(rows.size());
}

}  // namespace detail

/// Mini-batch AdamW with an EMA shadow updated after every step.
/// Deterministic for a given (data, config); single-threaded.
inline TrainResult train(std::span<const Example> data, const TrainConfig& config) {
  config.adamw.validate();
  config.focal.validate();
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& ex : data) {
    if (ex.features.dim != config.dim) throw ShapeMismatch("example dimension differs from config");
    labels.push_back(ex.label);
  }
  detail::require_both_classes(labels);

  std::vector<std::size_t> rows;
  if (config.oversample) {
    rows = oversample_indices(labels, config.seed ^ 0x6f76657273616d70ULL);
  } else {
    rows.resize(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }

  TrainResult result{ToyModel::zeros(config.dim, config.hash_seed), {}, 0.0, 0.0, {}};
  ToyModel& model = result.model;
  result.ema = EmaState::zeros(config.ema_decay, model.weights.size());
  result.initial_loss = detail::mean_loss(model, data, rows, config);

  // Entries never touched by a gradient stay all-zero, a fixed point of both
  // AdamW and the EMA, so updates only visit entries seen so far.
  OptState opt;
  std::vector<double> grads(model.weights.size(), 0.0);
  std::vector<char> seen(model.weights.size(), 0);
  std::vector<std::uint32_t> active{config.dim};
  seen[config.dim] = 1;
  Rng rng(config.seed);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(std::span(rows), rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < rows.size(); begin += config.batch_size) {
      const std::size_t end = std::min(rows.size(), begin + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (std::uint32_t i : active) grads[i] = 0.0;
      for (std::size_t b = begin; b < end; ++b) {
        const Example& ex = data[rows[b]];
        const double z = model.logit(ex.features);
        epoch_loss += config.loss_at(z, ex.label);
        const double g = config.grad_at(z, ex.label) * scale;
        for (const auto& f : ex.features.entries) {
          if (!seen[f.index]) {
            seen[f.index] = 1;
            active.push_back(f.index);
          }
          grads[f.index] += g * f.count;
        }
        grads[config.dim] += g;
      }
      adamw_step_active(opt, model.weights, grads, active, config.adamw);
      ema_update_active(result.ema, model.weights.values, active);
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(rows.size()));
  }
  result.final_loss = detail::mean_loss(model, data, rows, config);
  return result;
}

/// Seed used for fold f's shuffling and oversampling.
inline std::uint64_t fold_seed(std::uint64_t seed, std::size_t f) {
  return seed + 0x9e3779b97f4a7c15ULL * (f + 1);
}

/// One model per fold, each trained on the records outside that fold with
/// its own fold_seed.
inline std::vector<TrainResult> train_fold_models(std::span<const Example> data,
                                                  std::span<const std::size_t> fold_of,
                                                  std::size_t k, const TrainConfig& config) {
  if (fold_of.size() != data.size()) throw LengthMismatch("fold assignment length differs");
  std::vector<TrainResult> models;
  models.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Example> subset;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] != f) subset.push_back(data[i]);
    }
    TrainConfig fold_config = config;
    fold_config.seed = fold_seed(config.seed, f);
    models.push_back(train(subset, fold_config));
  }
  return models;
}

inline std::vector<double> predict_all(const ToyModel& model, std::span<const HashedFeatures> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict_proba(model, x));
  return out;
}

/// Mean-pooled probabilities of several models.
inline std::vector<double> ensemble_proba(std::span<const ToyModel> models,
                                          std::span<const HashedFeatures> xs) {
  std::vector<std::vector<double>> members;
  members.reserve(models.size());
  for (const auto& m : models) members.push_back(predict_all(m, xs));
  return mean_pool_probs(members);
}

}  // namespace gridner
