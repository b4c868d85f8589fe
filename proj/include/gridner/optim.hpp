#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gridner/errors.hpp"

namespace gridner {

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

/// Probabilities are clipped to [kProbClip, 1 - kProbClip] before any log.
inline constexpr double kProbClip = 1e-12;

struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;

  void validate() const {
    // alpha == 1 is accepted so the positive branch can reduce to cross-entropy.
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("focal alpha must lie in (0, 1]");
    }
    if (!(gamma >= 0.0)) throw std::invalid_argument("focal gamma must be >= 0");
  }
};

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double clip_prob(double p) {
  return std::min(std::max(p, kProbClip), 1.0 - kProbClip);
}

inline double cross_entropy(double p, int y) {
  p = clip_prob(p);
  return -(y * std::log(p) + (1 - y) * std::log(1.0 - p));
}

/// Alpha-balanced focal loss. The positive branch is
/// -alpha (1-p)^gamma log p; the negative branch mirrors it with weight
/// (1 - alpha).
inline double focal_loss(double p, int y, const FocalParams& params) {
  p = clip_prob(p);
  if (y == 1) return -params.alpha * std::pow(1.0 - p, params.gamma) * std::log(p);
  return -(1.0 - params.alpha) * std::pow(p, params.gamma) * std::log(1.0 - p);
}

/// Focal loss of sigmoid(z), evaluated in logit space (no clipping needed).
inline double focal_loss_logit(double z, int y, const FocalParams& params) {
  // For y = 0 the loss at z equals the y = 1 form at -z with weight 1 - alpha.
  const double s = y == 1 ? z : -z;
  const double weight = y == 1 ? params.alpha : 1.0 - params.alpha;
  const double miss = sigmoid(-s);  // 1 - p_t
  return weight * std::pow(miss, params.gamma) * softplus(-s);
}

/// d focal_loss_logit / dz, closed form.
inline double focal_loss_grad(double z, int y, const FocalParams& params) {
  const double s = y == 1 ? z : -z;
  const double weight = y == 1 ? params.alpha : 1.0 - params.alpha;
  const double hit = sigmoid(s);    // p_t
  const double miss = sigmoid(-s);  // 1 - p_t
  const double log_hit = -softplus(-s);
  // d/ds [ -(1-q)^g log q ] with q = sigmoid(s)
  //   = (1-q)^g [ g q log q - (1-q) ]
  const double ds = weight * std::pow(miss, params.gamma) *
                    (params.gamma * hit * log_hit - miss);
  return y == 1 ? ds : -ds;
}

inline double cross_entropy_logit(double z, int y) {
  return y == 1 ? softplus(-z) : softplus(z);
}

inline double cross_entropy_grad(double z, int y) { return sigmoid(z) - y; }

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Flat parameter vector; every entry belongs to a named group.
struct ParamVector {
  std::vector<double> values;
  std::vector<std::uint32_t> group;  // index into group_names, one per value
  std::vector<std::string> group_names;

  /// Appends `count` entries in group `name`, creating the group if needed.
  void append(const std::string& name, std::size_t count, double init = 0.0) {
    std::uint32_t id = 0;
    while (id < group_names.size() && group_names[id] != name) ++id;
    if (id == group_names.size()) group_names.push_back(name);
    values.insert(values.end(), count, init);
    group.insert(group.end(), count, id);
  }

  std::size_t size() const noexcept { return values.size(); }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

// ---------------------------------------------------------------------------
// EMA
// ---------------------------------------------------------------------------

struct EmaState {
  double decay = 0.999;
  std::uint64_t step = 0;
  std::vector<double> shadow;

  /// Zero shadow of the given size (v_0 = 0).
  static EmaState zeros(double decay, std::size_t size) {
    if (!(decay > 0.0 && decay < 1.0)) throw std::invalid_argument("EMA decay must lie in (0, 1)");
    return {decay, 0, std::vector<double>(size, 0.0)};
  }

  friend bool operator==(const EmaState&, const EmaState&) = default;
};

namespace detail {

inline void check_ema_size(const EmaState& state, std::size_t size) {
  if (size != state.shadow.size()) {
    throw LengthMismatch("EMA: tracking " + std::to_string(state.shadow.size()) +
                         " values, got " + std::to_string(size));
  }
}

inline void ema_entry(EmaState& state, double theta, std::size_t i) {
  if (theta == 0.0 && state.shadow[i] == 0.0) return;  // fixed point
  state.shadow[i] = state.decay * state.shadow[i] + (1.0 - state.decay) * theta;
}

}  // namespace detail

inline void ema_update_inplace(EmaState& state, std::span<const double> theta) {
  detail::check_ema_size(state, theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) detail::ema_entry(state, theta[i], i);
  ++state.step;
}

/// Same result as ema_update_inplace when every entry outside `active` has a
/// zero parameter and a zero shadow.
inline void ema_update_active(EmaState& state, std::span<const double> theta,
                              std::span<const std::uint32_t> active) {
  detail::check_ema_size(state, theta.size());
  for (std::uint32_t i : active) detail::ema_entry(state, theta[i], i);
  ++state.step;
}

inline EmaState ema_update(EmaState state, std::span<const double> theta) {
  ema_update_inplace(state, theta);
  return state;
}

inline EmaState ema_update(EmaState state, const ParamVector& theta) {
  return ema_update(std::move(state), theta.values);
}

/// shadow / (1 - decay^step).
inline std::vector<double> ema_debias(const EmaState& state) {
  if (state.step == 0) throw ZeroSteps("EMA: bias correction needs at least one update");
  const double norm = 1.0 - std::pow(state.decay, static_cast<double>(state.step));
  std::vector<double> out(state.shadow.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = state.shadow[i] / norm;
  return out;
}

// ---------------------------------------------------------------------------
// AdamW
// ---------------------------------------------------------------------------

struct GroupHyper {
  double lr = 3e-5;
  double weight_decay = 0.01;

  friend bool operator==(const GroupHyper&, const GroupHyper&) = default;
};

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::map<std::string, GroupHyper> groups{
      {"backbone", {3e-5, 0.01}},
      {"head", {3e-4, 0.0}},
  };

  void validate() const {
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("AdamW beta1 must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("AdamW beta2 must lie in [0, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("AdamW eps must be > 0");
    for (const auto& [name, g] : groups) {
      if (!(g.lr >= 0.0)) throw std::invalid_argument("AdamW lr of group '" + name + "' must be >= 0");
      if (!(g.weight_decay >= 0.0)) {
        throw std::invalid_argument("AdamW weight decay of group '" + name + "' must be >= 0");
      }
    }
  }
};

struct OptState {
  std::uint64_t step = 0;
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment

  friend bool operator==(const OptState&, const OptState&) = default;
};

namespace detail {

/// Validates shapes, lazily sizes the moments, advances the step and returns
/// the per-group hyperparameters.
inline std::vector<GroupHyper> begin_adamw_step(OptState& state, const ParamVector& params,
                                                std::size_t grads, const AdamWConfig& config) {
  const std::size_t size = params.values.size();
  if (grads != size || params.group.size() != size) {
    throw ShapeMismatch("AdamW: " + std::to_string(size) + " parameters, " +
                        std::to_string(grads) + " gradients");
  }
  if (state.m.empty() && state.v.empty() && state.step == 0) {
    state.m.assign(size, 0.0);
    state.v.assign(size, 0.0);
  }
  if (state.m.size() != size || state.v.size() != size) {
    throw ShapeMismatch("AdamW: optimizer state does not match the parameters");
  }
  std::vector<GroupHyper> hyper;
  hyper.reserve(params.group_names.size());
  for (const auto& name : params.group_names) {
    auto it = config.groups.find(name);
    if (it == config.groups.end()) {
      throw std::invalid_argument("AdamW: no hyperparameters for group '" + name + "'");
    }
    hyper.push_back(it->second);
  }
  ++state.step;
  return hyper;
}

struct AdamWEntry {
  const AdamWConfig& config;
  const std::vector<GroupHyper>& hyper;
  double correct1;
  double correct2;

  AdamWEntry(const AdamWConfig& c, const std::vector<GroupHyper>& h, std::uint64_t step)
      : config(c),
        hyper(h),
        correct1(1.0 - std::pow(c.beta1, static_cast<double>(step))),
        correct2(1.0 - std::pow(c.beta2, static_cast<double>(step))) {}

  void operator()(OptState& state, ParamVector& params, double g, std::size_t i) const {
    // An all-zero entry is a fixed point of the update; skipping it is exact.
    if (g == 0.0 && state.m[i] == 0.0 && state.v[i] == 0.0 && params.values[i] == 0.0) return;
    const GroupHyper& h = hyper[params.group[i]];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    if (h.lr == 0.0) return;
    double& theta = params.values[i];
    theta -= h.lr * h.weight_decay * theta;
    const double m_hat = state.m[i] / correct1;
    const double v_hat = state.v[i] / correct2;
    theta -= h.lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
};

}  // namespace detail

/// One AdamW step in place: decoupled decay, then the bias-corrected Adam
/// update, both with the hyperparameters of each entry's group.
inline void adamw_step_inplace(OptState& state, ParamVector& params,
                               std::span<const double> grads, const AdamWConfig& config) {
  const auto hyper = detail::begin_adamw_step(state, params, grads.size(), config);
  const detail::AdamWEntry update(config, hyper, state.step);
  for (std::size_t i = 0; i < grads.size(); ++i) update(state, params, grads[i], i);
}

/// Same result as adamw_step_inplace when every entry outside `active` has a
/// zero parameter, gradient and moments.
inline void adamw_step_active(OptState& state, ParamVector& params, std::span<const double> grads,
                              std::span<const std::uint32_t> active, const AdamWConfig& config) {
  const auto hyper = detail::begin_adamw_step(state, params, grads.size(), config);
  const detail::AdamWEntry update(config, hyper, state.step);
  for (std::uint32_t i : active) update(state, params, grads[i], i);
}

inline std::pair<OptState, ParamVector> adamw_step(OptState state, ParamVector params,
                                                   std::span<const double> grads,
                                                   const AdamWConfig& config) {
  adamw_step_inplace(state, params, grads, config);
  return {std::move(state), std::move(params)};
}

}  // namespace gridner
