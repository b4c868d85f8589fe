#pragma once

// Seeded synthetic tweet-like classification data with a controllable
// positive rate. Positives lean on a set of cue words that also leak into
// negatives, so the task is learnable but not separable.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridner/ensemble.hpp"
#include "gridner/random.hpp"

namespace gridner {

namespace detail {

inline constexpr std::array<std::string_view, 48> kFillerWords{
    "the", "a", "today", "really", "so", "my", "is", "was", "just", "feel",
    "going", "home", "work", "day", "night", "weekend", "friends", "family", "coffee", "game",
    "watching", "music", "new", "again", "still", "think", "know", "people", "time", "morning",
    "lol", "love", "hate", "week", "school", "movie", "dinner", "sleep", "tired", "happy",
    "weather", "news", "city", "phone", "long", "finally", "maybe", "everyone"};

// Strong cues are rare in negatives; weak cues are common in both classes.
inline constexpr std::array<std::string_view, 6> kStrongCues{
    "diagnosed", "tested", "positive", "quarantine", "isolating", "symptoms"};
inline constexpr std::array<std::string_view, 6> kWeakCues{
    "covid", "fever", "cough", "sick", "virus", "test"};

inline constexpr std::array<std::string_view, 6> kEmojis{"😷", "🤒", "😂", "🙏", "😭", "👍"};
inline constexpr std::array<std::string_view, 5> kHashtags{"covid", "health", "mood", "life", "stayhome"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& words, Rng& rng) {
  return words[uniform_below(rng, N)];
}

}  // namespace detail

/// n records, exactly round(n * pos_rate) of them positive, ids "s000000"...
inline LabeledDataset generate_synthetic(std::size_t n, double pos_rate, std::uint64_t seed) {
  if (!(pos_rate > 0.0 && pos_rate < 1.0)) throw std::invalid_argument("pos_rate must lie in (0, 1)");
  const auto positives = static_cast<std::size_t>(std::llround(static_cast<double>(n) * pos_rate));
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < positives; ++i) labels[i] = 1;
  Rng rng(seed);
  shuffle(std::span(labels), rng);

  LabeledDataset out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    std::vector<std::string> words;
    const std::size_t filler = 6 + uniform_below(rng, 9);
    for (std::size_t w = 0; w < filler; ++w) words.emplace_back(detail::pick(detail::kFillerWords, rng));

    const double strong_p = y ? 0.55 : 0.06;
    const double weak_p = y ? 0.6 : 0.25;
    for (int tries = 0; tries < 2; ++tries) {
      if (uniform01(rng) < strong_p) words.emplace_back(detail::pick(detail::kStrongCues, rng));
      if (uniform01(rng) < weak_p) words.emplace_back(detail::pick(detail::kWeakCues, rng));
    }
    shuffle(std::span(words), rng);

    std::string text;
    if (uniform01(rng) < 0.3) text += "@friend" + std::to_string(uniform_below(rng, 50)) + " ";
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w) text += ' ';
      text += words[w];
    }
    if (uniform01(rng) < 0.3) text += " #" + std::string(detail::pick(detail::kHashtags, rng));
    if (uniform01(rng) < 0.25) text += " " + std::string(detail::pick(detail::kEmojis, rng));

    std::string id = std::to_string(i);
    id = "s" + std::string(6 - std::min<std::size_t>(6, id.size()), '0') + id;
    out.push_back({std::move(id), std::move(text), y});
  }
  return out;
}

}  // namespace gridner
