#pragma once

// Tweet normalization (emojis, @mentions, #hashtags, whitespace) and a
// punctuation-aware whitespace tokenizer. All offsets are Unicode codepoint
// offsets. Every rewriting step records, for each output codepoint, the source
// interval it came from so that annotated spans can be carried through.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridner/default_emoji_map.hpp"
#include "gridner/errors.hpp"
#include "gridner/unicode.hpp"

namespace gridner {

/// Half-open codepoint interval [start, end).
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const CharSpan&, const CharSpan&) = default;
  friend auto operator<=>(const CharSpan&, const CharSpan&) = default;
};

struct Token {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Emoji sequence -> description. Lookup is longest-match-first.
///
/// Keys must start with an emoji codepoint and descriptions must not contain
/// any; together these make normalization idempotent.
class EmojiMap {
 public:
  EmojiMap() = default;

  void add(std::u32string key, std::string_view description) {
    if (key.empty()) throw DataError("emoji map: empty key");
    if (!unicode::is_emoji(key.front())) {
      throw DataError("emoji map: key '" + unicode::encode(key) +
                      "' does not start with an emoji codepoint");
    }
    std::u32string desc = unicode::decode(description);
    const auto first = std::find_if_not(desc.begin(), desc.end(), unicode::is_space);
    const auto last = std::find_if_not(desc.rbegin(), desc.rend(), unicode::is_space).base();
    if (first >= last) {
      throw DataError("emoji map: empty description for '" + unicode::encode(key) + "'");
    }
    desc = std::u32string(first, last);
    if (std::any_of(desc.begin(), desc.end(), unicode::is_emoji)) {
      throw DataError("emoji map: description of '" + unicode::encode(key) +
                      "' contains an emoji codepoint");
    }
    max_key_len_ = std::max(max_key_len_, key.size());
    entries_.insert_or_assign(std::move(key), std::move(desc));
  }

  /// Parses the TSV format: `<emoji sequence>\t<description>`, `#` comments.
  static EmojiMap parse_tsv(std::string_view content) {
    EmojiMap map;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
      std::size_t eol = content.find('\n', pos);
      if (eol == std::string_view::npos) eol = content.size();
      std::string_view line = content.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw DataError("emoji map line " + std::to_string(line_no) + ": missing tab");
      }
      try {
        map.add(unicode::decode(line.substr(0, tab)), line.substr(tab + 1));
      } catch (const DataError& e) {
        throw DataError("emoji map line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    return map;
  }

  static EmojiMap load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open emoji map " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tsv(buf.str());
  }

  static const EmojiMap& builtin() {
    static const EmojiMap map = parse_tsv(kDefaultEmojiMapTsv);
    return map;
  }

  /// Longest key matching text at pos: (key length, description).
  std::optional<std::pair<std::size_t, const std::u32string*>> match(
      std::u32string_view text, std::size_t pos) const {
    const std::size_t longest = std::min(max_key_len_, text.size() - pos);
    for (std::size_t len = longest; len > 0; --len) {
      auto it = entries_.find(std::u32string(text.substr(pos, len)));
      if (it != entries_.end()) return std::pair{len, &it->second};
    }
    return std::nullopt;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::u32string, std::u32string>& entries() const noexcept {
    return entries_;
  }

  friend bool operator==(const EmojiMap& a, const EmojiMap& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::map<std::u32string, std::u32string> entries_;
  std::size_t max_key_len_ = 0;
};

/// Codepoint text plus, for every codepoint, the source interval it derives from.
struct AlignedText {
  std::u32string text;
  std::vector<CharSpan> origin;

  static AlignedText identity(std::u32string text) {
    AlignedText out;
    out.origin.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) out.origin.push_back({i, i + 1});
    out.text = std::move(text);
    return out;
  }

  void push(char32_t cp, CharSpan from) {
    text.push_back(cp);
    origin.push_back(from);
  }

  void push(std::u32string_view s, CharSpan from) {
    for (char32_t cp : s) push(cp, from);
  }

  /// Source interval covering output positions [first, last).
  CharSpan source_of(std::size_t first, std::size_t last) const {
    return {origin[first].start, origin[last - 1].end};
  }

  /// Maps a source span onto this text: the smallest output range holding
  /// every non-space codepoint derived from the span.
  std::optional<CharSpan> map_span(CharSpan source) const {
    std::optional<CharSpan> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (unicode::is_space(text[i])) continue;
      if (origin[i].start < source.end && origin[i].end > source.start) {
        if (!out) out = CharSpan{i, i + 1};
        out->end = i + 1;
      }
    }
    return out;
  }
};

namespace detail {

/// Re-expresses `next` (aligned to prev.text) in terms of prev's source.
inline AlignedText compose(const AlignedText& prev, AlignedText next) {
  for (auto& span : next.origin) span = prev.source_of(span.start, span.end);
  return next;
}

inline AlignedText emojis_pass(std::u32string_view in, const EmojiMap& map) {
  AlignedText out;
  std::size_t i = 0;
  while (i < in.size()) {
    if (!unicode::is_emoji(in[i])) {
      out.push(in[i], {i, i + 1});
      ++i;
    } else if (auto hit = map.match(in, i)) {
      const auto [len, desc] = *hit;
      const CharSpan from{i, i + len};
      out.push(U' ', from);
      out.push(*desc, from);
      out.push(U' ', from);
      i += len;
    } else {
      ++i;  // unknown emoji: dropped
    }
  }
  return out;
}

inline AlignedText usernames_pass(std::u32string_view in) {
  AlignedText out;
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == U'@' && i + 1 < in.size() && unicode::is_word_char(in[i + 1])) {
      std::size_t j = i + 1;
      while (j < in.size() && unicode::is_word_char(in[j])) ++j;
      out.push(U"@user", {i, j});
      i = j;
    } else {
      out.push(in[i], {i, i + 1});
      ++i;
    }
  }
  return out;
}

inline AlignedText hashtags_pass(std::u32string_view in) {
  AlignedText out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    out.push(in[i], {i, i + 1});
    if (in[i] == U'#' && i + 1 < in.size() && unicode::is_word_char(in[i + 1])) {
      out.push(U' ', {i, i + 1});
    }
  }
  return out;
}

inline AlignedText collapse_pass(std::u32string_view in) {
  AlignedText out;
  std::size_t i = 0;
  while (i < in.size()) {
    if (unicode::is_space(in[i])) {
      std::size_t j = i;
      while (j < in.size() && unicode::is_space(in[j])) ++j;
      if (i > 0 && j < in.size()) out.push(U' ', {i, j});
      i = j;
    } else {
      out.push(in[i], {i, i + 1});
      ++i;
    }
  }
  return out;
}

}  // namespace detail

inline std::string replace_usernames(std::string_view text) {
  return unicode::encode(detail::usernames_pass(unicode::decode(text)).text);
}

inline std::string split_hashtags(std::string_view text) {
  return unicode::encode(detail::hashtags_pass(unicode::decode(text)).text);
}

inline std::string replace_emojis(std::string_view text, const EmojiMap& map) {
  return unicode::encode(detail::emojis_pass(unicode::decode(text), map).text);
}

/// Full normalization with source alignment: emojis, then usernames, then
/// hashtags, then whitespace collapsing.
inline AlignedText normalize_aligned(std::string_view text,
                                     const EmojiMap& map = EmojiMap::builtin()) {
  AlignedText acc = AlignedText::identity(unicode::decode(text));
  acc = detail::compose(acc, detail::emojis_pass(acc.text, map));
  acc = detail::compose(acc, detail::usernames_pass(acc.text));
  acc = detail::compose(acc, detail::hashtags_pass(acc.text));
  acc = detail::compose(acc, detail::collapse_pass(acc.text));
  return acc;
}

inline std::string normalize(std::string_view text,
                             const EmojiMap& map = EmojiMap::builtin()) {
  return unicode::encode(normalize_aligned(text, map).text);
}

/// Whitespace split, then leading and trailing punctuation codepoints are
/// peeled off one token each.
inline std::vector<Token> tokenize(std::u32string_view text) {
  std::vector<Token> tokens;
  const auto emit = [&](std::size_t a, std::size_t b) {
    tokens.push_back({unicode::encode(text.substr(a, b - a)), a, b});
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (unicode::is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && !unicode::is_space(text[end])) ++end;

    std::size_t a = i;
    while (a < end && unicode::is_punct(text[a])) {
      emit(a, a + 1);
      ++a;
    }
    std::size_t b = end;
    while (b > a && unicode::is_punct(text[b - 1])) --b;
    if (a < b) emit(a, b);
    for (std::size_t k = b; k < end; ++k) emit(k, k + 1);
    i = end;
  }
  return tokens;
}

inline std::vector<Token> tokenize(std::string_view text) {
  return tokenize(std::u32string_view(unicode::decode(text)));
}

/// Raw post, its normalized form, and the tokens of the normalized form.
struct Document {
  std::string raw;
  AlignedText normalized;
  std::vector<Token> tokens;

  static Document from_raw(std::string raw, const EmojiMap& map = EmojiMap::builtin()) {
    Document doc;
    doc.normalized = normalize_aligned(raw, map);
    doc.tokens = tokenize(std::u32string_view(doc.normalized.text));
    doc.raw = std::move(raw);
    return doc;
  }

  std::string text() const { return unicode::encode(normalized.text); }
};

}  // namespace gridner
