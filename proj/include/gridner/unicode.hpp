#pragma once

// UTF-8 codec and the small set of character classes the normalizer and
// tokenizer need. Classification is table-driven so results do not depend on
// the process locale.

#include <algorithm>
#include <span>
#include <cstddef>
#include <string>
#include <string_view>

#include "gridner/errors.hpp"

namespace gridner::unicode {

struct Range {
  char32_t lo;
  char32_t hi;  // inclusive
};

namespace detail {

constexpr bool in_ranges(std::span<const Range> table, char32_t cp) {
  auto it = std::upper_bound(table.begin(), table.end(), cp,
                             [](char32_t c, const Range& r) { return c < r.lo; });
  if (it == table.begin()) return false;
  --it;
  return cp <= it->hi;
}

// Letters and decimal digits of the scripts likely to show up in social-media
// text, plus combining marks (so decomposed accents stay inside words).
// Sorted, non-overlapping.
inline constexpr Range kWordRanges[] = {
    {0x30, 0x39},       {0x41, 0x5A},       {0x61, 0x7A},
    {0xAA, 0xAA},       {0xB5, 0xB5},       {0xBA, 0xBA},
    {0xC0, 0xD6},       {0xD8, 0xF6},       {0xF8, 0x2C1},
    {0x2C6, 0x2D1},     {0x2E0, 0x2E4},     {0x300, 0x374},
    {0x376, 0x377},     {0x37A, 0x37D},     {0x37F, 0x37F},
    {0x386, 0x386},     {0x388, 0x3F5},     {0x3F7, 0x481},
    {0x483, 0x52F},     {0x531, 0x556},     {0x560, 0x588},
    {0x591, 0x5BD},     {0x5D0, 0x5EA},     {0x610, 0x61A},
    {0x620, 0x669},     {0x66E, 0x6D3},     {0x6D5, 0x6DC},
    {0x6F0, 0x6FC},     {0x900, 0x963},     {0x966, 0x96F},
    {0x971, 0x97F},     {0xE01, 0xE3A},     {0xE40, 0xE4E},
    {0xE50, 0xE59},     {0x10A0, 0x10FF},   {0x1100, 0x11FF},
    {0x1AB0, 0x1AFF},   {0x1DC0, 0x1FBC},   {0x3041, 0x3096},
    {0x3099, 0x309A},   {0x309D, 0x309F},   {0x30A1, 0x30FA},
    {0x30FC, 0x30FF},   {0x3400, 0x4DBF},   {0x4E00, 0x9FFF},
    {0xAC00, 0xD7A3},   {0xF900, 0xFAFF},   {0xFE20, 0xFE2F},
    {0xFF10, 0xFF19},   {0xFF21, 0xFF3A},   {0xFF41, 0xFF5A},
    {0x20000, 0x2FFFF},
};

// Emoji pictographs, dingbats, modifiers and joiners. Kept disjoint from
// kWordRanges and from ASCII.
inline constexpr Range kEmojiRanges[] = {
    {0x200D, 0x200D},   {0x203C, 0x203C},   {0x2049, 0x2049},
    {0x20E3, 0x20E3},   {0x2122, 0x2122},   {0x2139, 0x2139},
    {0x2194, 0x2199},   {0x21A9, 0x21AA},   {0x231A, 0x231B},
    {0x2328, 0x2328},   {0x23CF, 0x23CF},   {0x23E9, 0x23F3},
    {0x23F8, 0x23FA},   {0x24C2, 0x24C2},   {0x25AA, 0x25AB},
    {0x25B6, 0x25B6},   {0x25C0, 0x25C0},   {0x25FB, 0x25FE},
    {0x2600, 0x27BF},   {0x2934, 0x2935},   {0x2B05, 0x2B07},
    {0x2B1B, 0x2B1C},   {0x2B50, 0x2B50},   {0x2B55, 0x2B55},
    {0x3030, 0x3030},   {0x303D, 0x303D},   {0x3297, 0x3297},
    {0x3299, 0x3299},   {0xFE0E, 0xFE0F},   {0x1F000, 0x1F0FF},
    {0x1F10D, 0x1F1FF}, {0x1F200, 0x1F2FF}, {0x1F300, 0x1F5FF},
    {0x1F600, 0x1F64F}, {0x1F680, 0x1F6FF}, {0x1F780, 0x1F7FF},
    {0x1F900, 0x1FAFF}, {0xE0020, 0xE007F},
};

}  // namespace detail

inline bool is_word_char(char32_t cp) {
  return cp == U'_' || detail::in_ranges(detail::kWordRanges, cp);
}

inline bool is_emoji(char32_t cp) {
  return detail::in_ranges(detail::kEmojiRanges, cp);
}

inline bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

/// Anything visible that is not part of a word: punctuation and symbols.
inline bool is_punct(char32_t cp) { return !is_space(cp) && !is_word_char(cp); }

/// Strict UTF-8 decoding; throws DataError on malformed input.
inline std::u32string decode(std::string_view in) {
  std::u32string out;
  out.reserve(in.size());
  std::size_t i = 0;
  const auto fail = [&](std::size_t at) {
    throw DataError("invalid UTF-8 at byte " + std::to_string(at));
  };
  while (i < in.size()) {
    const auto b0 = static_cast<unsigned char>(in[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
      fail(i);
    }
    if (i + len > in.size()) fail(i);
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(in[i + k]);
      if ((b & 0xC0) != 0x80) fail(i + k);
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view in) {
  std::string out;
  out.reserve(in.size());
  for (char32_t cp : in) append_utf8(out, cp);
  return out;
}

}  // namespace gridner::unicode
