#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "discern/decimal.hpp"

namespace discern {

/// One token of source text. text may differ from the raw substring when
/// surrounding punctuation was stripped or a magnitude word was merged in;
/// [begin,end) always covers the region of the source the token came from.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct NumberOptions {
  /// Opt-in lexicon for spelled-out numbers ("twenty-five"), zero to hundred.
  bool word_numbers = false;
};

namespace detail {

inline bool ascii_digit(char c) { return c >= '0' && c <= '9'; }

inline bool ascii_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

// Currency prefixes kept attached to digits: $, UTF-8 pound, UTF-8 euro.
inline std::size_t currency_prefix_len(std::string_view s) {
  if (s.starts_with("$")) return 1;
  if (s.starts_with("\xC2\xA3")) return 2;      // pound sign
  if (s.starts_with("\xE2\x82\xAC")) return 3;  // euro sign
  return 0;
}

inline std::optional<int> magnitude_exponent(std::string_view word) {
  std::string w = to_lower(word);
  if (w == "thousand") return 3;
  if (w == "million") return 6;
  if (w == "billion") return 9;
  return std::nullopt;
}

inline const std::map<std::string, int>& word_number_lexicon() {
  static const std::map<std::string, int> lex = [] {
    std::map<std::string, int> m;
    const char* units[] = {"zero", "one",  "two", "three", "four",
                           "five", "six",  "seven", "eight", "nine",
                           "ten",  "eleven", "twelve", "thirteen", "fourteen",
                           "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
    for (int i = 0; i < 20; ++i) m[units[i]] = i;
    const char* tens[] = {"twenty", "thirty", "forty", "fifty",
                          "sixty", "seventy", "eighty", "ninety"};
    for (int t = 0; t < 8; ++t) {
      int base = (t + 2) * 10;
      m[tens[t]] = base;
      for (int u = 1; u <= 9; ++u)
        m[std::string(tens[t]) + "-" + units[u]] = base + u;
    }
    m["hundred"] = 100;
    return m;
  }();
  return lex;
}

// Validates optional comma grouping (first group 1-3 digits, then groups of
// exactly 3) and returns the literal with commas removed.
inline std::optional<std::string> strip_comma_grouping(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') out.push_back(s[i++]);
  std::size_t group = 0;
  bool first_group = true;
  bool saw_comma = false;
  while (i < s.size() && s[i] != '.') {
    if (s[i] == ',') {
      if (first_group ? (group < 1 || group > 3) : group != 3) return std::nullopt;
      saw_comma = true;
      first_group = false;
      group = 0;
      ++i;
      continue;
    }
    if (!ascii_digit(s[i])) return std::nullopt;
    out.push_back(s[i]);
    ++group;
    ++i;
  }
  if (saw_comma && group != 3) return std::nullopt;
  out += s.substr(i);  // fractional part, validated by Decimal::parse
  return out;
}

}  // namespace detail

/// Numeric-literal parser for single tokens. Tolerates comma grouping, a
/// leading currency symbol, a trailing %, and a merged magnitude word
/// ("$16.3 million" -> 16300000). Total: returns nullopt for anything else.
inline std::optional<Decimal> parse_number(std::string_view token,
                                           const NumberOptions& opts = {}) {
  if (token.empty()) return std::nullopt;

  // Merged magnitude tokens carry a single internal space.
  if (auto space = token.find(' '); space != std::string_view::npos) {
    auto base = parse_number(token.substr(0, space), opts);
    auto exp = detail::magnitude_exponent(token.substr(space + 1));
    if (base && exp && token.find(' ', space + 1) == std::string_view::npos)
      return base->shifted_pow10(*exp);
    return std::nullopt;
  }

  std::string_view s = token;
  s.remove_prefix(detail::currency_prefix_len(s));
  if (s.ends_with('%') && s.size() > 1) s.remove_suffix(1);
  if (!s.empty()) {
    if (auto plain = detail::strip_comma_grouping(s))
      if (auto value = Decimal::parse(*plain)) return value;
  }

  if (opts.word_numbers) {
    const auto& lex = detail::word_number_lexicon();
    auto it = lex.find(detail::to_lower(token));
    if (it != lex.end()) return Decimal(it->second);
  }
  return std::nullopt;
}

struct TokenizeOptions {
  NumberOptions numbers;
};

/// Deterministic whitespace tokenizer with three refinements:
///   - chunks containing a digit split at every hyphen ("15-year-long" ->
///     15, year, long) so numerals locked inside compounds become
///     extractable; purely alphabetic compounds ("Twenty-five") stay whole,
///   - leading/trailing ASCII punctuation is stripped, except a currency
///     symbol attached to leading digits and a % attached to trailing ones,
///   - a numeric token absorbs an immediately following magnitude word
///     ("16.3" + "million" becomes one token).
inline std::vector<Token> tokenize(std::string_view text,
                                   const TokenizeOptions& opts = {}) {
  std::vector<Token> raw;

  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t begin = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == begin) break;

    // Chunks containing a digit split at every hyphen; purely alphabetic
    // compounds keep theirs.
    bool has_digit = false;
    for (std::size_t k = begin; k < i; ++k)
      if (detail::ascii_digit(text[k])) has_digit = true;
    std::size_t piece_begin = begin;
    for (std::size_t k = begin; k <= i; ++k) {
      bool cut = k == i || (text[k] == '-' && has_digit);
      if (!cut) continue;
      if (k > piece_begin) raw.push_back({std::string(text.substr(piece_begin, k - piece_begin)), piece_begin, k});
      piece_begin = k + 1;
    }
  }

  // Strip punctuation from both ends.
  std::vector<Token> stripped;
  for (Token& t : raw) {
    std::string_view s = t.text;
    std::size_t b = t.begin, e = t.end;
    while (!s.empty() && detail::ascii_punct(s.front())) {
      std::size_t cur = detail::currency_prefix_len(s);
      if (cur > 0 && cur < s.size() && detail::ascii_digit(s[cur])) break;
      s.remove_prefix(1);
      ++b;
    }
    while (!s.empty() && detail::ascii_punct(s.back())) {
      if (s.back() == '%' && s.size() > 1 && detail::ascii_digit(s[s.size() - 2])) break;
      s.remove_suffix(1);
      --e;
    }
    if (!s.empty()) stripped.push_back({std::string(s), b, e});
  }

  // Merge "<number> <magnitude word>" pairs.
  std::vector<Token> out;
  for (std::size_t k = 0; k < stripped.size(); ++k) {
    if (k + 1 < stripped.size() &&
        detail::magnitude_exponent(stripped[k + 1].text) &&
        parse_number(stripped[k].text, opts.numbers)) {
      out.push_back({stripped[k].text + " " + stripped[k + 1].text,
                     stripped[k].begin, stripped[k + 1].end});
      ++k;
      continue;
    }
    out.push_back(std::move(stripped[k]));
  }
  return out;
}

}  // namespace discern
