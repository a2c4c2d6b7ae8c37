#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace discern {

/// Calendar date with optional components; at least one must be present.
struct Date {
  std::optional<int> day;    // 1..31
  std::optional<int> month;  // 1..12
  std::optional<int> year;

  bool operator==(const Date&) const = default;

  bool valid() const {
    if (!day && !month && !year) return false;
    if (day && (*day < 1 || *day > 31)) return false;
    if (month && (*month < 1 || *month > 12)) return false;
    return true;
  }
};

inline const std::array<std::string_view, 12>& month_names() {
  static const std::array<std::string_view, 12> names = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  return names;
}

inline std::optional<int> month_from_name(std::string_view word) {
  std::string low;
  low.reserve(word.size());
  for (char c : word) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  const auto& names = month_names();
  for (int m = 0; m < 12; ++m)
    if (low == names[m]) return m + 1;
  return std::nullopt;
}

/// Surface rendering, present fields in day-month-year order: "3 March 1992".
inline std::string render_date(const Date& d) {
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out.push_back(' ');
    out += part;
  };
  if (d.day) append(std::to_string(*d.day));
  if (d.month) {
    std::string name(month_names()[*d.month - 1]);
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    append(name);
  }
  if (d.year) append(std::to_string(*d.year));
  return out;
}

// Ordering for date filters and first/last selection. Absent components sort
// before any present one, so "March 1992" precedes "3 March 1992".
inline std::tuple<int, int, int> date_sort_key(const Date& d) {
  return {d.year.value_or(0), d.month.value_or(0), d.day.value_or(0)};
}

inline bool date_less(const Date& a, const Date& b) {
  return date_sort_key(a) < date_sort_key(b);
}

namespace detail {
inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}
}  // namespace detail

/// Recognizes "2 March 1992", "March 1992", and bare 3-4 digit years.
inline std::optional<Date> parse_date(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t b = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > b) words.push_back(text.substr(b, i - b));
  }

  auto year_of = [](std::string_view w) -> std::optional<int> {
    if (!detail::all_digits(w) || w.size() < 3 || w.size() > 4) return std::nullopt;
    return std::stoi(std::string(w));
  };
  auto day_of = [](std::string_view w) -> std::optional<int> {
    if (!detail::all_digits(w) || w.size() > 2) return std::nullopt;
    int v = std::stoi(std::string(w));
    if (v < 1 || v > 31) return std::nullopt;
    return v;
  };

  if (words.size() == 3) {
    auto d = day_of(words[0]);
    auto m = month_from_name(words[1]);
    auto y = year_of(words[2]);
    if (d && m && y) return Date{d, m, y};
  } else if (words.size() == 2) {
    auto m = month_from_name(words[0]);
    auto y = year_of(words[1]);
    if (m && y) return Date{std::nullopt, m, y};
  } else if (words.size() == 1) {
    if (auto y = year_of(words[0])) return Date{std::nullopt, std::nullopt, y};
  }
  return std::nullopt;
}

}  // namespace discern
