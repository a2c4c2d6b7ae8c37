#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace discern {

/// Exact base-ten number: coefficient * 10^-scale with scale >= 0.
/// Representations are normalized (no trailing fractional zeros), so two
/// Decimals compare equal iff they denote the same value, and str() is a
/// canonical rendering. All arithmetic is exact; there is no binary float
/// anywhere in the pipeline, so 16.3 million minus 12 million is 4300000
/// with zero tolerance.
class Decimal {
 public:
  using Int = boost::multiprecision::cpp_int;

  Decimal() = default;
  Decimal(long long v) : coeff_(v) {}  // NOLINT: implicit by design
  Decimal(int v) : coeff_(v) {}        // NOLINT

  static Decimal from_parts(Int coeff, int scale) {
    Decimal d;
    d.coeff_ = std::move(coeff);
    d.scale_ = scale;
    d.normalize();
    return d;
  }

  /// Strict literal parser: [-]digits[.digits]. No commas, no symbols.
  static std::optional<Decimal> parse(std::string_view text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && text[i] == '-') {
      neg = true;
      ++i;
    }
    std::size_t int_begin = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    if (i == int_begin) return std::nullopt;
    std::size_t frac_begin = 0, frac_end = 0;
    if (i < text.size() && text[i] == '.') {
      ++i;
      frac_begin = i;
      while (i < text.size() && is_digit(text[i])) ++i;
      frac_end = i;
      if (frac_end == frac_begin) return std::nullopt;
    }
    if (i != text.size()) return std::nullopt;

    Int coeff = 0;
    for (std::size_t k = int_begin; k < i; ++k) {
      if (text[k] == '.') continue;
      coeff *= 10;
      coeff += text[k] - '0';
    }
    if (neg) coeff = -coeff;
    return from_parts(std::move(coeff), static_cast<int>(frac_end - frac_begin));
  }

  Decimal operator+(const Decimal& o) const {
    auto [a, b, s] = aligned(*this, o);
    return from_parts(a + b, s);
  }
  Decimal operator-(const Decimal& o) const {
    auto [a, b, s] = aligned(*this, o);
    return from_parts(a - b, s);
  }
  Decimal operator-() const { return from_parts(-coeff_, scale_); }

  bool operator==(const Decimal& o) const {
    return scale_ == o.scale_ && coeff_ == o.coeff_;
  }
  std::strong_ordering operator<=>(const Decimal& o) const {
    auto [a, b, s] = aligned(*this, o);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Value multiplied by 10^k (k may be negative).
  Decimal shifted_pow10(int k) const {
    Decimal d = *this;
    if (k >= 0) {
      if (d.scale_ >= k) {
        d.scale_ -= k;
      } else {
        d.coeff_ *= pow10(k - d.scale_);
        d.scale_ = 0;
      }
    } else {
      d.scale_ += -k;
    }
    d.normalize();
    return d;
  }

  bool is_zero() const { return coeff_ == 0; }
  bool is_negative() const { return coeff_ < 0; }
  bool is_integer() const { return scale_ == 0; }

  /// Integer extraction; nullopt when fractional or out of int64 range.
  std::optional<long long> as_int() const {
    if (!is_integer()) return std::nullopt;
    static const Int kMin = Int(std::numeric_limits<long long>::min());
    static const Int kMax = Int(std::numeric_limits<long long>::max());
    if (coeff_ < kMin || coeff_ > kMax) return std::nullopt;
    return coeff_.convert_to<long long>();
  }

  /// Canonical rendering: minus sign, no leading '+', no trailing zeros,
  /// fractions below one rendered with a leading "0.".
  std::string str() const {
    std::string digits = Int(boost::multiprecision::abs(coeff_)).str();
    std::string out;
    if (coeff_ < 0) out.push_back('-');
    if (scale_ == 0) {
      out += digits;
      return out;
    }
    if (digits.size() <= static_cast<std::size_t>(scale_)) {
      out += "0.";
      out.append(scale_ - digits.size(), '0');
      out += digits;
    } else {
      out.append(digits, 0, digits.size() - scale_);
      out.push_back('.');
      out.append(digits, digits.size() - scale_, std::string::npos);
    }
    return out;
  }

 private:
  Int coeff_ = 0;
  int scale_ = 0;

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  static Int pow10(int k) {
    Int p = 1;
    for (int i = 0; i < k; ++i) p *= 10;
    return p;
  }

  void normalize() {
    if (coeff_ == 0) {
      scale_ = 0;
      return;
    }
    while (scale_ > 0 && coeff_ % 10 == 0) {
      coeff_ /= 10;
      --scale_;
    }
  }

  struct Aligned {
    Int a, b;
    int scale;
  };
  static Aligned aligned(const Decimal& x, const Decimal& y) {
    if (x.scale_ == y.scale_) return {x.coeff_, y.coeff_, x.scale_};
    if (x.scale_ < y.scale_)
      return {x.coeff_ * pow10(y.scale_ - x.scale_), y.coeff_, y.scale_};
    return {x.coeff_, y.coeff_ * pow10(x.scale_ - y.scale_), x.scale_};
  }
};

}  // namespace discern
