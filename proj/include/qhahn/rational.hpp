#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "qhahn/scalar.hpp"

namespace qhahn {

// Exact rational used for sampled parameters and command-line input, so a
// tuple can be printed and re-read without loss.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return Rational{n, d};
  }

  // Accepts "p/q", "p", and plain decimals such as "-0.125" (converted
  // exactly by scaling with a power of ten).
  static std::optional<Rational> parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        std::size_t used = 0;
        std::int64_t n = std::stoll(text.substr(0, slash), &used);
        if (used != slash) return std::nullopt;
        std::string ds = text.substr(slash + 1);
        std::int64_t d = std::stoll(ds, &used);
        if (used != ds.size() || d == 0) return std::nullopt;
        return make(n, d);
      }
      auto dot = text.find('.');
      if (dot == std::string::npos) {
        std::size_t used = 0;
        std::int64_t n = std::stoll(text, &used);
        if (used != text.size()) return std::nullopt;
        return make(n, 1);
      }
      std::string frac = text.substr(dot + 1);
      std::string whole = text.substr(0, dot);
      if (frac.empty() || frac.size() > 17) return std::nullopt;
      for (char c : frac)
        if (c < '0' || c > '9') return std::nullopt;
      bool negative = !whole.empty() && whole[0] == '-';
      if (negative || (!whole.empty() && whole[0] == '+')) whole = whole.substr(1);
      for (char c : whole)
        if (c < '0' || c > '9') return std::nullopt;
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      std::int64_t n = (whole.empty() ? 0 : std::stoll(whole)) * scale + std::stoll(frac);
      return make(negative ? -n : n, scale);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
  Scalar to_scalar(long prec) const { return Scalar::rational(num, den, prec); }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
};

}  // namespace qhahn
