#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace longweave {

// Exact fraction for means and baselines. Values stay tiny (step counts,
// option-count reciprocals), so int64 with gcd reduction is plenty.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    reduce();
  }

  static Rational whole(std::int64_t n) { return Rational(n, 1); }

  Rational operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
  }
  Rational operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

 private:
  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }
};

} // namespace longweave
