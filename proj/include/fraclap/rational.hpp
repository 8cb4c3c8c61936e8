#pragma once

// Exact fractions p/q with 64-bit parts; every operation checks for overflow.

#include <cstdint>
#include <string>

namespace fraclap {

__extension__ typedef __int128 int128_t;

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Best approximation with denominator ≤ max_den; throws InvalidParameters
  /// when it misses x by more than tol.
  static Rational from_double(double x, std::int64_t max_den = 1000000, double tol = 1e-10);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// "3/4", "-1", "0".
  std::string to_string() const;

  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator*(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, const Rational& y);
  Rational operator-() const;

  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }
  Rational& operator*=(const Rational& y) { return *this = *this * y; }
  Rational& operator/=(const Rational& y) { return *this = *this / y; }

  friend bool operator==(const Rational& x, const Rational& y) = default;
  friend bool operator<(const Rational& x, const Rational& y);
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
  friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

 private:
  static Rational normalized(int128_t num, int128_t den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace fraclap
