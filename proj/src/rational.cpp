#include "fraclap/rational.hpp"

#include <cmath>
#include <limits>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

int128_t gcd128(int128_t a, int128_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const int128_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(int128_t x) {
  return x >= std::numeric_limits<std::int64_t>::min() &&
         x <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational Rational::normalized(int128_t num, int128_t den) {
  if (den == 0) throw InvalidParameters("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int128_t g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits(num) || !fits(den)) throw InvalidParameters("rational overflow");
  Rational out;
  out.num_ = static_cast<std::int64_t>(num);
  out.den_ = static_cast<std::int64_t>(den);
  return out;
}

Rational::Rational(std::int64_t num, std::int64_t den) { *this = normalized(num, den); }

Rational Rational::from_double(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) throw InvalidParameters("cannot rationalize a non-finite value");
  if (std::abs(x) > 1e12) throw InvalidParameters("value too large to rationalize");
  // continued fraction convergents
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  Rational best(static_cast<std::int64_t>(std::llround(x)), 1);
  for (int i = 0; i < 64; ++i) {
    const double fl = std::floor(rest);
    const auto a = static_cast<std::int64_t>(fl);
    const int128_t p2 = static_cast<int128_t>(a) * p1 + p0;
    const int128_t q2 = static_cast<int128_t>(a) * q1 + q0;
    if (q2 > max_den || !fits(p2)) break;
    p0 = p1;
    q0 = q1;
    p1 = static_cast<std::int64_t>(p2);
    q1 = static_cast<std::int64_t>(q2);
    best = Rational(p1, q1);
    if (std::abs(best.to_double() - x) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    const double frac = rest - fl;
    if (frac < 1e-300) break;
    rest = 1.0 / frac;
  }
  if (std::abs(best.to_double() - x) > tol) {
    throw InvalidParameters("no fraction with denominator <= " + std::to_string(max_den) +
                            " within tolerance of " + std::to_string(x));
  }
  return best;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& x, const Rational& y) {
  return Rational::normalized(static_cast<int128_t>(x.num_) * y.den_ +
                                  static_cast<int128_t>(y.num_) * x.den_,
                              static_cast<int128_t>(x.den_) * y.den_);
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

Rational operator*(const Rational& x, const Rational& y) {
  return Rational::normalized(static_cast<int128_t>(x.num_) * y.num_,
                              static_cast<int128_t>(x.den_) * y.den_);
}

Rational operator/(const Rational& x, const Rational& y) {
  if (y.num_ == 0) throw InvalidParameters("rational division by zero");
  return Rational::normalized(static_cast<int128_t>(x.num_) * y.den_,
                              static_cast<int128_t>(x.den_) * y.num_);
}

Rational Rational::operator-() const {
  if (num_ == std::numeric_limits<std::int64_t>::min()) throw InvalidParameters("rational overflow");
  Rational out;
  out.num_ = -num_;
  out.den_ = den_;
  return out;
}

bool operator<(const Rational& x, const Rational& y) {
  return static_cast<int128_t>(x.num_) * y.den_ < static_cast<int128_t>(y.num_) * x.den_;
}

}  // namespace fraclap
