#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nucache {

/// Exact fraction over 128-bit integers.
///
/// Every rate, probability and memory split in this library is an exact
/// fraction; floating point only appears at display boundaries. The class
/// keeps num/den reduced with den > 0 and throws std::overflow_error if an
/// intermediate product leaves the 128-bit range instead of wrapping.
class Rational {
 public:
  using Int = __int128;

  Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(Int n, Int d) : num_(n), den_(d) { normalize(); }

  /// Parses "17/20", "0.85", "-3", "2." — exact, no rounding.
  static Rational parse(const std::string& text);

  Int num() const { return num_; }
  Int den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  /// Largest integer <= value (floor division, correct for negatives).
  Int floor() const {
    if (num_ >= 0) return num_ / den_;
    return -((-num_ + den_ - 1) / den_);
  }
  Int ceil() const { return -(-*this).floor(); }
  Rational frac() const { return *this - Rational(floor(), 1); }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  // Operands are pre-reduced with gcds so intermediates stay as small as the
  // reduced result allows; 128-bit overflow is still detected, not wrapped.
  Rational& operator+=(const Rational& o) {
    Int g = gcd(den_, o.den_);
    Int t = checked_add(checked_mul(num_, o.den_ / g), checked_mul(o.num_, den_ / g));
    Int g2 = gcd(t, g);
    num_ = t / g2;
    den_ = checked_mul(den_ / g, o.den_ / g2);
    if (num_ == 0) den_ = 1;
    return *this;
  }
  Rational& operator-=(const Rational& o) { return *this += -o; }
  Rational& operator*=(const Rational& o) {
    Int g1 = gcd(num_, o.den_);
    Int g2 = gcd(o.num_, den_);
    num_ = checked_mul(num_ / g1, o.num_ / g2);
    den_ = checked_mul(den_ / g2, o.den_ / g1);
    if (num_ == 0) den_ = 1;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
    Int g1 = gcd(num_, o.num_);
    Int g2 = gcd(o.den_, den_);
    num_ = checked_mul(num_ / g1, o.den_ / g2);
    den_ = checked_mul(den_ / g2, o.num_ / g1);
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) den_ = 1;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    Int g = gcd(a.den_, b.den_);
    return checked_mul(a.num_, b.den_ / g) < checked_mul(b.num_, a.den_ / g);
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational pow(unsigned e) const {
    Rational r(1), base = *this;
    while (e) {
      if (e & 1u) r *= base;
      base *= base;
      e >>= 1u;
    }
    return r;
  }

  static Rational abs(const Rational& a) { return a.num_ < 0 ? -a : a; }
  static Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
  static Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

  double to_double() const {
    return static_cast<double>(static_cast<long double>(num_) /
                               static_cast<long double>(den_));
  }

  /// "a/b" for proper fractions, "a" for integers.
  std::string str() const;

 private:
  static Int gcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      Int t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
      throw std::overflow_error("Rational: 128-bit overflow in multiply");
    return r;
  }
  static Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
      throw std::overflow_error("Rational: 128-bit overflow in add");
    return r;
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Int g = gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  Int num_ = 0;
  Int den_ = 1;
};

std::string int128_to_string(__int128 v);

}  // namespace nucache
