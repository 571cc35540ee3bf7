#include "nucache/rational.hpp"

#include <cctype>

namespace nucache {

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  std::string digits;
  while (u) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

std::string Rational::str() const {
  std::string s = int128_to_string(num_);
  if (den_ != 1) s += "/" + int128_to_string(den_);
  return s;
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational n = parse(text.substr(0, slash));
    Rational d = parse(text.substr(slash + 1));
    return n / d;
  }
  size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  Int num = 0, den = 1;
  bool saw_digit = false, saw_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (saw_dot) throw std::invalid_argument("Rational::parse: bad number: " + text);
      saw_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("Rational::parse: bad number: " + text);
    saw_digit = true;
    Int r;
    if (__builtin_mul_overflow(num, Int(10), &r) ||
        __builtin_add_overflow(r, Int(c - '0'), &r))
      throw std::overflow_error("Rational::parse: number too large: " + text);
    num = r;
    if (saw_dot) {
      if (__builtin_mul_overflow(den, Int(10), &den))
        throw std::overflow_error("Rational::parse: number too large: " + text);
    }
  }
  if (!saw_digit) throw std::invalid_argument("Rational::parse: bad number: " + text);
  return {neg ? -num : num, den};
}

}  // namespace nucache
