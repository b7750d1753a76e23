#ifndef CPLOGIC_RATIONAL_HPP
#define CPLOGIC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <string_view>

namespace cplogic {

/// Exact rational number. Always kept in lowest terms with a positive
/// denominator; equality and ordering are exact. All probabilities in the
/// library are of this type, so no floating-point rounding occurs anywhere.
class Rational {
 public:
  using Int = boost::multiprecision::cpp_int;

  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(long long num, long long den);

  /// Parses "0.9", ".5", "1", "9/10". Throws DomainError on malformed input.
  static Rational parse(std::string_view text);

  Int numerator() const { return boost::multiprecision::numerator(v_); }
  Int denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_one() const { return v_ == 1; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "9/10", "3", "0".
  std::string to_string() const;

  /// Decimal rendering: exact when the expansion terminates within
  /// `max_digits` fraction digits ("0.98"), otherwise truncated and
  /// prefixed with '~' ("~0.333333").
  std::string to_decimal(int max_digits = 6) const;

 private:
  boost::multiprecision::cpp_rational v_;
};

}  // namespace cplogic

#endif
