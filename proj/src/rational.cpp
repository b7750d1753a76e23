#include "cplogic/rational.hpp"

#include <cctype>

#include "cplogic/errors.hpp"

namespace cplogic {

namespace mp = boost::multiprecision;

Rational::Rational(long long num, long long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = mp::cpp_rational(num, den);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw DomainError("malformed numeral: '" + std::string(text) + "'");

  Rational r;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw DomainError("malformed fraction: '" + std::string(text) + "'");
    Int d{std::string(den)};
    if (d.is_zero()) throw DomainError("fraction with zero denominator: '" + std::string(text) + "'");
    r.v_ = mp::cpp_rational(Int{std::string(num)}, d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw DomainError("malformed decimal: '" + std::string(text) + "'");
    Int scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int digits{whole.empty() ? std::string("0") : std::string(whole)};
    digits *= scale;
    if (!frac.empty()) digits += Int{std::string(frac)};
    r.v_ = mp::cpp_rational(digits, scale);
  } else {
    if (!all_digits(s)) throw DomainError("malformed numeral: '" + std::string(text) + "'");
    r.v_ = mp::cpp_rational(Int{std::string(s)});
  }
  if (negative) r.v_ = -r.v_;
  return r;
}

std::string Rational::to_string() const {
  if (denominator() == 1) return numerator().str();
  return numerator().str() + "/" + denominator().str();
}

std::string Rational::to_decimal(int max_digits) const {
  Int num = numerator();
  Int den = denominator();
  std::string out;
  if (num < 0) {
    out += '-';
    num = -num;
  }
  out += Int(num / den).str();
  Int rem = num % den;
  if (rem.is_zero()) return out;
  out += '.';
  std::string frac;
  for (int i = 0; i < max_digits && !rem.is_zero(); ++i) {
    rem *= 10;
    frac += Int(rem / den).str();
    rem %= den;
  }
  if (!rem.is_zero()) return "~" + out + frac;
  return out + frac;
}

}  // namespace cplogic
