#include "numerovlab/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace nlab {

namespace {

long long parse_integer(std::string_view text, std::string_view whole) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  return value;
}

} // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("malformed rational: empty string");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const long long num = parse_integer(text.substr(0, slash), text);
  const long long den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw std::invalid_argument("malformed rational (zero denominator): '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  std::string out = std::to_string(r.numerator());
  if (r.denominator() != 1) {
    out += '/';
    out += std::to_string(r.denominator());
  }
  return out;
}

} // namespace nlab
