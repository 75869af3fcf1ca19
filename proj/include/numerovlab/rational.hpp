#pragma once

#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace nlab {

/// Exact arithmetic for mesh geometry.  Step lists are small integers over a
/// common denominator, so long long leaves ample headroom for the reductions
/// we perform (sums, ratios, squared comparisons).
using Rational = boost::rational<long long>;

/// Parse "p/q" or "p" (optional sign, arbitrary whitespace-free).  Throws
/// std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical form: "p/q" in lowest terms, or just "p" when q == 1.
std::string format_rational(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

} // namespace nlab
