#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace centrep {

/// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
/// positive denominator), which is exactly the representation contract we need.
using Rational = mpq_class;

using Vec = std::vector<Rational>;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Serializes as "p/q", or just "p" when the denominator is 1.
inline std::string rat_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace centrep
