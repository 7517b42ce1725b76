#pragma once

#include <gmpxx.h>

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"

namespace bsroots {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p", "-p" or "p/q"; whitespace around tokens is ignored.
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto valid_int = [](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    fail(ErrorCode::SyntaxError, "bad rational '" + text + "'");
  if (num[0] == '+') num.erase(0, 1);
  Integer d(den);
  if (d == 0) fail(ErrorCode::SyntaxError, "zero denominator in '" + text + "'");
  Rational r(Integer(num), d);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

// Exact finite set of rationals; mpq_class already orders by value.
using RationalSet = std::set<Rational>;

inline std::vector<std::string> to_strings(const RationalSet& s) {
  std::vector<std::string> out;
  for (const auto& r : s) out.push_back(to_string(r));
  return out;
}

}  // namespace bsroots
