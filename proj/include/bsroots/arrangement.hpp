#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "localspec.hpp"
#include "polyring.hpp"

namespace bsroots {

// A reduced arrangement of lines in P^2 given as a product of linear forms.
struct LineArrangement {
  std::vector<std::array<Rational, 3>> lines;
  HomogPoly f;
  std::map<std::array<Rational, 3>, std::set<std::size_t>> points;  // normalized point -> lines through it
};

namespace detail {

inline std::vector<std::string> top_level_factors(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) fail(ErrorCode::SyntaxError, "unbalanced ')' in line product");
    if (c == '*' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (depth != 0) fail(ErrorCode::SyntaxError, "unbalanced '(' in line product");
  out.push_back(cur);
  return out;
}

// Scale so that the first nonzero entry is 1.
inline std::array<Rational, 3> normalize(std::array<Rational, 3> v) {
  for (const auto& x : v)
    if (x != 0) {
      Rational s = x;
      for (auto& y : v) y /= s;
      return v;
    }
  return v;
}

}  // namespace detail

inline LineArrangement parse_lines(const std::string& text, const std::vector<std::string>& vars) {
  if (vars.size() != 3) fail(ErrorCode::InvalidInput, "line arrangements need exactly three variables");
  LineArrangement a{{}, parse_poly(text, vars), {}};
  std::set<std::array<Rational, 3>> seen;
  for (const auto& piece : detail::top_level_factors(text)) {
    Polynomial p = parse_polynomial(piece, vars);
    if (p.is_zero()) fail(ErrorCode::ZeroPolynomial, "zero factor in line product");
    std::array<Rational, 3> coeffs;
    bool constant = false;
    for (const auto& [m, c] : p.terms()) {
      if (m.total_degree() == 0) {
        constant = true;
        continue;
      }
      if (m.total_degree() != 1) fail(ErrorCode::InvalidInput, "factor '" + piece + "' is not a linear form");
      coeffs[m.first_var()] = c;
    }
    if (constant) {
      if (p.terms().size() != 1) fail(ErrorCode::InvalidInput, "factor '" + piece + "' is not a linear form");
      continue;
    }
    auto line = detail::normalize(coeffs);
    if (!seen.insert(line).second) fail(ErrorCode::NotIsolated, "repeated line '" + piece + "'");
    a.lines.push_back(line);
  }
  if (a.lines.size() < 2) fail(ErrorCode::InvalidInput, "need at least two lines");
  for (std::size_t i = 0; i < a.lines.size(); ++i)
    for (std::size_t j = i + 1; j < a.lines.size(); ++j) {
      const auto& u = a.lines[i];
      const auto& v = a.lines[j];
      std::array<Rational, 3> p{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
      auto& through = a.points[detail::normalize(p)];
      through.insert(i);
      through.insert(j);
    }
  return a;
}

// Each point where m lines meet is an ordinary m-fold point, weights (1/m, 1/m).
inline std::vector<LocalSingularity> arrangement_singularities(const LineArrangement& a) {
  std::map<std::size_t, long long> by_mult;
  for (const auto& [pt, through] : a.points) ++by_mult[through.size()];
  std::vector<LocalSingularity> out;
  for (const auto& [m, count] : by_mult) {
    Rational w(1, static_cast<unsigned long>(m));
    out.emplace_back(Weights{w, w}, count, "ordinary " + std::to_string(m) + "-fold point");
  }
  return out;
}

}  // namespace bsroots
