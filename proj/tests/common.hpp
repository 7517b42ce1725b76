#pragma once

#include <bsroots/bsroots.hpp>

#include <random>
#include <string>
#include <vector>

namespace testing_support {

using namespace bsroots;

inline Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

struct Case {
  std::string name;
  HomogPoly f;
  std::vector<std::string> vars;
  std::vector<LocalSingularity> sing;
};

inline std::string data_path(const std::string& file) { return std::string(BSROOTS_DATA_DIR) + "/" + file; }

inline Case golden(const std::string& name) {
  auto make = [&](const std::string& poly, std::size_t n, std::vector<LocalSingularity> s) {
    auto vars = default_variables(n);
    return Case{name, parse_poly(poly, vars), vars, std::move(s)};
  };
  auto a1 = [](unsigned ambient, long long count) { return LocalSingularity(ade_weights("A1", ambient), count); };
  if (name == "f1") return make("x^5+y^4*z", 3, {{{q(1, 5), q(1, 4)}, 1}});
  if (name == "f2") return make("x^5+x^2*y^3+y^4*z", 3, {{{q(1, 5), q(1, 4)}, 1}});
  if (name == "f4") return make("x^4*y^2*z+z^7", 3, {{{q(3, 14), q(1, 7)}, 1}, {{q(3, 7), q(1, 7)}, 1}});
  if (name == "f5") return make("x^5*y*z+x^4*y^2*z+z^7", 3, {{{q(3, 14), q(1, 7)}, 1}, a1(2, 2)});
  if (name == "f6") return make("(x^2+y^2+z^2+w^2)^3-(x^6+y^6+z^6+w^6)", 4, {a1(3, 52)});
  if (name == "f7") return make("u^3+v^3+x^3+y^3+z^3-(u+v+x+y+z)^3", 5, {a1(4, 10)});
  if (name == "fermat5") return make("x^5+y^5+z^5", 3, {});
  throw std::invalid_argument("no golden named " + name);
}

inline std::vector<Case> all_goldens() {
  std::vector<Case> out;
  for (const char* g : {"f1", "f2", "f4", "f5", "f6", "f7", "fermat5"}) out.push_back(golden(g));
  return out;
}

// f(M x) for an integer matrix M.
inline HomogPoly substitute(const HomogPoly& f, const std::vector<std::vector<long>>& M) {
  const std::size_t n = f.n_vars();
  std::vector<Polynomial> forms;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial l(n);
    for (std::size_t j = 0; j < n; ++j) l = l + Polynomial::constant(n, M[i][j]) * Polynomial::variable(n, j);
    forms.push_back(l);
  }
  Polynomial out(n);
  for (const auto& [m, c] : f.terms()) {
    Polynomial t = Polynomial::constant(n, c);
    for (std::size_t i = 0; i < n; ++i) t = t * forms[i].pow(m[i]);
    out = out + t;
  }
  return HomogPoly(out);
}

inline std::vector<std::vector<long>> random_invertible(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entry(-2, 2);
  for (;;) {
    std::vector<std::vector<long>> M(n, std::vector<long>(n));
    ExactMatrix E(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) E(i, j) = M[i][j] = entry(rng);
    if (rank(E) == n) return M;
  }
}

// Random inputs with known (W) singularity data: line arrangements, binomial
// curves x^d + y^a z^(d-a) in random coordinates, nodal and cuspidal cubics,
// Fermat hypersurfaces with random coefficients, and the Cayley cubic surface.
inline std::vector<Case> random_cases(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  const auto v3 = default_variables(3), v4 = default_variables(4);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  while (out.size() < count) {
    const std::string id = "random" + std::to_string(out.size());
    switch (out.size() % 6) {
      case 0: {  // lines
        std::string text;
        long lines = pick(3, 6);
        for (long i = 0; i < lines; ++i) {
          long a = pick(-3, 3), b = pick(-3, 3), c = pick(-3, 3);
          if (a == 0 && b == 0 && c == 0) c = 1;
          text += (i ? "*(" : "(") + std::to_string(a) + "*x+" + std::to_string(b) + "*y+" + std::to_string(c) + "*z)";
        }
        try {
          LineArrangement a = parse_lines(text, v3);
          if (a.points.size() < 2) continue;  // a pencil
          out.push_back({id + " lines " + text, a.f, v3, arrangement_singularities(a)});
        } catch (const Error&) {
          // repeated line, try again
        }
        break;
      }
      case 1: {  // x^d + y^a z^(d-a)
        long d = pick(3, 6), a = pick(1, d - 1);
        HomogPoly base = parse_poly("x^" + std::to_string(d) + "+" + std::to_string(pick(1, 3)) + "*y^" +
                                        std::to_string(a) + "*z^" + std::to_string(d - a),
                                    v3);
        std::vector<LocalSingularity> s;
        if (a >= 2) s.emplace_back(Weights{q(1, d), q(1, a)}, 1);
        if (d - a >= 2) s.emplace_back(Weights{q(1, d), q(1, d - a)}, 1);
        out.push_back({id + " binomial " + to_string(base, v3), substitute(base, random_invertible(3, rng)), v3, s});
        break;
      }
      case 2: {  // nodal cubic
        HomogPoly base = parse_poly("y^2*z-x^3-x^2*z", v3);
        out.push_back({id + " nodal cubic", substitute(base, random_invertible(3, rng)), v3,
                       {LocalSingularity(ade_weights("A1", 2), 1)}});
        break;
      }
      case 3: {  // cuspidal cubic or quartic with an A3 / E6-like point
        bool cubic = pick(0, 1) == 0;
        HomogPoly base = parse_poly(cubic ? "y^2*z-x^3" : "y^2*z^2-x^4+y^4", v3);
        std::vector<LocalSingularity> s{LocalSingularity(ade_weights(cubic ? "A2" : "A3", 2), 1)};
        out.push_back({id + (cubic ? " cuspidal cubic" : " tacnode quartic"),
                       substitute(base, random_invertible(3, rng)), v3, s});
        break;
      }
      case 4: {  // smooth Fermat with random coefficients
        bool surface = pick(0, 2) == 0;
        long d = surface ? pick(2, 4) : pick(3, 6);
        const auto& v = surface ? v4 : v3;
        std::string text;
        for (std::size_t i = 0; i < v.size(); ++i)
          text += (i ? "+" : "") + std::to_string(pick(1, 5)) + "*" + v[i] + "^" + std::to_string(d);
        out.push_back({id + " fermat " + text, parse_poly(text, v), v, {}});
        break;
      }
      case 5: {  // Cayley cubic, four A1 points
        HomogPoly base = parse_poly("x*y*z+x*y*w+x*z*w+y*z*w", v4);
        std::vector<std::vector<long>> D(4, std::vector<long>(4, 0));
        for (std::size_t i = 0; i < 4; ++i) D[i][i] = pick(1, 3) * (pick(0, 1) ? 1 : -1);
        out.push_back({id + " cayley", substitute(base, D), v4, {LocalSingularity(ade_weights("A1", 3), 4)}});
        break;
      }
    }
  }
  return out;
}

}  // namespace testing_support
