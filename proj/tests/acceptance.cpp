// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <bsroots/cli.hpp>

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "properties.hpp"

using namespace testing_support;

namespace {

using Row = std::vector<long long>;

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) problems_.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) problems_.push_back(what);
  }
  void add(const std::vector<std::string>& more) { problems_.insert(problems_.end(), more.begin(), more.end()); }
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

RationalSet fractions(std::initializer_list<long> nums, long den) {
  RationalSet s;
  for (long k : nums) s.insert(q(k, den));
  return s;
}

std::map<long, long long> ones(std::initializer_list<long> ks) {
  std::map<long, long long> m;
  for (long k : ks) m[k] = 1;
  return m;
}

struct Golden {
  Case c;
  KoszulTables t;
  SingularityData s;
  RootReport r;
};

Golden load(const std::string& name, bool e2 = false, LinAlgMode mode = LinAlgMode::exact) {
  Golden g{golden(name), {}, {}, {}};
  g.t = compute_tables(g.c.f, mode);
  if (e2) add_e2(g.t, g.c.f, mode);
  g.s = aggregate(g.c.sing);
  g.r = analyze(g.c.f, g.t, g.s);
  return g;
}

void criterion1(Check& ck) {
  Golden g = load("f1");
  const auto& t = g.t;
  ck.equal(t.gamma.range(3, 13), Row{1, 3, 6, 10, 12, 12, 10, 6, 3, 1, 0}, "gamma row");
  ck.equal(t.mu.range(3, 13), Row{1, 3, 6, 10, 12, 13, 13, 12, 12, 12, 12}, "mu row");
  ck.equal(t.nu.range(3, 13), Row{0, 0, 0, 0, 0, 1, 3, 6, 9, 11, 12}, "nu row");
  ck.equal(t.mu_dblprime.range(3, 13), Row{1, 3, 6, 9, 11, 12, 12, 12, 12, 12, 12}, "mu'' row");
  ck.equal(t.mu_prime.range(3, 13), Row{0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0}, "mu' row");
  ck.equal(g.r.R0, fractions({6, 7, 8, 9}, 5), "R_f^0");
  ck.expect(g.r.undetermined.empty(), "nothing undetermined");
}

void criterion2(Check& ck) {
  Golden g = load("f2");
  ck.equal(series_string(table_series(g.t.delta)), std::string("T^7+T^6+T^4+T^3"), "delta polynomial");
  ck.expect(table_series(g.t.mu_prime).empty(), "mu' vanishes");
  ck.equal(g.r.R0, fractions({3, 4, 6, 7}, 5), "R_f^0 by classification");
  ck.expect(g.r.corollary3.applicable, "connected-support criterion applies");
  RationalSet via;
  for (long k : g.r.corollary3.d_roots) via.insert(q(k, 5));
  ck.equal(via, g.r.R0, "both routes give the same roots");
}

void criterion3(Check& ck) {
  Golden g = load("f4", true);
  const auto& t = g.t;
  ck.equal(t.gamma.range(3, 19), Row{1, 3, 6, 10, 15, 21, 25, 27, 27, 25, 21, 15, 10, 6, 3, 1, 0}, "gamma row");
  ck.equal(t.mu.range(3, 19), Row{1, 3, 6, 10, 15, 21, 25, 28, 30, 31, 31, 30, 30, 30, 30, 30, 30}, "mu row");
  ck.equal(t.nu.range(3, 19), Row{0, 0, 0, 0, 0, 0, 0, 1, 3, 6, 10, 15, 20, 24, 27, 29, 30}, "nu row");
  ck.equal(t.e2->mu2.range(3, 19), Row{0, 1, 1, 1, 2, 2, 2, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0}, "mu2 row");
  ck.equal(t.e2->nu2.range(3, 19), Row{0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 1, 1, 1, 0, 0}, "nu2 row");
  // here mu' coincides with delta
  ck.equal(t.mu_prime.range(3, 19), Row{0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0}, "mu' row");
  ck.equal(t.delta.range(3, 19), Row{0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0}, "delta row");
  ck.equal(g.r.cs_f, std::set<long>{3}, "CS(f)");
  ck.equal(g.r.undetermined, fractions({3}, 7), "UNDETERMINED");
  ck.equal(g.r.R0, fractions({11, 12, 13}, 7), "ROOT_R0");
  ck.expect(!g.r.condition11_holds, "condition11 reported false");
}

void criterion4(Check& ck) {
  Golden f6 = load("f6", false, LinAlgMode::exact);
  const auto& t = f6.t;
  ck.equal(t.gamma.range(4, 21), Row{1, 4, 10, 20, 35, 52, 68, 80, 85, 80, 68, 52, 35, 20, 10, 4, 1, 0}, "f6 gamma");
  ck.equal(t.mu.range(4, 21), Row{1, 4, 10, 20, 35, 52, 68, 80, 85, 80, 68, 56, 53, 52, 52, 52, 52, 52}, "f6 mu");
  ck.equal(t.nu.range(4, 21), Row{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 18, 32, 42, 48, 51, 52}, "f6 nu");
  ck.equal(t.mu_dblprime.range(4, 21), Row{1, 4, 10, 20, 34, 48, 52, 52, 52, 52, 52, 52, 52, 52, 52, 52, 52, 52},
           "f6 mu''");
  ck.equal(t.mu_prime.range(4, 21), Row{0, 0, 0, 0, 1, 4, 16, 28, 33, 28, 16, 4, 1, 0, 0, 0, 0, 0}, "f6 mu'");
  ck.equal(t.delta.range(4, 21), Row{1, 4, 10, 20, 35, 48, 50, 48, 43, 32, 17, 4, 1, 0, 0, 0, 0, 0}, "f6 delta");
  ck.equal(f6.r.beta_f, std::optional<long>(4), "f6 beta_f");
  ck.expect(f6.r.conn.k_min == 4 && f6.r.conn.k_max == 16 && f6.r.conn.connected_outside, "f6 delta support");
  ck.expect(f6.r.theorem5 && f6.r.theorem5->predicted_k_max == 16 && f6.r.theorem5->predicted_k_min == 4,
            "f6 predicted range n(d-1) - min(d, beta_f)");

  Golden f7 = load("f7");
  const auto& u = f7.t;
  ck.equal(u.gamma.range(5, 11), Row{1, 5, 10, 10, 5, 1, 0}, "f7 gamma");
  ck.equal(u.mu.range(5, 11), Row{1, 5, 10, 10, 10, 10, 10}, "f7 mu");
  ck.equal(u.nu.range(5, 11), Row{0, 0, 0, 0, 5, 9, 10}, "f7 nu");
  ck.equal(u.mu_dblprime.range(5, 11), Row{1, 5, 10, 10, 10, 10, 10}, "f7 mu''");
  ck.equal(u.mu_prime.range(5, 11), Row(7, 0), "f7 mu'");
  ck.equal(u.delta.range(5, 11), Row{1, 0, 1, 0, 0, 0, 0}, "f7 delta");
  ck.expect(!f7.r.beta_f, "f7 beta_f infinite");
  ck.equal(f7.r.R0, fractions({5, 7}, 3), "f7 ROOT_R0");
}

void criterion5(Check& ck) {
  const char* argv[] = {"bsroots", "spectrum", "--weights", "2/11,3/11"};
  std::ostringstream out, err;
  int rc = bsroots::cli::run(4, argv, out, err);
  ck.expect(rc == 0, "spectrum exit status");
  ck.equal(out.str(), std::string("T^17+T^15+T^14+T^13+T^12+2T^11+T^10+T^9+T^8+T^7+T^5\n"), "spectrum output");
  for (long i = 2; i <= 6; ++i)
    for (long j = 2; j <= 6; ++j) {
      const std::string tag = " at i=" + std::to_string(i) + " j=" + std::to_string(j);
      ck.equal(milnor_number({q(1, i), q(1, j)}), (i - 1) * (j - 1), "x^i+y^j" + tag);
      ck.equal(milnor_number({q(j, (i + 1) * j), q(i, (i + 1) * j)}), (i + 1) * (j - 1) + 1, "x(x^i+y^j)" + tag);
      ck.equal(milnor_number({q(j, i * j + i + j), q(i, i * j + i + j)}), (i + 1) * (j + 1), "xy(x^i+y^j)" + tag);
    }
}

void criterion6(Check& ck) {
  auto v = default_variables(3);
  auto delta_of = [&](const std::string& lines) {
    LineArrangement a = parse_lines(lines, v);
    KoszulTables t = compute_tables(a.f);
    analyze(a.f, t, aggregate(arrangement_singularities(a)));  // (W) and Euler sums
    return table_series(t.delta);
  };
  auto w1 = delta_of("x*y*z*(x+3*z)*(x+y+z)*(x+2*y+3*z)*(2*x+y+z)*(2*x+3*y+z)*(2*x+3*y+4*z)");
  auto w2 = delta_of("x*y*z*(x+5*z)*(x+y+z)*(x+3*y+5*z)*(2*x+y+z)*(2*x+3*y+z)*(2*x+3*y+4*z)");
  auto zg = delta_of("x*y*z*(x+y-z)*(x-y+z)*(2*x-2*y+z)*(2*x-y-2*z)*(2*x+y+z)*(2*x-y-z)");
  ck.expect(!w1.empty() && w1.rbegin()->first == 16, "first arrangement has degree 16");
  ck.expect(!w2.empty() && w2.rbegin()->first == 15, "second arrangement has degree 15");
  ck.equal(w1, zg, "first arrangement and Ziegler's agree");
}

void criterion7(Check& ck) {
  auto v = default_variables(4);
  auto mp = [&](const std::string& p) { return table_series(compute_tables(parse_poly(p, v)).mu_prime); };
  ck.equal(mp("x^5+y^5+y*z*(x^3+z^2*w)"), ones({9, 11}), "T^9+T^11");
  ck.equal(mp("x^7+y^7+y*z^2*(x^4+z^3*w)"), ones({12, 16}), "T^12+T^16");
}

void criterion8(Check& ck) {
  auto cases = random_cases(7001, 20);
  ck.expect(cases.size() >= 20, "at least 20 random inputs");
  for (auto& c : all_goldens()) cases.push_back(c);
  for (const auto& c : cases) {
    PropertyOptions o;
    if (c.f.n_vars() >= 4) o.mode = LinAlgMode::modular;
    ck.add(check_properties(c, o));
    // plane-curve Euler formula versus the gamma residue form
    if (c.f.n_vars() == 3) {
      SingularityData s = aggregate(c.sing);
      long long d = c.f.degree();
      ck.equal(euler_characteristic(s, 3, static_cast<unsigned>(d)), (d - 1) * (d - 2) + 1 - s.mu_Z,
               c.name + ": plane-curve Euler formula");
    }
  }
  ck.add(check_gamma_monotone(6, 12));
}

void criterion9(Check& ck) {
  auto v = default_variables(3);
  auto code_of = [](const std::function<void()>& fn, std::string* msg = nullptr) {
    try {
      fn();
    } catch (const Error& e) {
      if (msg) *msg = e.what();
      return std::optional<ErrorCode>(e.code());
    }
    return std::optional<ErrorCode>();
  };
  HomogPoly f3 = parse_poly("x^5+x^3*y^2+y^4*z", v);
  KoszulTables t3 = compute_tables(f3);
  SingularityData naive = aggregate(load_singularity_file(data_path("f3_naive.json"), 3));
  std::string m3;
  ck.expect(code_of([&] { analyze(f3, t3, naive); }, &m3) == ErrorCode::WViolation, "naive weights rejected");
  ck.expect(t3.tau == 11 && naive.mu_Z == 12, "tau 11 versus mu 12");

  Case f5 = golden("f5");
  KoszulTables t5 = compute_tables(f5.f);
  SingularityData partial = aggregate(load_singularity_file(data_path("f5_incomplete.json"), 3));
  std::string m5;
  ck.expect(code_of([&] { analyze(f5.f, t5, partial); }, &m5) == ErrorCode::WViolation, "hidden node omission");
  ck.expect(m5.find("24") != std::string::npos && m5.find("23") != std::string::npos, "message names 23 and 24");

  ck.expect(code_of([&] { parse_poly("x^2+y^3", {"x", "y"}); }) == ErrorCode::NotHomogeneous, "mixed degrees");
}

void criterion10(Check& ck) {
  const long long want[] = {4, 16, 31, 68};
  for (unsigned d = 3; d <= 6; ++d) ck.equal(arnold_number(4, d), want[d - 3], "n=4 d=" + std::to_string(d));
  for (unsigned d = 2; d <= 12; ++d)
    ck.equal(arnold_number(3, d), static_cast<long long>(d) * (d - 1) / 2, "n=3 d=" + std::to_string(d));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"golden quintic curve table and roots", criterion1},
      {"deformed quintic: delta polynomial and both root routes", criterion2},
      {"quartic-times-line curve: seven rows, CS(f), undetermined 3/7", criterion3},
      {"sextic surface and cubic threefold tables", criterion4},
      {"spectrum output and Milnor number families", criterion5},
      {"degree-nine line arrangements", criterion6},
      {"disconnected torsion supports", criterion7},
      {"property suites on random and golden inputs", criterion8},
      {"rejection of bad inputs", criterion9},
      {"Arnold numbers", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check ck;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = ck.problems().empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << std::fixed << std::setprecision(1) << secs << " s)\n";
    for (const auto& p : ck.problems()) std::cout << "    " << p << "\n";
  }
  return failed == 0 ? 0 : 1;
}
