#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsengine.hpp"
#include "error.hpp"
#include "koszul.hpp"
#include "localspec.hpp"
#include "rational.hpp"

namespace bsroots {

using Json = nlohmann::json;

inline std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    std::string t;
    for (char c : cur)
      if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    out.push_back(t);
  }
  return out;
}

inline Weights parse_weight_list(const std::string& text) {
  Weights w;
  for (const auto& item : split_list(text)) w.push_back(parse_rational(item));
  if (w.empty()) fail(ErrorCode::InvalidInput, "empty weight list");
  return w;
}

// "aT^k" terms in descending k; zero coefficients skipped.
inline std::string series_string(const std::map<long, long long>& coeffs) {
  std::string s;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    long long c = it->second;
    if (c == 0) continue;
    if (c < 0)
      s += "-";
    else if (!s.empty())
      s += "+";
    long long a = c < 0 ? -c : c;
    std::string mono = it->first == 0 ? "" : (it->first == 1 ? "T" : "T^" + std::to_string(it->first));
    if (a != 1 || mono.empty()) s += std::to_string(a);
    s += mono;
  }
  return s.empty() ? "0" : s;
}

inline std::map<long, long long> table_series(const GradedTable& t) {
  std::map<long, long long> m;
  for (long k = t.first(); k <= t.last(); ++k)
    if (t.at(k) != 0) m[k] = t.at(k);
  return m;
}

// Singularity files

inline LocalSingularity singularity_from_json(const Json& rec, unsigned ambient) {
  if (!rec.is_object()) fail(ErrorCode::InvalidInput, "singularity record must be an object");
  long long count = 1;
  if (rec.contains("count")) {
    if (!rec["count"].is_number_integer()) fail(ErrorCode::InvalidInput, "'count' must be an integer");
    count = rec["count"].get<long long>();
  }
  int kinds = rec.contains("weights") + rec.contains("type") + rec.contains("local_poly");
  if (kinds != 1) fail(ErrorCode::InvalidInput, "record needs exactly one of weights, type, local_poly");
  auto str = [](const Json& j, const char* what) {
    if (!j.is_string()) fail(ErrorCode::InvalidInput, std::string(what) + " must be a string");
    return j.get<std::string>();
  };
  if (rec.contains("weights")) {
    if (!rec["weights"].is_array()) fail(ErrorCode::InvalidInput, "'weights' must be an array");
    Weights w;
    for (const auto& x : rec["weights"]) w.push_back(parse_rational(str(x, "weight")));
    return {pad_weights(w, ambient), count, "weights"};
  }
  if (rec.contains("type")) {
    std::string t = str(rec["type"], "'type'");
    return {ade_weights(t, ambient), count, t};
  }
  std::string poly = str(rec["local_poly"], "'local_poly'");
  if (!rec.contains("vars") || !rec["vars"].is_array()) fail(ErrorCode::InvalidInput, "'local_poly' needs 'vars'");
  std::vector<std::string> vars;
  for (const auto& v : rec["vars"]) vars.push_back(str(v, "variable"));
  return {pad_weights(weights_from_local_poly(poly, vars), ambient), count, poly};
}

inline std::vector<LocalSingularity> singularities_from_json(const Json& j, unsigned n) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, "singularity file must hold a JSON array");
  std::vector<LocalSingularity> out;
  for (const auto& rec : j) out.push_back(singularity_from_json(rec, n - 1));
  return out;
}

inline Json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::SyntaxError, where + ": " + e.what());
  }
}

inline std::vector<LocalSingularity> load_singularity_file(const std::string& path, unsigned n) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidInput, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return singularities_from_json(parse_json_text(ss.str(), path), n);
}

inline Json singularities_to_json(const std::vector<LocalSingularity>& list) {
  Json out = Json::array();
  for (const auto& s : list) {
    Json w = Json::array();
    for (const auto& x : s.weights) w.push_back(to_string(x));
    out.push_back({{"weights", w}, {"count", s.count}});
  }
  return out;
}

// Tables

inline Json table_to_json(const GradedTable& t) {
  Json j{{"label", label_name(t.label)}, {"offset", t.offset}, {"values", t.values}};
  j["stable_tail"] = t.stable_tail ? Json(*t.stable_tail) : Json(nullptr);
  return j;
}

inline Json tables_to_json(const KoszulTables& t) {
  Json j{{"n", t.n}, {"d", t.d}, {"tau", t.tau}};
  for (const GradedTable* g : {&t.gamma, &t.mu, &t.nu, &t.mu_dblprime, &t.mu_prime, &t.delta})
    j[label_name(g->label)] = table_to_json(*g);
  if (t.e2) {
    j["mu2"] = table_to_json(t.e2->mu2);
    j["nu2"] = table_to_json(t.e2->nu2);
  }
  return j;
}

struct TableRow {
  std::string name;
  std::vector<long long> values;
};

// Rows of k, gamma, mu, nu, mu'', mu', delta (and mu2, nu2) over [lo, hi],
// all indexed by k as in the printed tables.
inline std::vector<TableRow> table_rows(const KoszulTables& t, long lo, long hi) {
  std::vector<TableRow> rows;
  TableRow k{"k", {}};
  for (long i = lo; i <= hi; ++i) k.values.push_back(i);
  rows.push_back(k);
  rows.push_back({"gamma", t.gamma.range(lo, hi)});
  rows.push_back({"mu", t.mu.range(lo, hi)});
  rows.push_back({"nu", t.nu.range(lo, hi)});
  rows.push_back({"mu''", t.mu_dblprime.range(lo, hi)});
  rows.push_back({"mu'", t.mu_prime.range(lo, hi)});
  rows.push_back({"delta", t.delta.range(lo, hi)});
  if (t.e2) {
    rows.push_back({"mu2", t.e2->mu2.range(lo, hi)});
    rows.push_back({"nu2", t.e2->nu2.range(lo, hi)});
  }
  return rows;
}

// Aligned text; zeros are left blank except in the k row, as in the printed tables.
inline std::string format_rows_text(const std::vector<TableRow>& rows) {
  std::size_t label_w = 0, cell_w = 1;
  for (const auto& r : rows) {
    label_w = std::max(label_w, r.name.size() + 1);
    for (long long v : r.values) cell_w = std::max(cell_w, std::to_string(v).size());
  }
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string line = r.name + ":";
    line.resize(label_w, ' ');
    for (long long v : r.values) {
      std::string cell = (v == 0 && r.name != "k") ? "" : std::to_string(v);
      line += " " + std::string(cell_w - cell.size(), ' ') + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  return os.str();
}

inline std::string format_rows_tsv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    os << r.name;
    for (long long v : r.values) os << "\t" << v;
    os << "\n";
  }
  return os.str();
}

inline Json rows_to_json(const std::vector<TableRow>& rows) {
  Json j = Json::object();
  for (const auto& r : rows) j[r.name] = r.values;
  return j;
}

// Reports. Rationals are "p/q" strings; absent optionals are null, and a null
// beta_f stands for +infinity.

namespace detail {

template <class T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}
template <class T>
std::optional<T> json_opt(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}
inline Json set_json(const RationalSet& s) { return Json(to_strings(s)); }
inline RationalSet json_set(const Json& j) {
  RationalSet s;
  for (const auto& x : j) s.insert(parse_rational(x.get<std::string>()));
  return s;
}
inline RootStatusKind status_from_name(const std::string& s) {
  for (auto k : {RootStatusKind::root_r0, RootStatusKind::non_root, RootStatusKind::in_rz,
                 RootStatusKind::undetermined})
    if (s == status_name(k)) return k;
  fail(ErrorCode::InvalidInput, "unknown root status '" + s + "'");
}

}  // namespace detail

inline Json report_to_json(const RootReport& r) {
  using detail::opt_json;
  Json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["tau"] = r.tau;
  j["chi_U"] = r.chi_U;
  j["R_Z"] = detail::set_json(r.R_Z);
  j["R0"] = detail::set_json(r.R0);
  j["undetermined"] = detail::set_json(r.undetermined);
  j["R_f"] = detail::set_json(r.R_f);
  j["cs_f"] = r.cs_f;
  j["condition11_holds"] = r.condition11_holds;
  j["connectedness"] = {{"connected_outside", r.conn.connected_outside},
                        {"k_min", opt_json(r.conn.k_min)},
                        {"k_max", opt_json(r.conn.k_max)},
                        {"support", r.conn.support}};
  j["beta_f"] = opt_json(r.beta_f);
  if (r.theorem5) {
    const auto& t = *r.theorem5;
    j["theorem5"] = {{"odp_case", t.odp_case},         {"m0_simple", opt_json(t.m0_simple)},
                     {"m1_simple", opt_json(t.m1_simple)}, {"simple_holds", t.simple_holds},
                     {"m0", opt_json(t.m0)},           {"m1", opt_json(t.m1)},
                     {"m2", opt_json(t.m2)},           {"m0_holds", t.m0_holds},
                     {"m1_holds", t.m1_holds},         {"m2_holds", t.m2_holds},
                     {"applicable", t.applicable},     {"predicted_k_min", t.predicted_k_min},
                     {"predicted_k_max", t.predicted_k_max}};
  } else {
    j["theorem5"] = nullptr;
  }
  j["corollary3"] = {{"applicable", r.corollary3.applicable},
                     {"n3_variant", r.corollary3.n3_variant},
                     {"d_roots", r.corollary3.d_roots}};
  j["extremely_degenerated"] = opt_json(r.extremely_degenerated);
  Json st = Json::array();
  for (const auto& s : r.statuses)
    st.push_back({{"k", s.k},
                  {"value", to_string(s.value)},
                  {"status", status_name(s.status)},
                  {"delta", s.delta},
                  {"condition2", s.condition2},
                  {"below_alpha_f", s.below_alpha_f}});
  j["statuses"] = st;
  return j;
}

inline RootReport report_from_json(const Json& j) {
  using detail::json_opt;
  RootReport r;
  r.n = j.at("n").get<unsigned>();
  r.d = j.at("d").get<unsigned>();
  r.tau = j.at("tau").get<long long>();
  r.chi_U = j.at("chi_U").get<long long>();
  r.R_Z = detail::json_set(j.at("R_Z"));
  r.R0 = detail::json_set(j.at("R0"));
  r.undetermined = detail::json_set(j.at("undetermined"));
  r.R_f = detail::json_set(j.at("R_f"));
  r.cs_f = j.at("cs_f").get<std::set<long>>();
  r.condition11_holds = j.at("condition11_holds").get<bool>();
  const Json& c = j.at("connectedness");
  r.conn.connected_outside = c.at("connected_outside").get<bool>();
  r.conn.k_min = json_opt<long>(c.at("k_min"));
  r.conn.k_max = json_opt<long>(c.at("k_max"));
  r.conn.support = c.at("support").get<std::vector<long>>();
  r.beta_f = json_opt<long>(j.at("beta_f"));
  if (!j.at("theorem5").is_null()) {
    const Json& t = j.at("theorem5");
    Theorem5 v;
    v.odp_case = t.at("odp_case").get<bool>();
    v.m0_simple = json_opt<long>(t.at("m0_simple"));
    v.m1_simple = json_opt<long>(t.at("m1_simple"));
    v.simple_holds = t.at("simple_holds").get<bool>();
    v.m0 = json_opt<long>(t.at("m0"));
    v.m1 = json_opt<long>(t.at("m1"));
    v.m2 = json_opt<long>(t.at("m2"));
    v.m0_holds = t.at("m0_holds").get<bool>();
    v.m1_holds = t.at("m1_holds").get<bool>();
    v.m2_holds = t.at("m2_holds").get<bool>();
    v.applicable = t.at("applicable").get<bool>();
    v.predicted_k_min = t.at("predicted_k_min").get<long>();
    v.predicted_k_max = t.at("predicted_k_max").get<long>();
    r.theorem5 = v;
  }
  const Json& c3 = j.at("corollary3");
  r.corollary3.applicable = c3.at("applicable").get<bool>();
  r.corollary3.n3_variant = c3.at("n3_variant").get<bool>();
  r.corollary3.d_roots = c3.at("d_roots").get<std::vector<long>>();
  r.extremely_degenerated = json_opt<bool>(j.at("extremely_degenerated"));
  for (const auto& s : j.at("statuses")) {
    RootStatus st;
    st.k = s.at("k").get<long>();
    st.value = parse_rational(s.at("value").get<std::string>());
    st.status = detail::status_from_name(s.at("status").get<std::string>());
    st.delta = s.at("delta").get<long long>();
    st.condition2 = s.at("condition2").get<bool>();
    st.below_alpha_f = s.at("below_alpha_f").get<bool>();
    r.statuses.push_back(st);
  }
  return r;
}

inline std::string report_summary(const RootReport& r) {
  auto list = [](const RationalSet& s) {
    std::string out = "{";
    for (const auto& v : s) out += (out.size() > 1 ? ", " : "") + to_string(v);
    return out + "}";
  };
  std::ostringstream os;
  os << "n = " << r.n << ", d = " << r.d << ", tau_Z = " << r.tau << ", chi(U) = " << r.chi_U << "\n";
  os << "R_Z = " << list(r.R_Z) << "\n";
  os << "R_f^0 = " << list(r.R0) << "\n";
  os << "undetermined = " << list(r.undetermined) << "\n";
  os << "R_f = " << list(r.R_f) << " (multiplicities not computed)\n";
  os << "CS(f) = {";
  bool first = true;
  for (long k : r.cs_f) {
    os << (first ? "" : ", ") << k;
    first = false;
  }
  os << "}, condition11 " << (r.condition11_holds ? "holds" : "fails") << "\n";
  if (r.conn.k_min)
    os << "Supp(delta) \\ dR_Z spans [" << *r.conn.k_min << ", " << *r.conn.k_max << "], "
       << (r.conn.connected_outside ? "connected" : "NOT connected") << " outside dR_Z\n";
  else
    os << "Supp(delta) \\ dR_Z is empty\n";
  os << "beta_f = " << (r.beta_f ? std::to_string(*r.beta_f) : "infinity") << "\n";
  if (r.theorem5)
    os << "theorem5 hypotheses " << (r.theorem5->applicable ? "hold" : "do not hold") << " (predicted k_max = "
       << r.theorem5->predicted_k_max << ")\n";
  os << "corollary3 " << (r.corollary3.applicable ? "applies" : "does not apply") << "\n";
  if (r.extremely_degenerated) os << "extremely degenerated: " << (*r.extremely_degenerated ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace bsroots
