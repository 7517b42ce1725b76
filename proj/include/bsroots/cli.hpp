#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arrangement.hpp"
#include "bsengine.hpp"
#include "io.hpp"
#include "koszul.hpp"
#include "localspec.hpp"
#include "polyring.hpp"

namespace bsroots::cli {

enum ExitCode { ok = 0, input_error = 1, w_violation = 2, undetermined = 3, internal_error = 4 };

inline int exit_code_for(const Error& e) {
  if (e.code() == ErrorCode::WViolation) return w_violation;
  return e.is_internal() ? internal_error : input_error;
}

// Exit status of an analysis depends on the report alone.
inline int exit_code_for(const RootReport& r) { return r.undetermined.empty() ? ok : undetermined; }

struct PolyOptions {
  std::string poly;
  std::string vars;
  std::string format = "text";
  bool exact = false, modular = false;
  std::optional<long> kmax;
};

struct LocalOptions {
  std::string weights, type, local_poly, vars;
  unsigned ambient = 0;
  std::string format = "text";
};

inline LinAlgMode mode_of(const PolyOptions& o) { return o.modular ? LinAlgMode::modular : LinAlgMode::exact; }

inline std::vector<std::string> vars_of(const std::string& text) {
  auto v = split_list(text);
  detail::check_variables(v);
  return v;
}

inline HomogPoly poly_of(const PolyOptions& o) {
  if (o.vars.empty()) fail(ErrorCode::InvalidInput, "--vars is required");
  return parse_poly(o.poly, vars_of(o.vars));
}

// Columns [n, nd] unless --kmax moves the right end; the override must stay within (n+1)d.
inline long right_end(const PolyOptions& o, unsigned n, unsigned d) {
  const long nd = static_cast<long>(n) * d;
  if (!o.kmax) return nd;
  if (*o.kmax < static_cast<long>(n) || *o.kmax > nd + static_cast<long>(d))
    fail(ErrorCode::InvalidInput, "--kmax must lie in [" + std::to_string(n) + ", " + std::to_string(nd + d) + "]");
  return *o.kmax;
}

inline Weights local_weights(const LocalOptions& o) {
  int given = !o.weights.empty() + !o.type.empty() + !o.local_poly.empty();
  if (given != 1) fail(ErrorCode::InvalidInput, "give exactly one of --weights, --type, --local-poly");
  Weights w;
  if (!o.weights.empty()) w = parse_weight_list(o.weights);
  if (!o.type.empty()) w = ade_weights(o.type, o.ambient ? o.ambient : 2);
  if (!o.local_poly.empty()) {
    if (o.vars.empty()) fail(ErrorCode::InvalidInput, "--local-poly needs --vars");
    w = weights_from_local_poly(o.local_poly, vars_of(o.vars));
  }
  return o.ambient ? pad_weights(w, o.ambient) : w;
}

inline void check_format(const std::string& f) {
  if (f != "text" && f != "tsv" && f != "json") fail(ErrorCode::InvalidInput, "unknown format '" + f + "'");
}

// Identity mu2_k - nu2_{k+d} = delta_k always; with singularity data the
// equality delta_k = mu2_k off dR_Z is enforced as well.
inline void check_e2(const KoszulTables& t, const SingularityData* s) {
  const long nd = static_cast<long>(t.n) * t.d;
  for (long k = 0; k < nd; ++k) {
    long long m2 = t.e2->mu2.at(k), n2 = t.e2->nu2.at(k + t.d);
    if (m2 - n2 != t.delta.at(k))
      fail(ErrorCode::InvariantFailure, "mu2 - nu2 differs from delta at k=" + std::to_string(k));
    if (s) {
      Rational v(k, t.d);
      v.canonicalize();
      if (!in_rz(v, *s) && m2 != t.delta.at(k))
        fail(ErrorCode::InvariantFailure, "delta_" + std::to_string(k) + " = " + std::to_string(t.delta.at(k)) +
                                              " but mu2 = " + std::to_string(m2) + " outside dR_Z");
    }
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bernstein-Sato roots supported at the origin for homogeneous polynomials"};
  app.require_subcommand(1);

  LocalOptions lo;
  auto add_local = [&](CLI::App* sub) {
    sub->add_option("--weights", lo.weights, "comma separated weights, e.g. 2/11,3/11");
    sub->add_option("--type", lo.type, "A_k, D_k, E6, E7 or E8");
    sub->add_option("--local-poly", lo.local_poly, "weighted homogeneous local polynomial");
    sub->add_option("--vars", lo.vars, "variables of --local-poly");
    sub->add_option("--ambient", lo.ambient, "number of local variables (pads with weight 1/2)");
    sub->add_option("--format", lo.format, "text or json");
  };
  auto* spectrum_cmd = app.add_subcommand("spectrum", "spectrum as a polynomial in T = t^(1/m)");
  add_local(spectrum_cmd);
  auto* localbs_cmd = app.add_subcommand("local-bs", "local Bernstein-Sato roots of a weighted homogeneous point");
  add_local(localbs_cmd);

  unsigned gn = 0, gd = 0;
  std::string gformat = "text";
  auto* gamma_cmd = app.add_subcommand("gamma", "coefficients of (t+...+t^(d-1))^n");
  auto* arnold_cmd = app.add_subcommand("arnold", "Arnold's bound on singular points in degree d");
  for (auto* sub : {gamma_cmd, arnold_cmd}) {
    sub->add_option("--n", gn, "number of variables")->required();
    sub->add_option("--d", gd, "degree")->required();
    sub->add_option("--format", gformat, "text, tsv or json");
  }

  PolyOptions po;
  std::string sing_file, lines;
  bool with_e2 = false, n3_variant = false;
  auto add_poly = [&](CLI::App* sub, bool positional_required) {
    auto* p = sub->add_option("poly", po.poly, "homogeneous polynomial");
    if (positional_required) p->required();
    sub->add_option("--vars", po.vars, "comma separated variable names");
    sub->add_option("--format", po.format, "text, tsv or json");
    auto* e = sub->add_flag("--exact", po.exact, "exact rational linear algebra (default)");
    auto* m = sub->add_flag("--modular", po.modular, "two random primes, exact fallback on disagreement");
    e->excludes(m);
    sub->add_option("--kmax", po.kmax, "right end of the printed k range");
  };
  auto* tables_cmd = app.add_subcommand("tables", "gamma, mu, nu, mu'', mu', delta rows");
  add_poly(tables_cmd, true);
  tables_cmd->add_flag("--e2", with_e2, "add the mu2 and nu2 rows");
  auto* deltas_cmd = app.add_subcommand("deltas", "sum of delta_k T^k");
  add_poly(deltas_cmd, true);
  auto* e2_cmd = app.add_subcommand("e2", "mu2 and nu2 rows from the d1 differential");
  add_poly(e2_cmd, true);
  e2_cmd->add_option("--sing", sing_file, "singularity file, enables the check off dR_Z");
  auto* analyze_cmd = app.add_subcommand("analyze", "full root report");
  add_poly(analyze_cmd, false);
  analyze_cmd->add_option("--sing", sing_file, "singularity file (JSON)");
  analyze_cmd->add_option("--lines", lines, "product of linear forms; singularities are generated");
  analyze_cmd->add_flag("--n3-kmax-variant", n3_variant, "for n = 3 use k_max >= d-1 in corollary3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? ok : input_error;
  }

  try {
    if (spectrum_cmd->parsed() || localbs_cmd->parsed()) {
      check_format(lo.format);
      Weights w = local_weights(lo);
      if (spectrum_cmd->parsed()) {
        auto sp = spectrum(w);
        if (lo.format == "json") {
          Json j{{"m", sp.m}, {"milnor", milnor_number(w)}, {"polynomial", spectrum_polynomial(sp)}};
          Json e = Json::array();
          for (const auto& v : sp.entries) e.push_back(to_string(v));
          j["spectrum"] = e;
          out << j.dump(2) << "\n";
        } else {
          out << spectrum_polynomial(sp) << "\n";
        }
      } else {
        auto r = local_bs_roots(w);
        if (lo.format == "json") {
          out << Json{{"full", to_strings(r.full)}, {"reduced", to_strings(r.reduced)}}.dump(2) << "\n";
        } else {
          std::string s;
          for (const auto& v : r.full) s += (s.empty() ? "" : " ") + to_string(v);
          out << s << "\n";
        }
      }
      return ok;
    }

    if (gamma_cmd->parsed() || arnold_cmd->parsed()) {
      check_format(gformat);
      if (arnold_cmd->parsed()) {
        long long a = arnold_number(gn, gd);
        out << (gformat == "json" ? Json{{"n", gn}, {"d", gd}, {"arnold", a}}.dump(2) : std::to_string(a)) << "\n";
        return ok;
      }
      GradedTable g = gamma_table(gn, gd);
      std::vector<TableRow> rows{{"k", {}}, {"gamma", g.values}};
      for (long k = g.first(); k <= g.last(); ++k) rows[0].values.push_back(k);
      if (gformat == "json")
        out << rows_to_json(rows).dump(2) << "\n";
      else
        out << (gformat == "tsv" ? format_rows_tsv(rows) : format_rows_text(rows));
      return ok;
    }

    check_format(po.format);
    if (tables_cmd->parsed() || deltas_cmd->parsed() || e2_cmd->parsed()) {
      HomogPoly f = poly_of(po);
      KoszulTables t = compute_tables(f, mode_of(po));
      std::optional<SingularityData> sd;
      if (!sing_file.empty()) {
        sd = aggregate(load_singularity_file(sing_file, t.n));
        validate_W(t.tau, *sd);
      }
      const long lo_k = t.n, hi_k = right_end(po, t.n, t.d);
      if (deltas_cmd->parsed()) {
        if (po.format == "json") {
          out << Json{{"delta", table_to_json(t.delta)}, {"polynomial", series_string(table_series(t.delta))}}.dump(2)
              << "\n";
        } else if (po.format == "tsv") {
          out << format_rows_tsv({{"k", {}}, {"delta", t.delta.range(lo_k, hi_k)}});
        } else {
          out << series_string(table_series(t.delta)) << "\n";
        }
        return ok;
      }
      if (with_e2 || e2_cmd->parsed()) {
        add_e2(t, f, mode_of(po), hi_k);
        check_e2(t, sd ? &*sd : nullptr);
      }
      std::vector<TableRow> rows = table_rows(t, lo_k, hi_k);
      if (e2_cmd->parsed()) rows = {rows.front(), rows[rows.size() - 2], rows.back()};
      if (po.format == "json") {
        Json j = rows_to_json(rows);
        j["tau"] = t.tau;
        out << j.dump(2) << "\n";
      } else {
        out << (po.format == "tsv" ? format_rows_tsv(rows) : format_rows_text(rows));
      }
      return ok;
    }

    // analyze
    std::optional<HomogPoly> f;
    std::vector<LocalSingularity> sing;
    std::vector<std::string> vars;
    if (!lines.empty()) {
      if (!po.poly.empty() || !sing_file.empty())
        fail(ErrorCode::InvalidInput, "--lines replaces both the polynomial and --sing");
      vars = po.vars.empty() ? default_variables(3) : vars_of(po.vars);
      LineArrangement a = parse_lines(lines, vars);
      f = a.f;
      sing = arrangement_singularities(a);
    } else {
      if (po.poly.empty()) fail(ErrorCode::InvalidInput, "analyze needs a polynomial or --lines");
      if (sing_file.empty()) fail(ErrorCode::InvalidInput, "analyze needs --sing");
      f = poly_of(po);
      vars = vars_of(po.vars);
      sing = load_singularity_file(sing_file, static_cast<unsigned>(f->n_vars()));
    }
    KoszulTables t = compute_tables(*f, mode_of(po));
    SingularityData sd = aggregate(sing);
    RootReport r = analyze(*f, t, sd, AnalyzeOptions{n3_variant});
    if (po.format == "json") {
      Json j{{"polynomial", to_string(*f, vars)},
             {"singularities", singularities_to_json(sing)},
             {"report", report_to_json(r)},
             {"tables", rows_to_json(table_rows(t, t.n, right_end(po, t.n, t.d)))},
             {"delta_polynomial", series_string(table_series(t.delta))}};
      out << j.dump(2) << "\n";
    } else {
      if (po.format == "tsv")
        out << format_rows_tsv(table_rows(t, t.n, right_end(po, t.n, t.d)));
      else
        out << format_rows_text(table_rows(t, t.n, right_end(po, t.n, t.d)));
      out << "\n" << report_summary(r);
    }
    return exit_code_for(r);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return internal_error;
  }
}

}  // namespace bsroots::cli
