#pragma once

// Command implementations behind the hbpv executable.  Each command writes its
// machine output to `out`, diagnostics to `err`, and returns the exit status:
//   0 ok, 1 check/fixture failure, 2 domain error, 3 non-convergence,
//   4 fixture file missing or unreadable.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbpv/hbpv.hpp"

namespace hbpv::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kFailed = 1, kDomain = 2, kNotConverged = 3, kNoFixtures = 4 };

struct Flags {
  std::map<std::string, double> num;
  std::string variant = "unit_interval";
};

inline Flags default_flags() {
  Flags f;
  for (const char* b : {"b1", "b2", "b3", "c1", "c2", "c3"}) f.num[b] = 1.0;
  for (const char* v : {"x-re", "x-im", "y-re", "y-im", "z-re", "z-im", "p-im", "nu", "a"}) f.num[v] = 0.0;
  f.num["p-re"] = 1.0;
  f.num["lambda"] = 0.0;
  f.num["gamma"] = -1.0;
  f.num["alpha"] = 0.0;
  f.num["beta"] = 1.0;
  return f;
}

inline const std::map<std::string, std::vector<std::string>>& function_flags() {
  static const std::vector<std::string> hb = {"b1", "b2", "b3", "c1", "c2", "c3", "x-re", "x-im", "y-re", "y-im", "z-re", "z-im"};
  auto plus = [](std::vector<std::string> v, std::initializer_list<const char*> more) {
    v.insert(v.end(), more.begin(), more.end());
    return v;
  };
  static const std::map<std::string, std::vector<std::string>> table = {
      {"besselk", {"nu", "z-re", "z-im"}},
      {"chaudhry-beta", {"x-re", "x-im", "y-re", "y-im", "p-re", "p-im"}},
      {"extended-beta", {"x-re", "x-im", "y-re", "y-im", "p-re", "p-im", "nu"}},
      {"hb", hb},
      {"hba", plus(hb, {"a"})},
      {"x4", {"b1", "b2", "c1", "c2", "c3", "x-re", "x-im", "y-re", "y-im", "z-re", "z-im"}},
      {"hbpv", plus(hb, {"p-re", "p-im", "nu"})},
      {"hbpv-integral", plus(hb, {"p-re", "p-im", "nu", "lambda", "gamma", "alpha", "beta"})},
  };
  return table;
}

inline const std::vector<std::string>& flags_for(const std::string& function) {
  const auto& t = function_flags();
  const auto it = t.find(function);
  if (it == t.end()) throw DomainError("unknown function: " + function);
  return it->second;
}

inline RepVariant parse_variant(const Flags& f) {
  const double l = f.num.at("lambda");
  if (f.variant == "unit_interval") return RepVariant::unit_interval();
  if (f.variant == "mobius") return RepVariant::mobius(f.num.at("gamma"), f.num.at("alpha"), f.num.at("beta"));
  if (f.variant == "trig") return RepVariant::trig();
  if (f.variant == "trig_lambda_shift") return RepVariant::trig_lambda_shift(l);
  if (f.variant == "trig_lambda_scale") return RepVariant::trig_lambda_scale(l);
  throw DomainError("unknown representation variant: " + f.variant);
}

/// Evaluates `function` at the flag values.  `tol` overrides the default
/// tolerance (1e-12, or 1e-10 for the outer integral of hbpv-integral).
inline EvalResult evaluate(const std::string& function, const Flags& f, std::optional<double> tol = std::nullopt) {
  (void)flags_for(function);
  const auto& v = f.num;
  auto c = [&](const std::string& name) { return Complex(v.at(name + "-re"), v.at(name + "-im")); };
  HbParams q{v.at("b1"), v.at("b2"), v.at("b3"), v.at("c1"), v.at("c2"), v.at("c3")};
  const Point3 pt{c("x"), c("y"), c("z")};
  EngineConfig cfg;
  if (tol) {
    if (!(*tol > 0.0)) throw DomainError("tolerance must be positive");
    cfg.series_tol = cfg.quad_tol = *tol;
  }
  auto from_quad = [](const QuadResult& r) { return EvalResult{r.value, 0, r.abs_error_estimate, r.converged}; };

  if (function == "besselk") return {bessel_k(v.at("nu"), c("z")).value, 0, 0.0, true};
  if (function == "chaudhry-beta") return from_quad(chaudhry_beta_result(c("x"), c("y"), c("p"), cfg.quad_tol));
  if (function == "extended-beta")
    return from_quad(extended_beta_result(c("x"), c("y"), Extension{c("p"), v.at("nu")}, cfg.quad_tol));
  if (function == "hb") return h_b(q, pt, cfg);
  if (function == "hba") return h_b_a(q, v.at("a"), pt, cfg);
  if (function == "x4") return x4(q.b1, q.b2, q.c1, q.c2, q.c3, pt, cfg);
  const Extension ext{c("p"), v.at("nu")};
  if (function == "hbpv") return h_b_pv(q, ext, pt, cfg);
  return h_b_pv_integral(parse_variant(f), q, ext, pt, EngineConfig{}, tol.value_or(1e-10));
}

inline json complex_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline json to_json(const EvalResult& r) {
  json j;
  j["value_re"] = r.value.real();
  j["value_im"] = r.value.imag();
  j["shells_used"] = r.shells_used;
  j["tail_estimate"] = r.tail_estimate;
  j["converged"] = r.converged;
  return j;
}

inline json to_json(const CheckReport& r) {
  json j;
  j["name"] = r.name;
  j["kind"] = r.kind == CheckKind::Residual ? "residual" : "strict_bound";
  j["tolerance"] = r.tolerance;
  j["samples"] = r.samples;
  j["max_rel_residual"] = r.max_rel_residual;
  j["passed"] = r.passed;
  json details = json::array();
  for (const auto& s : r.details) {
    json d;
    json in = json::object();
    for (const auto& [k, val] : s.inputs) in[k] = complex_json(val);
    d["inputs"] = in;
    d["lhs"] = complex_json(s.lhs);
    d["rhs"] = complex_json(s.rhs);
    d["residual"] = s.residual;
    json notes = json::object();
    for (const auto& [k, val] : s.notes) notes[k] = val;
    d["notes"] = notes;
    d["ok"] = s.ok;
    details.push_back(d);
  }
  j["details"] = details;
  return j;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNotConverged;
  }
}

inline int cmd_eval(const std::string& function, const Flags& f, std::optional<double> tol, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    const auto r = evaluate(function, f, tol);
    out << to_json(r).dump() << '\n';
    if (!r.converged) {
      err << "not converged\n";
      return static_cast<int>(kNotConverged);
    }
    return static_cast<int>(kOk);
  });
}

inline int cmd_verify(const std::string& suite, int samples, std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    const auto reports = run_verify(suite, samples, seed);
    json j;
    j["suite"] = suite;
    j["samples"] = samples;
    j["seed"] = seed;
    bool ok = true;
    json arr = json::array();
    for (const auto& r : reports) {
      ok = ok && r.passed;
      arr.push_back(to_json(r));
    }
    j["passed"] = ok;
    j["reports"] = arr;
    out << j.dump(2) << '\n';
    return static_cast<int>(ok ? kOk : kFailed);
  });
}

struct Axis {
  std::string name;
  double start = 0.0, stop = 0.0;
  int count = 0;

  double at(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

/// Parses NAME=start:stop:count.
inline Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw DomainError("axis must look like NAME=start:stop:count: " + spec);
  Axis a;
  a.name = spec.substr(0, eq);
  std::istringstream in(spec.substr(eq + 1));
  char c1 = 0, c2 = 0;
  if (!(in >> a.start >> c1 >> a.stop >> c2 >> a.count) || c1 != ':' || c2 != ':' || a.count < 0 || !in.eof())
    throw DomainError("bad axis specification: " + spec);
  return a;
}

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Tabulates `function` over the lexicographic product of the axes (first axis
/// outermost).  Nothing is written if any grid point is outside the domain.
inline int cmd_table(const std::string& function, const Flags& f, const std::vector<std::string>& axis_specs,
                     std::optional<double> tol, const std::string& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto& names = flags_for(function);
    std::vector<Axis> axes;
    for (const auto& s : axis_specs) {
      auto a = parse_axis(s);
      if (std::find(names.begin(), names.end(), a.name) == names.end())
        throw DomainError("axis '" + a.name + "' is not a parameter of " + function);
      axes.push_back(a);
    }
    std::string csv;
    for (const auto& n : names) csv += n + ",";
    csv += "value_re,value_im,converged\n";

    bool all_converged = true;
    bool empty = false;
    for (const auto& a : axes) empty = empty || a.count == 0;
    std::vector<int> idx(axes.size(), 0);
    while (!empty) {
      Flags g = f;
      for (std::size_t i = 0; i < axes.size(); ++i) g.num[axes[i].name] = axes[i].at(idx[i]);
      const auto r = evaluate(function, g, tol);
      all_converged = all_converged && r.converged;
      for (const auto& n : names) csv += csv_number(g.num.at(n)) + ",";
      csv += csv_number(r.value.real()) + "," + csv_number(r.value.imag()) + "," + (r.converged ? "true" : "false") +
             "\n";
      // odometer, last axis fastest
      std::size_t k = axes.size();
      while (k > 0 && ++idx[k - 1] == axes[k - 1].count) idx[--k] = 0;
      if (k == 0) break;
    }

    if (out_path.empty()) {
      out << csv;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw DomainError("cannot open output file: " + out_path);
      file << csv;
    }
    if (!all_converged) {
      err << "some grid points did not converge\n";
      return kNotConverged;
    }
    return kOk;
  });
}

/// Maps a fixture record's function tag to an evaluator name.
inline std::string fixture_function(const std::string& tag) {
  static const std::map<std::string, std::string> m = {
      {"BesselK", "besselk"}, {"ChaudhryBeta", "chaudhry-beta"}, {"ExtendedBeta", "extended-beta"}, {"HB", "hb"},
      {"HBA", "hba"},         {"X4", "x4"},                       {"HBPV", "hbpv"}};
  const auto it = m.find(tag);
  if (it == m.end()) throw DomainError("unknown fixture function: " + tag);
  return it->second;
}

inline constexpr double kFixtureTolerance = 1e-9;

inline int cmd_fixtures(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "fixture file not found: " << path << '\n';
    return kNoFixtures;
  }
  json records;
  try {
    in >> records;
  } catch (const json::exception& e) {
    err << "fixture file unreadable: " << e.what() << '\n';
    return kNoFixtures;
  }
  if (!records.is_array()) {
    err << "fixture file must hold a JSON array\n";
    return kNoFixtures;
  }
  json report;
  json failures = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    try {
      const std::string fn = fixture_function(rec.at("function").get<std::string>());
      Flags f = default_flags();
      for (const auto& [k, val] : rec.at("args").items()) {
        std::string key = k;
        std::replace(key.begin(), key.end(), '_', '-');
        f.num[key] = std::stod(val.get<std::string>());
      }
      const Complex want(std::stod(rec.at("value_re").get<std::string>()),
                         std::stod(rec.at("value_im").get<std::string>()));
      const auto got = evaluate(fn, f);
      const double rel = relative_residual(got.value, want);
      worst = std::max(worst, rel);
      if (!(rel <= kFixtureTolerance) || !got.converged)
        failures.push_back({{"index", i}, {"function", rec.at("function")}, {"rel_error", rel}});
    } catch (const std::exception& e) {
      failures.push_back({{"index", i}, {"error", e.what()}});
    }
  }
  report["records"] = records.size();
  report["tolerance"] = kFixtureTolerance;
  report["max_rel_error"] = worst;
  report["failures"] = failures;
  report["passed"] = failures.empty();
  out << report.dump(2) << '\n';
  return failures.empty() ? kOk : kFailed;
}

}  // namespace hbpv::cli
