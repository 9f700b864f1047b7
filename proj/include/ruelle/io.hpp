#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruelle/core_model.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/factored.hpp"
#include "ruelle/functional_equation.hpp"
#include "ruelle/lead_term.hpp"

namespace ruelle::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// %.17g keeps round trips exact and the text stable across runs.
inline std::string fmt(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Strict reading: every error names the offending field.

inline void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InputError(path + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw InputError(path + "." + it.key() + ": unknown field");
}

inline const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw InputError(path + "." + key + ": missing field");
  return j.at(key);
}

inline int read_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw InputError(path + ": expected an integer");
  return v.get<int>();
}

inline double read_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw InputError(path + ": expected a number");
  return v.get<double>();
}

// "p/q" or an integer literal.
inline Rational read_rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string()) throw InputError(path + ": expected an integer or a \"p/q\" string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Strings are exact rationals, plain floats are real angles.
inline Angle read_angle(const json& v, const std::string& path) {
  if (v.is_number_float()) return Angle::real(v.get<double>());
  return Angle(read_rational(v, path));
}

template <class T, class F>
std::vector<T> read_list(const json& v, const std::string& path, F&& item) {
  if (!v.is_array()) throw InputError(path + ": expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// {"factors": {"2": "-1", "3": "-1", "pi": "1/2"}} or a positive number.
inline FactoredMagnitude read_factors(const json& v, const std::string& path) {
  if (v.is_number()) {
    double x = v.get<double>();
    if (!(x > 0)) throw InputError(path + ": must be positive");
    return FactoredMagnitude::numeric(x);
  }
  reject_unknown(v, path, {"factors"});
  const json& f = need(v, "factors", path);
  if (!f.is_object()) throw InputError(path + ".factors: expected an object");
  FactoredMagnitude out;
  for (auto it = f.begin(); it != f.end(); ++it) {
    const std::string p = path + ".factors." + it.key();
    Rational e = read_rational(it.value(), p);
    if (it.key() == "pi") {
      out *= FactoredMagnitude::pi().pow(e);
      continue;
    }
    std::size_t used = 0;
    long long base = 0;
    try {
      base = std::stoll(it.key(), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it.key().size() || base < 2) throw InputError(p + ": factor keys are integers >= 2 or \"pi\"");
    out *= FactoredMagnitude::integer(base).pow(e);
  }
  return out;
}

struct OrbifoldDocument {
  OrbifoldSignature sig{2, 0, {}};
  MultiplierSystem ms{1, Rational(0), {}, {}};
  ScatteringData data = ScatteringData::compact();
  std::vector<cplx> samples;
};

inline OrbifoldDocument parse_orbifold_document(const json& doc) {
  reject_unknown(doc, "$", {"version", "signature", "multiplier", "scattering", "samples"});
  int version = read_int(need(doc, "version", "$"), "$.version");
  if (version != kSchemaVersion)
    throw InputError("$.version: unsupported schema version " + std::to_string(version) + " (expected " +
                     std::to_string(kSchemaVersion) + ")");

  const json& s = need(doc, "signature", "$");
  reject_unknown(s, "$.signature", {"genus", "cusps", "elliptic_orders"});
  int genus = read_int(need(s, "genus", "$.signature"), "$.signature.genus");
  int cusps = s.contains("cusps") ? read_int(s.at("cusps"), "$.signature.cusps") : 0;
  std::vector<int> nus;
  if (s.contains("elliptic_orders")) nus = read_list<int>(s.at("elliptic_orders"), "$.signature.elliptic_orders", read_int);
  OrbifoldDocument out;
  try {
    out.sig = OrbifoldSignature(genus, cusps, nus);
  } catch (const InputError& e) {
    throw InputError(std::string("$.signature: ") + e.what());
  }

  const json& m = need(doc, "multiplier", "$");
  reject_unknown(m, "$.multiplier", {"dimension", "weight_k", "elliptic_residues", "parabolic_angles"});
  int dim = read_int(need(m, "dimension", "$.multiplier"), "$.multiplier.dimension");
  Rational k = m.contains("weight_k") ? read_rational(m.at("weight_k"), "$.multiplier.weight_k") : Rational(0);
  std::vector<std::vector<int>> alpha;
  if (m.contains("elliptic_residues"))
    alpha = read_list<std::vector<int>>(m.at("elliptic_residues"), "$.multiplier.elliptic_residues",
                                        [](const json& v, const std::string& p) { return read_list<int>(v, p, read_int); });
  std::vector<std::vector<Angle>> beta;
  if (m.contains("parabolic_angles"))
    beta = read_list<std::vector<Angle>>(m.at("parabolic_angles"), "$.multiplier.parabolic_angles",
                                         [](const json& v, const std::string& p) { return read_list<Angle>(v, p, read_angle); });
  try {
    out.ms = MultiplierSystem(dim, k, alpha, beta);
    check_consistent(out.sig, out.ms);
  } catch (const InputError& e) {
    throw InputError(std::string("$.multiplier: ") + e.what());
  }
  if (!admissibility_check(out.sig, dim, k))
    throw InputError("$.multiplier.weight_k: " + to_string(k) + " is not an admissible weight for this compact signature");

  ScatteringData d = ScatteringData::compact();
  if (doc.contains("scattering")) {
    const json& sc = doc.at("scattering");
    const std::string p = "$.scattering";
    reject_unknown(sc, p, {"n0", "a_n0", "d1", "c1", "half_trace_exponent", "signs_known", "an0_d1_abs", "phi"});
    d.half_trace_exponent.reset();
    if (sc.contains("n0")) d.n0 = read_int(sc.at("n0"), p + ".n0");
    if (sc.contains("a_n0")) d.a_n0 = read_real(sc.at("a_n0"), p + ".a_n0");
    if (sc.contains("d1")) d.d1 = read_real(sc.at("d1"), p + ".d1");
    if (sc.contains("c1")) d.c1 = read_real(sc.at("c1"), p + ".c1");
    if (sc.contains("half_trace_exponent")) d.half_trace_exponent = read_int(sc.at("half_trace_exponent"), p + ".half_trace_exponent");
    else if (out.sig.compact()) d.half_trace_exponent = 0;
    if (sc.contains("signs_known")) {
      if (!sc.at("signs_known").is_boolean()) throw InputError(p + ".signs_known: expected true or false");
      d.signs_known = sc.at("signs_known").get<bool>();
    }
    if (sc.contains("an0_d1_abs")) d.an0_d1_abs = read_factors(sc.at("an0_d1_abs"), p + ".an0_d1_abs");
    if (sc.contains("phi")) {
      const json& ph = sc.at("phi");
      if (ph.is_string() && ph.get<std::string>() == "level-one") {
        d.phi = phi_level_one;
      } else if (ph.is_object()) {
        reject_unknown(ph, p + ".phi", {"exponential"});
        double c = read_real(need(ph, "exponential", p + ".phi"), p + ".phi.exponential");
        d.phi = [c](cplx z) { return std::exp(c * (2.0 * z - 1.0)); };
      } else {
        throw InputError(p + ".phi: expected \"level-one\" or {\"exponential\": c}");
      }
    }
  }
  try {
    Model probe = make_model(out.sig, out.ms, d);
    (void)probe;
  } catch (const InputError& e) {
    throw InputError(std::string("$.scattering: ") + e.what());
  }
  out.data = d;

  if (doc.contains("samples"))
    out.samples = read_list<cplx>(doc.at("samples"), "$.samples", [](const json& v, const std::string& p) {
      if (!v.is_array() || v.size() != 2) throw InputError(p + ": expected [re, im]");
      return cplx(read_real(v[0], p + "[0]"), read_real(v[1], p + "[1]"));
    });
  return out;
}

inline OrbifoldDocument load_orbifold_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open document '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("document '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_orbifold_document(doc);
}

// ---------------------------------------------------------------------------
// Writing

inline json to_json(const FactoredMagnitude& f) {
  json factors = json::object();
  for (const auto& [a, e] : f.atoms()) factors[a.name()] = to_string(e);
  json j;
  j["value"] = f.value();
  j["log_value"] = f.log_value();
  j["factors"] = factors;
  if (f.has_residue()) j["residue"] = f.residue();
  return j;
}

inline json to_json(const LeadTermResult& r) {
  json j;
  j["order"] = r.order;
  j["magnitude"] = to_json(r.magnitude);
  j["sign_known"] = r.sign_known;
  j["sign"] = r.sign ? json(*r.sign) : json(nullptr);
  return j;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Rows of strings rendered as an aligned text table or as TeX rows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string text() const {
    std::vector<std::size_t> w(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) w[c] = header[c].size();
    for (const auto& r : rows)
      for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        os << r[c];
        if (c + 1 < r.size()) os << std::string(w[c] - r[c].size() + 2, ' ');
      }
      os << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }

  std::string tex() const {
    auto esc = [](const std::string& s) {
      std::string o;
      for (char ch : s) {
        if (ch == '_' || ch == '#' || ch == '%' || ch == '&') o += '\\';
        o += ch;
      }
      return o;
    };
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? " & " : "") << esc(r[c]);
      os << " \\\\\n";
    };
    line(header);
    os << "\\hline\n";
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

}  // namespace ruelle::io
