#include "aqg/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

namespace aqg {

json report_to_json(const Report& r) {
  json out;
  out["subject"] = r.subject;
  out["pass"] = r.all_pass();
  out["checks"] = json::array();
  for (auto& c : r.checks) {
    json jc;
    jc["id"] = c.id;
    jc["law"] = c.law;
    jc["residual"] = c.residual;
    jc["tolerance"] = c.tol;
    jc["pass"] = c.pass;
    out["checks"].push_back(jc);
  }
  return out;
}

void print_report(const Report& r, std::ostream& os) {
  os << "== " << r.subject << " ==\n";
  for (auto& c : r.checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", c.residual);
    os << (c.pass ? "  pass  " : "  FAIL  ") << c.id << "  residual " << buf << " (tol ";
    std::snprintf(buf, sizeof buf, "%.0e", c.tol);
    os << buf << ")  " << c.law << "\n";
  }
  os << (r.all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
}

// --- scalars -------------------------------------------------------------------

static json encode_part(double v) {
  return json(v);
}

static json encode_part(const rational& v) {
  if (v.is_integer()) return json(v.num());
  json j;
  j["num"] = v.num();
  j["den"] = v.den();
  return j;
}

json encode_cd(cd v) { return json::array({encode_part(v.real()), encode_part(v.imag())}); }

json encode_rc(const rc& v) {
  return json::array({encode_part(v.re), encode_part(v.im)});
}

static double decode_part_cd(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object() && j.contains("num") && j.contains("den"))
    return double(j["num"].get<long long>()) / double(j["den"].get<long long>());
  throw error(errc::schema, "scalar part must be a number or {num, den}");
}

static rational decode_part_rc(const json& j) {
  if (j.is_object() && j.contains("num") && j.contains("den"))
    return rational(j["num"].get<long long>(), j["den"].get<long long>());
  if (j.is_number_integer()) return rational(j.get<long long>());
  if (j.is_number()) {
    double v = j.get<double>();
    if (v == std::floor(v) && std::abs(v) < 9e15) return rational((long long)v);
    throw error(errc::not_exact, "exact mode requires integer or {num, den} entries");
  }
  throw error(errc::schema, "scalar part must be a number or {num, den}");
}

cd decode_cd(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw error(errc::schema, "complex values are [re, im] pairs");
  return cd{decode_part_cd(j[0]), decode_part_cd(j[1])};
}

rc decode_rc(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw error(errc::schema, "complex values are [re, im] pairs");
  return rc{decode_part_rc(j[0]), decode_part_rc(j[1])};
}

// --- entries --------------------------------------------------------------------

json entry_to_json(const std::string& name, const StarAlgebra<rc>& A, const Hopf<rc>& H,
                   haar_normalization norm, const ExpectedFlags& expected) {
  const int n = A.dim;
  json j;
  j["kind"] = "algebra";
  j["name"] = name;
  j["dim"] = n;
  j["labels"] = A.labels;
  j["mult"] = json::array();
  for (int i = 0; i < n; ++i) {
    json ji = json::array();
    for (int t = 0; t < n; ++t) {
      json jt = json::array();
      for (int k = 0; k < n; ++k) jt.push_back(encode_rc(A.m(i, t, k)));
      ji.push_back(jt);
    }
    j["mult"].push_back(ji);
  }
  j["star"] = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int k = 0; k < n; ++k) row.push_back(encode_rc(A.star(i, k)));
    j["star"].push_back(row);
  }
  if (A.unit) {
    json u = json::array();
    for (int k = 0; k < n; ++k) u.push_back(encode_rc((*A.unit)[k]));
    j["unit"] = u;
  } else {
    j["unit"] = nullptr;
  }
  json hopf;
  hopf["delta"] = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int t = 0; t < n * n; ++t) row.push_back(encode_rc(H.delta(i, t)));
    hopf["delta"].push_back(row);
  }
  json eps = json::array();
  for (int i = 0; i < n; ++i) eps.push_back(encode_rc(H.epsilon.coeffs[i]));
  hopf["epsilon"] = eps;
  json anti = json::array();
  for (int k = 0; k < n; ++k) {
    json row = json::array();
    for (int t = 0; t < n; ++t) row.push_back(encode_rc(H.antipode(k, t)));
    anti.push_back(row);
  }
  hopf["antipode"] = anti;
  j["hopf"] = hopf;
  j["haar_normalization"] = norm == haar_normalization::discrete ? "discrete" : "unit";
  json ex;
  if (expected.compact) ex["compact"] = *expected.compact;
  if (expected.discrete) ex["discrete"] = *expected.discrete;
  if (expected.tracial) ex["tracial"] = *expected.tracial;
  if (expected.s2_identity) ex["s2_identity"] = *expected.s2_identity;
  if (!ex.empty()) j["expected"] = ex;
  return j;
}

template <class K>
LoadedEntry<K> entry_from_json(const json& j) {
  LoadedEntry<K> e;
  try {
    e.name = j.value("name", "unnamed");
    int n = j.at("dim").get<int>();
    if (n <= 0) throw error(errc::schema, "dim must be positive");
    e.A.dim = n;
    e.A.labels = j.value("labels", std::vector<std::string>{});
    while (int(e.A.labels.size()) < n)
      e.A.labels.push_back("b" + std::to_string(e.A.labels.size()));

    const json& mult = j.at("mult");
    if (!mult.is_array() || int(mult.size()) != n)
      throw error(errc::schema, "mult must be an n x n x n tensor (outer size)");
    e.A.mult.assign(size_t(n) * n * n, scalar_traits<K>::zero());
    for (int i = 0; i < n; ++i) {
      if (!mult[i].is_array() || int(mult[i].size()) != n)
        throw error(errc::schema, "mult[" + std::to_string(i) + "] has wrong arity");
      for (int t = 0; t < n; ++t) {
        if (!mult[i][t].is_array() || int(mult[i][t].size()) != n)
          throw error(errc::schema,
                      "mult[" + std::to_string(i) + "][" + std::to_string(t) + "] has wrong arity");
        for (int k = 0; k < n; ++k) e.A.m(i, t, k) = decode_scalar<K>(mult[i][t][k]);
      }
    }
    const json& star = j.at("star");
    if (!star.is_array() || int(star.size()) != n)
      throw error(errc::schema, "star must be an n x n matrix");
    e.A.star = Mat<K>(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) e.A.star(i, k) = decode_scalar<K>(star.at(i).at(k));
    if (j.contains("unit") && !j["unit"].is_null()) {
      Vec<K> u(n);
      for (int k = 0; k < n; ++k) u[k] = decode_scalar<K>(j["unit"].at(k));
      e.A.unit = u;
    }

    const json& hopf = j.at("hopf");
    const json& delta = hopf.at("delta");
    if (!delta.is_array() || int(delta.size()) != n)
      throw error(errc::schema, "hopf.delta must have n rows");
    e.delta = Mat<K>(n, n * n);
    for (int i = 0; i < n; ++i) {
      if (int(delta[i].size()) != n * n)
        throw error(errc::schema, "hopf.delta rows must have n^2 entries");
      for (int t = 0; t < n * n; ++t) e.delta(i, t) = decode_scalar<K>(delta[i][t]);
    }
    if (hopf.contains("epsilon") && !hopf["epsilon"].is_null()) {
      Functional<K> eps;
      eps.coeffs.resize(n);
      for (int i = 0; i < n; ++i) eps.coeffs[i] = decode_scalar<K>(hopf["epsilon"].at(i));
      e.epsilon = eps;
    }
    if (hopf.contains("antipode") && !hopf["antipode"].is_null()) {
      Mat<K> S(n, n);
      for (int k = 0; k < n; ++k)
        for (int t = 0; t < n; ++t) S(k, t) = decode_scalar<K>(hopf["antipode"].at(k).at(t));
      e.antipode = S;
    }
    std::string norm = j.value("haar_normalization", "unit");
    if (norm == "discrete") e.norm = haar_normalization::discrete;
    else if (norm == "unit") e.norm = haar_normalization::unit;
    else throw error(errc::schema, "haar_normalization must be unit or discrete");

    if (j.contains("expected")) {
      const json& ex = j["expected"];
      if (ex.contains("compact")) e.expected.compact = ex["compact"].get<bool>();
      if (ex.contains("discrete")) e.expected.discrete = ex["discrete"].get<bool>();
      if (ex.contains("tracial")) e.expected.tracial = ex["tracial"].get<bool>();
      if (ex.contains("s2_identity")) e.expected.s2_identity = ex["s2_identity"].get<bool>();
    }
  } catch (const json::exception& ex) {
    throw error(errc::schema, std::string("malformed entry: ") + ex.what());
  }
  return e;
}

template LoadedEntry<cd> entry_from_json<cd>(const json&);
template LoadedEntry<rc> entry_from_json<rc>(const json&);

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::schema, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw error(errc::schema, path + ": " + ex.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw error(errc::schema, "cannot write " + path);
  out << j.dump(1) << "\n";
}

std::string json_kind(const json& j) { return j.value("kind", "algebra"); }

// --- suq2 ------------------------------------------------------------------------

static json qcoeff_to_json(const QCoeff& c) {
  json j;
  j["num"] = c.c.num();
  j["den"] = c.c.den();
  j["qpow"] = c.qpow;
  return j;
}

static QCoeff qcoeff_from_json(const json& j) {
  QCoeff c;
  c.c = rational(j.at("num").get<long long>(), j.at("den").get<long long>());
  c.qpow = j.at("qpow").get<int>();
  return c;
}

static json word_to_json(const std::string& w) {
  json out = json::array();
  for (char l : w) out.push_back(int(l));
  return out;
}

static std::string word_from_json(const json& j) {
  std::string w;
  for (auto& v : j) w.push_back(char(v.get<int>()));
  return w;
}

json suq2_data_to_json(const Suq2Data& d) {
  json j;
  j["kind"] = "suq2";
  j["version"] = d.version;
  j["letters"] = d.letter_names;
  j["star"] = d.letter_star;
  j["rules"] = json::array();
  for (auto& r : d.rules) {
    json jr;
    jr["lhs"] = word_to_json(r.lhs);
    jr["rhs"] = json::array();
    for (auto& [c, w] : r.rhs) {
      json t = qcoeff_to_json(c);
      t["word"] = word_to_json(w);
      jr["rhs"].push_back(t);
    }
    j["rules"].push_back(jr);
  }
  j["delta"] = json::array();
  for (auto& terms : d.delta) {
    json jt = json::array();
    for (auto& [c, lw, rw] : terms) {
      json t = qcoeff_to_json(c);
      t["left"] = word_to_json(lw);
      t["right"] = word_to_json(rw);
      jt.push_back(t);
    }
    j["delta"].push_back(jt);
  }
  j["epsilon"] = json::array();
  for (auto& c : d.epsilon) j["epsilon"].push_back(qcoeff_to_json(c));
  j["antipode"] = json::array();
  for (auto& terms : d.antipode) {
    json jt = json::array();
    for (auto& [c, w] : terms) {
      json t = qcoeff_to_json(c);
      t["word"] = word_to_json(w);
      jt.push_back(t);
    }
    j["antipode"].push_back(jt);
  }
  return j;
}

Suq2Data suq2_data_from_json(const json& j) {
  Suq2Data d;
  try {
    d.version = j.at("version").get<int>();
    d.letter_names = j.at("letters").get<std::vector<std::string>>();
    d.letter_star = j.at("star").get<std::vector<int>>();
    for (auto& jr : j.at("rules")) {
      Suq2Data::Rule r;
      r.lhs = word_from_json(jr.at("lhs"));
      for (auto& t : jr.at("rhs")) r.rhs.emplace_back(qcoeff_from_json(t), word_from_json(t.at("word")));
      d.rules.push_back(std::move(r));
    }
    for (auto& jt : j.at("delta")) {
      std::vector<std::tuple<QCoeff, std::string, std::string>> terms;
      for (auto& t : jt)
        terms.emplace_back(qcoeff_from_json(t), word_from_json(t.at("left")),
                           word_from_json(t.at("right")));
      d.delta.push_back(std::move(terms));
    }
    for (auto& t : j.at("epsilon")) d.epsilon.push_back(qcoeff_from_json(t));
    for (auto& jt : j.at("antipode")) {
      std::vector<std::pair<QCoeff, std::string>> terms;
      for (auto& t : jt) terms.emplace_back(qcoeff_from_json(t), word_from_json(t.at("word")));
      d.antipode.push_back(std::move(terms));
    }
  } catch (const json::exception& ex) {
    throw error(errc::schema, std::string("malformed suq2 dataset: ") + ex.what());
  }
  return d;
}

json suq2_golden_json(const Suq2Sandbox& sb) {
  json j;
  j["kind"] = "suq2_golden";
  j["q"] = sb.alg.q();
  j["degree"] = sb.alg.degree();
  json phi;
  for (int i = 0; i < sb.alg.dim(); ++i)
    if (std::abs(sb.phi[i]) > 1e-13) phi[sb.alg.label(i)] = encode_cd(sb.phi[i]);
  j["phi"] = phi;
  return j;
}

// --- shipped corpus ------------------------------------------------------------------

void write_corpus(const std::string& dir) {
  for (auto& gname : corpus_group_names()) {
    FiniteGroup G = group_by_name(gname);
    {
      auto [A, H] = group_algebra<rc>(G);
      ExpectedFlags ex;
      ex.compact = true;
      ex.discrete = true;
      ex.tracial = true;
      ex.s2_identity = true;
      write_json_file(dir + "/c_" + gname + ".json",
                      entry_to_json("c_" + gname, A, H, haar_normalization::unit, ex));
    }
    {
      auto [A, H] = function_algebra<rc>(G);
      ExpectedFlags ex;
      ex.compact = true;
      ex.discrete = true;
      ex.tracial = true;
      ex.s2_identity = true;
      write_json_file(dir + "/k_" + gname + ".json",
                      entry_to_json("k_" + gname, A, H, haar_normalization::discrete, ex));
    }
  }
  write_json_file(dir + "/suq2.json", suq2_data_to_json(builtin_suq2_data()));
  // golden truncated-Haar values, derived once from the invariance solve
  for (double q : {0.5, 2.0 / 3.0}) {
    auto sb = suq2_build(builtin_suq2_data(), q, 4);
    std::string tag = q == 0.5 ? "q_half" : "q_two_thirds";
    write_json_file(dir + "/suq2_golden_" + tag + ".json", suq2_golden_json(sb));
  }
}

}  // namespace aqg
