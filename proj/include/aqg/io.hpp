#pragma once

#include <json.hpp>
#include <optional>

#include "aqg/corpus.hpp"
#include "aqg/suq2.hpp"

namespace aqg {

using json = nlohmann::ordered_json;

// --- reports ----------------------------------------------------------------

struct Check {
  std::string id;
  std::string law;  // self-describing statement of the identity being checked
  double residual = 0;
  double tol = 0;
  bool pass = false;
};

struct Report {
  std::string subject;
  std::vector<Check> checks;

  Check& add(const std::string& id, const std::string& law, double residual, double tol) {
    checks.push_back({id, law, residual, tol, residual <= tol});
    return checks.back();
  }
  bool all_pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

json report_to_json(const Report& r);
void print_report(const Report& r, std::ostream& os);

// --- scalar encoding ----------------------------------------------------------

/// Values are [re, im]; each part is a plain number or {"num":..,"den":..}.
json encode_cd(cd v);
json encode_rc(const rc& v);
cd decode_cd(const json& j);
rc decode_rc(const json& j);  // throws NotExactlyRepresentable on non-integers

template <class K>
K decode_scalar(const json& j);
template <>
inline cd decode_scalar<cd>(const json& j) { return decode_cd(j); }
template <>
inline rc decode_scalar<rc>(const json& j) { return decode_rc(j); }

template <class K>
json encode_scalar(const K& v);
template <>
inline json encode_scalar<cd>(const cd& v) { return encode_cd(v); }
template <>
inline json encode_scalar<rc>(const rc& v) { return encode_rc(v); }

// --- structure-tensor schema ----------------------------------------------------

struct ExpectedFlags {
  std::optional<bool> compact, discrete, tracial, s2_identity;
};

template <class K>
struct LoadedEntry {
  std::string name;
  StarAlgebra<K> A;
  Mat<K> delta;                      // always required for quantum-group commands
  std::optional<Functional<K>> epsilon;  // null in the file triggers the solver
  std::optional<Mat<K>> antipode;
  haar_normalization norm = haar_normalization::unit;
  ExpectedFlags expected;
};

json entry_to_json(const std::string& name, const StarAlgebra<rc>& A, const Hopf<rc>& H,
                   haar_normalization norm, const ExpectedFlags& expected);

template <class K>
LoadedEntry<K> entry_from_json(const json& j);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Assembles a loaded entry, running the solvers for any null Hopf fields.
template <class K>
QG<K> assemble_entry(const LoadedEntry<K>& e) {
  Hopf<K> H;
  H.delta = e.delta;
  H.epsilon = e.epsilon ? *e.epsilon : solve_counit(e.A, e.delta);
  if (e.antipode) {
    H.antipode = *e.antipode;
  } else {
    Hopf<K> partial{H.delta, H.epsilon, Mat<K>(0, 0)};
    H.antipode = solve_antipode(e.A, partial);
  }
  return assemble(e.name, e.A, H, e.norm);
}

// --- suq2 dataset schema ----------------------------------------------------------

json suq2_data_to_json(const Suq2Data& d);
Suq2Data suq2_data_from_json(const json& j);

/// Golden values of the truncated Haar functional: {"q": .., "degree": ..,
/// "phi": {label: [re, im]}}.
json suq2_golden_json(const Suq2Sandbox& sb);

/// Kind dispatch: "algebra" (default) or "suq2".
std::string json_kind(const json& j);

/// Writes the whole shipped corpus into a directory.
void write_corpus(const std::string& dir);

}  // namespace aqg
