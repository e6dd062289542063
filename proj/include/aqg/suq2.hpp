#pragma once

#include <map>
#include <tuple>
#include <unordered_map>

#include "aqg/matrix.hpp"

namespace aqg {

/// Coefficient of the form c * q^p with exact rational c; the relation data
/// is stored this way so a single dataset serves every q.
struct QCoeff {
  rational c;
  int qpow = 0;

  cd value(double q) const { return cd{c.to_double() * std::pow(q, qpow), 0.0}; }
};

/// Versioned generator/relation dataset for the q-deformed SU(2) function
/// algebra. Validation happens in the builder, never by trusting the data.
struct Suq2Data {
  int version = 1;
  std::vector<std::string> letter_names;
  std::vector<int> letter_star;
  struct Rule {
    std::string lhs;  // two-letter word
    std::vector<std::pair<QCoeff, std::string>> rhs;
  };
  std::vector<Rule> rules;
  std::vector<std::vector<std::tuple<QCoeff, std::string, std::string>>> delta;
  std::vector<QCoeff> epsilon;
  std::vector<std::vector<std::pair<QCoeff, std::string>>> antipode;
};

Suq2Data builtin_suq2_data();

/// Degree-filtered quotient of the relation algebra: the linear span of
/// normal monomials of length <= degree, with the product defined whenever
/// the degrees fit (normal forms never raise degree).
class FilteredAlgebra {
 public:
  using Elt = std::map<int, cd>;
  using TensorElt = std::map<std::pair<int, int>, cd>;

  FilteredAlgebra(const Suq2Data& data, double q, int degree);

  double q() const { return q_; }
  int degree() const { return degree_; }
  int dim() const { return int(basis_.size()); }
  const std::string& word(int i) const { return basis_[i]; }
  int degree_of(int i) const { return int(basis_[i].size()); }
  int unit_index() const { return 0; }
  int letter_index(int l) const;  // basis index of the length-1 word l
  std::string letter_name(int l) const { return data_.letter_names[l]; }
  int letters() const { return int(data_.letter_names.size()); }

  /// printable monomial label
  std::string label(int i) const;

  Elt normalize(const std::string& w) const;
  Elt multiply(const Elt& x, const Elt& y) const;
  Elt star(const Elt& x) const;
  cd eps(const Elt& x) const;
  TensorElt delta(const Elt& x) const;
  Elt antipode(const Elt& x) const;

  Elt unit() const { return Elt{{0, cd{1, 0}}}; }
  Elt basis_elt(int i) const { return Elt{{i, cd{1, 0}}}; }

  /// net a-exponent of a monomial (letter 0 counts +1, letter 1 counts -1)
  int a_exponent(int i) const;
  bool has_c_content(int i) const;

  /// worst discrepancy between leftmost and rightmost rewriting over all
  /// words up to the given length
  double confluence_residual(int maxlen) const;

  const TensorElt& delta_of_basis(int i) const;

 private:
  Suq2Data data_;
  double q_;
  int degree_;
  std::vector<std::string> basis_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, int> rule_at_;  // 2-letter word -> rule
  mutable std::unordered_map<long long, Elt> product_cache_;
  mutable std::vector<TensorElt> delta_cache_;
  mutable std::vector<char> delta_cached_;

  std::map<std::string, cd> normalize_words(const std::string& w, bool rightmost) const;
};

/// Sandbox bundle: filtered algebra with its truncated Haar functional and
/// the axiom residuals computed on the filtration.
struct Suq2Sandbox {
  FilteredAlgebra alg;
  Vec<cd> phi;  // on the monomial basis

  struct Axioms {
    double confluence = 0;
    double coassociativity = 0;
    double delta_multiplicative = 0;
    double delta_star = 0;
    double counit = 0;
    double antipode = 0;
    double haar_invariance = 0;
    double worst() const {
      return std::max({confluence, coassociativity, delta_multiplicative, delta_star,
                       counit, antipode, haar_invariance});
    }
  } axioms;

  std::vector<int> half_basis;  // monomials of degree <= floor(d/2)
  Mat<cd> gram_half;            // phi(m_i^* m_j) on the half basis

  cd phi_of(const FilteredAlgebra::Elt& x) const;
};

Suq2Sandbox suq2_build(const Suq2Data& data, double q, int degree);

/// Modular family on the sandbox: f_z vanishes on c-content and acts as
/// mu^(z * a-exponent) otherwise.
struct Suq2Modular {
  double mu = 1.0;            // value of f_1 on the letter 'a'
  double residual = 0;        // defining-condition residual
  bool unique = true;

  Vec<cd> values(const Suq2Sandbox& sb, cd z) const;
};

Suq2Modular suq2_solve_modular(const Suq2Sandbox& sb);

struct Suq2FlowReport {
  double family_residual = 0;
  double additivity = 0;          // f_{z+w} = (f_z x f_w) Delta on the grid
  double antipode_flip = 0;       // f_z o S = f_{-z}
  double star_conjugate = 0;      // conj(f_z(a^*)) = f_{-conj(z)}(a)
  double sigma_diag_unimodular = 0;
  double flow_group_law = 0;      // F_{s+t} = F_s F_t, E likewise
  double flow_commute = 0;
  double flow_unitary_half = 0;   // w.r.t. the Gram form on the half basis
  double flow_fixes_unit = 0;
  double kms = 0;
  double phi_positive_floor = 0;  // most negative Gram eigenvalue
};

Suq2FlowReport suq2_flow_suite(const Suq2Sandbox& sb, const Suq2Modular& fam, double s,
                               double t);

/// F_t / E_t matrices on the monomial basis (coordinates, not an orthonormal
/// frame; unitarity is measured against the Gram form).
Mat<cd> suq2_flow_F(const Suq2Sandbox& sb, const Suq2Modular& fam, double t);
Mat<cd> suq2_flow_E(const Suq2Sandbox& sb, const Suq2Modular& fam, double t);
Mat<cd> suq2_sigma(const Suq2Sandbox& sb, const Suq2Modular& fam, double t);

double suq2_kms_residual(const Suq2Sandbox& sb, const Suq2Modular& fam);

}  // namespace aqg
