#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aqg/duality.hpp"

using namespace aqg;

namespace {

/// x-hat -> e_{x^-1}: permutation matrix from dual-of-C(G) coordinates to
/// K(G) coordinates.
template <class K>
Mat<K> hat_to_indicator(const FiniteGroup& G) {
  Mat<K> M(G.n, G.n);
  for (int i = 0; i < G.n; ++i) M(G.inv[i], i) = scalar_traits<K>::one();
  return M;
}

}  // namespace

TEST_CASE("dual of C(Z2) is K(Z2) via x-hat -> e_{x^-1}, exactly") {
  FiniteGroup G = cyclic_group(2);
  auto qg = corpus_entry<rc>("c_z2");
  auto D = build_dual(qg.A, qg.H, qg.haar);

  auto [KA, KH] = function_algebra<rc>(G);
  Mat<rc> M = hat_to_indicator<rc>(G);
  CHECK(morphism_residual(D.carrier, D.hopf, KA, KH, M) == 0.0);
  CHECK(D.reading == involution_reading::conj_after_star);

  // psi-hat(x-hat) = eps(x) = 1 for every group element
  for (int i = 0; i < G.n; ++i) CHECK(D.haar_right.coeffs[i] == rc{1});
  CHECK(D.right_invariance_residual == 0.0);
}

TEST_CASE("dual of C(Gamma) is K(Gamma) exactly for the whole corpus") {
  for (auto& gname : corpus_group_names()) {
    CAPTURE(gname);
    FiniteGroup G = group_by_name(gname);
    auto qg = corpus_entry<rc>("c_" + std::string(gname));
    auto D = build_dual(qg.A, qg.H, qg.haar);
    auto [KA, KH] = function_algebra<rc>(G);
    CHECK(morphism_residual(D.carrier, D.hopf, KA, KH, hat_to_indicator<rc>(G)) == 0.0);
    // the dual passes verify_hopf on its own
    CHECK(verify_hopf(D.carrier, D.hopf).pass());
  }
}

TEST_CASE("dual of K(S3) is C(S3) (double duality route)") {
  auto qg = corpus_entry<rc>("k_s3");
  auto iso = double_dual_iso(qg.A, qg.H, qg.haar);
  CHECK(iso.star_iso);
  CHECK(iso.intertwines_delta);
  CHECK(iso.residual == 0.0);
}

TEST_CASE("double duality holds on all six group corpora") {
  for (auto& gname : corpus_group_names()) {
    CAPTURE(gname);
    auto qg = corpus_entry<rc>("c_" + std::string(gname));
    auto iso = double_dual_iso(qg.A, qg.H, qg.haar);
    CHECK(iso.star_iso);
    CHECK(iso.intertwines_delta);
    CHECK(iso.residual <= 1e-10);
  }
}

TEST_CASE("pi(1) pairs to the dual unit: hat(a)(1) = phi(a)") {
  auto qg = corpus_entry<cd>("c_z3");
  auto D = build_dual(qg.A, qg.H, qg.haar);
  for (int j = 0; j < qg.A.dim; ++j) {
    cd val{0, 0};
    for (int t = 0; t < qg.A.dim; ++t) val += D.pairing(j, t) * (*qg.A.unit)[t];
    CHECK(std::abs(val - qg.haar.phi.coeffs[j]) < 1e-13);
  }
}

TEST_CASE("commutative <-> cocommutative swap under duality") {
  auto is_commutative = [](const StarAlgebra<rc>& A) {
    for (int i = 0; i < A.dim; ++i)
      for (int j = 0; j < A.dim; ++j) {
        auto l = A.multiply(A.basis_vector(i), A.basis_vector(j));
        auto r = A.multiply(A.basis_vector(j), A.basis_vector(i));
        if (!(l == r)) return false;
      }
    return true;
  };
  auto is_cocommutative = [](const StarAlgebra<rc>& A, const Hopf<rc>& H) {
    for (int i = 0; i < A.dim; ++i)
      for (int p = 0; p < A.dim; ++p)
        for (int q = 0; q < A.dim; ++q)
          if (!(H.delta(i, p * A.dim + q) == H.delta(i, q * A.dim + p))) return false;
    return true;
  };
  for (auto& gname : corpus_group_names()) {
    CAPTURE(gname);
    auto qg = corpus_entry<rc>("c_" + std::string(gname));
    auto D = build_dual(qg.A, qg.H, qg.haar);
    CHECK(is_cocommutative(qg.A, qg.H));
    CHECK(is_commutative(D.carrier));
    CHECK(is_cocommutative(D.carrier, D.hopf) == is_commutative(qg.A));
  }
}

TEST_CASE("classify_type: corpus entries are both compact and discrete") {
  for (auto& name : corpus_entry_names()) {
    CAPTURE(name);
    auto qg = corpus_entry<rc>(name);
    auto f = classify_type(qg.A, qg.H);
    CHECK(f.compact);
    CHECK(f.discrete);
  }
}

TEST_CASE("removing the unit from the schema clears the compact flag") {
  auto qg = corpus_entry<rc>("c_z2");
  qg.A.unit.reset();
  auto f = classify_type(qg.A, qg.H);
  CHECK(!f.compact);
  CHECK(f.discrete);
}

TEST_CASE("h of C(Gamma) is proportional to the sum over the group") {
  for (auto& gname : {"z2", "s3"}) {
    auto qg = corpus_entry<rc>("c_" + std::string(gname));
    auto h = solve_discrete_element(qg.A, qg.H);
    REQUIRE(h.has_value());
    for (int i = 1; i < qg.A.dim; ++i) CHECK((*h)[i] == (*h)[0]);
    CHECK(!(*h)[0].is_zero());
  }
}

TEST_CASE("h of K(Gamma) is the indicator of the group unit") {
  auto qg = corpus_entry<rc>("k_s3");
  auto h = solve_discrete_element(qg.A, qg.H);
  REQUIRE(h.has_value());
  for (int i = 1; i < qg.A.dim; ++i) CHECK((*h)[i] == rc{0});
  CHECK(!(*h)[0].is_zero());
}

TEST_CASE("discrete-type element of the dual matches the unit-related data") {
  // under x-hat -> e_{x^-1}, h of dual(C(G)) corresponds to hat(1), the image
  // of the group unit
  for (auto& gname : {"z2", "s3"}) {
    auto qg = corpus_entry<rc>("c_" + std::string(gname));
    auto D = build_dual(qg.A, qg.H, qg.haar);
    auto h = solve_discrete_element(D.carrier, D.hopf);
    REQUIRE(h.has_value());
    for (int i = 1; i < D.carrier.dim; ++i) CHECK((*h)[i] == rc{0});
    CHECK(!(*h)[0].is_zero());
  }
}
