#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aqg/suq2.hpp"

using namespace aqg;

namespace {
const Suq2Data& data() {
  static Suq2Data d = builtin_suq2_data();
  return d;
}
}  // namespace

TEST_CASE("rewriter: defining relations hold as normal-form identities") {
  FilteredAlgebra F(data(), 0.5, 4);
  const double q = 0.5;
  auto a = F.basis_elt(F.letter_index(0));
  auto as = F.basis_elt(F.letter_index(1));
  auto c = F.basis_elt(F.letter_index(2));
  auto cs = F.basis_elt(F.letter_index(3));

  // a* a + c* c = 1
  auto lhs = F.multiply(as, a);
  for (auto& [k, v] : F.multiply(cs, c)) lhs[k] += v;
  CHECK(std::abs(lhs.at(0) - cd{1, 0}) < 1e-14);
  for (auto& [k, v] : lhs)
    if (k != 0) CHECK(std::abs(v) < 1e-14);

  // a a* + q^2 c* c = 1
  auto lhs2 = F.multiply(a, as);
  for (auto& [k, v] : F.multiply(cs, c)) lhs2[k] += v * (q * q);
  CHECK(std::abs(lhs2.at(0) - cd{1, 0}) < 1e-14);

  // c c* = c* c, a c = q^-1 ... i.e. c a = q^-1 a c
  auto cc = F.multiply(c, cs);
  auto ccs = F.multiply(cs, c);
  for (auto& [k, v] : cc) CHECK(std::abs(v - ccs[k]) < 1e-14);
  auto ca = F.multiply(c, a);
  auto ac = F.multiply(a, c);
  for (auto& [k, v] : ca) CHECK(std::abs(v - ac[k] / q) < 1e-14);
}

TEST_CASE("rewriting is confluent up to degree 4; a corrupted rule is caught") {
  FilteredAlgebra F(data(), 0.5, 4);
  CHECK(F.confluence_residual(4) == 0.0);

  Suq2Data bad = data();
  bad.rules[2].rhs[0].first.c = rational(3, 7);  // c a -> (3/7) a c breaks overlaps
  CHECK_THROWS_AS(FilteredAlgebra(bad, 0.5, 4), error);
}

TEST_CASE("star is an antilinear involution on the truncation") {
  FilteredAlgebra F(data(), 0.5, 4);
  for (int i = 0; i < F.dim(); ++i) {
    auto ss = F.star(F.star(F.basis_elt(i)));
    ss[i] -= cd{1, 0};
    for (auto& [k, v] : ss) CHECK(std::abs(v) < 1e-13);
  }
}

TEST_CASE("basis sizes of the filtration: (d+1)^2 summed") {
  CHECK(FilteredAlgebra(data(), 0.5, 4).dim() == 55);
  CHECK(FilteredAlgebra(data(), 0.5, 6).dim() == 140);
}

TEST_CASE("products outside the filtration are refused") {
  FilteredAlgebra F(data(), 0.5, 2);
  auto c = F.basis_elt(F.letter_index(2));
  auto cc = F.multiply(c, c);
  CHECK_THROWS_AS(F.multiply(cc, c), error);
}

TEST_CASE("haar on the truncation: phi(1) = 1, diagonal support, exact low moments") {
  auto sb = suq2_build(data(), 0.5, 4);
  const auto& F = sb.alg;
  CHECK(sb.axioms.worst() < 1e-12);
  CHECK(std::abs(sb.phi[0] - cd{1, 0}) < 1e-13);

  // phi vanishes off the diagonal sector (a-exponent 0, equal c and c* counts)
  for (int i = 0; i < F.dim(); ++i) {
    const std::string& w = F.word(i);
    int nc = 0, ncs = 0;
    for (char l : w) {
      if (l == 2) ++nc;
      if (l == 3) ++ncs;
    }
    bool diagonal = (F.a_exponent(i) == 0) && (nc == ncs);
    if (!diagonal) CHECK(std::abs(sb.phi[i]) < 1e-12);
  }

  // independent depth-2 oracle: invariance of c c* forces
  // phi(c c*) = 1 / (1 + q^2)
  double q = 0.5;
  auto c = F.basis_elt(F.letter_index(2));
  auto cs = F.basis_elt(F.letter_index(3));
  cd val = sb.phi_of(F.multiply(c, cs));
  CHECK(std::abs(val - cd{1.0 / (1.0 + q * q), 0}) < 1e-12);
  // and phi(c* c) equals it by normality
  CHECK(std::abs(sb.phi_of(F.multiply(cs, c)) - val) < 1e-13);

  // second diagonal moment from the closed form (1-q^2)/(1-q^(2k+2)) at k = 2
  auto cc = F.multiply(c, c);
  auto cscs = F.multiply(cs, cs);
  cd val2 = sb.phi_of(F.multiply(cc, cscs));
  double expect2 = (1 - q * q) / (1 - std::pow(q, 6.0));
  CHECK(std::abs(val2 - cd{expect2, 0}) < 1e-12);
}

TEST_CASE("phi is stable between the d = 4 and d = 6 truncations") {
  auto sb4 = suq2_build(data(), 0.5, 4);
  auto sb6 = suq2_build(data(), 0.5, 6);
  for (int i = 0; i < sb4.alg.dim(); ++i) {
    const std::string& w = sb4.alg.word(i);
    // same word indexes differently at d = 6; find it
    int j = -1;
    for (int k = 0; k < sb6.alg.dim(); ++k)
      if (sb6.alg.word(k) == w) { j = k; break; }
    REQUIRE(j >= 0);
    CHECK(std::abs(sb4.phi[i] - sb6.phi[j]) < 1e-10);
  }
}

TEST_CASE("gram positivity holds at q = 1/2 and q = 2/3") {
  for (double q : {0.5, 2.0 / 3.0}) {
    auto sb = suq2_build(data(), q, 4);
    auto ev = hermitian_eigenvalues(sb.gram_half);
    CHECK(ev.front() > -1e-10);
  }
}

TEST_CASE("modular family: f_1(a) = 1/q, f_1(c) = 0, conditions on the grid") {
  auto sb = suq2_build(data(), 0.5, 4);
  auto fam = suq2_solve_modular(sb);
  CHECK(fam.unique);
  CHECK(fam.residual < 1e-10);
  CHECK(fam.mu == doctest::Approx(2.0).epsilon(1e-9));  // 1/q at q = 1/2
  auto f1 = fam.values(sb, cd{1, 0});
  CHECK(std::abs(f1[sb.alg.letter_index(2)]) == 0.0);
  CHECK(std::abs(f1[sb.alg.letter_index(3)]) == 0.0);
  CHECK(std::abs(f1[0] - cd{1, 0}) == 0.0);
}

TEST_CASE("non-tracial: phi(a a*) differs from phi(a* a)") {
  auto sb = suq2_build(data(), 0.5, 4);
  auto a = sb.alg.basis_elt(sb.alg.letter_index(0));
  auto as = sb.alg.basis_elt(sb.alg.letter_index(1));
  cd aas = sb.phi_of(sb.alg.multiply(a, as));
  cd asa = sb.phi_of(sb.alg.multiply(as, a));
  CHECK(std::abs(aas - asa) > 0.1);
  // explicit values 1/(1+q^2) and q^2/(1+q^2)
  CHECK(std::abs(aas - cd{0.8, 0}) < 1e-12);
  CHECK(std::abs(asa - cd{0.2, 0}) < 1e-12);
}

TEST_CASE("flow suite at q = 1/2, d = 4: group law, KMS, unitarity") {
  auto sb = suq2_build(data(), 0.5, 4);
  auto fam = suq2_solve_modular(sb);
  auto rep = suq2_flow_suite(sb, fam, 0.3, 0.5);
  CHECK(rep.family_residual < 1e-10);
  CHECK(rep.additivity < 1e-10);
  CHECK(rep.antipode_flip < 1e-10);
  CHECK(rep.star_conjugate < 1e-10);
  CHECK(rep.sigma_diag_unimodular < 1e-10);
  CHECK(rep.flow_group_law < 1e-10);
  CHECK(rep.flow_commute < 1e-10);
  CHECK(rep.flow_unitary_half < 1e-10);
  CHECK(rep.flow_fixes_unit < 1e-12);
  CHECK(rep.kms < 1e-10);
  CHECK(rep.phi_positive_floor > -1e-10);
}

TEST_CASE("F_{0.8} = F_{0.3} F_{0.5} on the truncated lambda space") {
  auto sb = suq2_build(data(), 0.5, 4);
  auto fam = suq2_solve_modular(sb);
  Mat<cd> lhs = suq2_flow_F(sb, fam, 0.8);
  Mat<cd> rhs = matmul(suq2_flow_F(sb, fam, 0.3), suq2_flow_F(sb, fam, 0.5));
  CHECK(diff_norm(lhs, rhs) <= 1e-10);
}

TEST_CASE("tracial degeneration guard at q near 1") {
  auto sb = suq2_build(data(), 1.0 - 1e-6, 4);
  const auto& F = sb.alg;
  double worst = 0;
  for (int i = 0; i < F.dim(); ++i)
    for (int j = 0; j < F.dim(); ++j) {
      if (F.degree_of(i) + F.degree_of(j) > F.degree()) continue;
      cd d = sb.phi_of(F.multiply(F.basis_elt(i), F.basis_elt(j))) -
             sb.phi_of(F.multiply(F.basis_elt(j), F.basis_elt(i)));
      worst = std::max(worst, std::abs(d));
    }
  CHECK(worst < 1e-4);
}

TEST_CASE("corrupted coproduct fails the haar solve") {
  Suq2Data bad = data();
  bad.delta[0].pop_back();  // Delta(a) = a x a only: no longer coassociative with the rest
  bool threw = false;
  try {
    suq2_build(bad, 0.5, 4);
  } catch (const error& e) {
    threw = true;
  }
  CHECK(threw);
}
