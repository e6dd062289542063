#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aqg/modular.hpp"

using namespace aqg;

TEST_CASE("modular family of a group algebra is trivial: f_z = eps") {
  for (auto& name : {"c_z2", "c_s3"}) {
    CAPTURE(name);
    auto qg = corpus_entry<cd>(name);
    auto fam = solve_modular_family(qg.A, qg.H, qg.haar);
    CHECK(fam.unique);
    for (int i = 0; i < qg.A.dim; ++i) {
      CHECK(fam.mu[i] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(std::abs(fam.at(cd{1, 0}).coeffs[i] - cd{1, 0}) < 1e-10);
    }
    auto grid = family_grid_check(qg.A, qg.H, fam);
    CHECK(grid.worst() < 1e-10);
  }
}

TEST_CASE("modular family of K(S3) is the counit") {
  auto qg = corpus_entry<cd>("k_s3");
  auto fam = solve_modular_family(qg.A, qg.H, qg.haar);
  for (int i = 0; i < qg.A.dim; ++i)
    CHECK(std::abs(fam.at(cd{1, 0}).coeffs[i] - cd{i == 0 ? 1.0 : 0.0, 0}) < 1e-12);
  CHECK(family_grid_check(qg.A, qg.H, fam).worst() < 1e-10);
}

TEST_CASE("the sign character admits no square root in the family sense") {
  // f_{1/2}(g)^2 would have to be both f_1(g) = -1 and f_{1/2}(g^2) = 1
  auto qg = corpus_entry<cd>("c_z2");
  auto chars = cyclic_characters(2);
  const auto& sign = chars[1];
  CHECK(std::abs(sign.coeffs[1] - cd{-1, 0}) < 1e-14);
  // any unital multiplicative v with convolve(v, v) = sign hits a contradiction:
  // convolve(v, v)(g) = v(g)^2 and multiplicativity forces v(g)^2 = v(g^2) = v(1) = 1
  Vec<cd> g2 = qg.A.multiply(qg.A.basis_vector(1), qg.A.basis_vector(1));
  CHECK(std::abs(g2[0] - cd{1, 0}) < 1e-14);  // g^2 = 1, so the two demands differ by 2
  // and the solver indeed returns only the trivial family
  auto fam = solve_modular_family(qg.A, qg.H, qg.haar);
  CHECK(fam.mu[1] == doctest::Approx(1.0));
}

TEST_CASE("sigma_t is the identity for tracial corpus entries") {
  auto p = corpus_pipeline<cd>("c_s3");
  auto fam = solve_modular_family(p.A(), p.H(), p.qg.haar);
  for (double t : {0.0, 0.4, -1.3}) {
    Mat<cd> st = sigma_t(p.A(), p.H(), fam, t);
    CHECK(diff_norm(st, Mat<cd>::identity(p.dim())) < 1e-10);
  }
}

TEST_CASE("flow unitaries collapse to the identity in the tracial case") {
  auto p = corpus_pipeline<cd>("k_s3");
  auto fam = solve_modular_family(p.A(), p.H(), p.qg.haar);
  auto U = flow_unitaries(p, fam, 0.7);
  CHECK(diff_norm(U.F, Mat<cd>::identity(p.dim())) < 1e-10);
  CHECK(diff_norm(U.E, Mat<cd>::identity(p.dim())) < 1e-10);
  CHECK(diff_norm(U.V, Mat<cd>::identity(p.dim())) < 1e-10);
}

TEST_CASE("full modular suite on tracial entries") {
  for (auto& name : {"c_z6", "c_s3", "k_s3", "c_q8"}) {
    CAPTURE(name);
    auto p = corpus_pipeline<cd>(name);
    auto rep = run_modular_suite(p, {0.3, 0.5}, 50, 11);
    CHECK(rep.family_residual < 1e-10);
    CHECK(rep.grid.worst() < 1e-10);
    CHECK(rep.sigma_automorphism < 1e-10);
    CHECK(rep.sigma_group_law < 1e-10);
    CHECK(rep.phi_invariance < 1e-10);
    CHECK(rep.flow_group_law < 1e-10);
    CHECK(rep.flow_unitary < 1e-10);
    CHECK(rep.flow_commute < 1e-10);
    CHECK(rep.flow_fixes_lambda_unit < 1e-10);
    CHECK(rep.v_implements_sigma < 1e-10);
    CHECK(rep.w_slice_cross_check < 1e-12);
    CHECK(rep.kms < 1e-12);
    // tracial collapse: three-way equivalence
    CHECK(rep.tracial);
    CHECK(rep.mu_trivial);
    CHECK(rep.rho_trivial);
  }
}

TEST_CASE("KMS reduces to the trace property when f = eps") {
  auto qg = corpus_entry<cd>("c_d4");
  auto fam = solve_modular_family(qg.A, qg.H, qg.haar);
  CHECK(kms_residual(qg.A, qg.H, qg.haar.phi, fam, 100, 3) < 1e-12);
}

TEST_CASE("an unsatisfiable modular-shift condition is surfaced, not approximated") {
  // rho is an input to the solver; a permutation in its place admits no
  // positive diagonal family
  auto qg = corpus_entry<cd>("c_z3");
  QG<cd> broken = qg;
  broken.haar.rho = Mat<cd>(3, 3);
  broken.haar.rho(0, 0) = 1.0;
  broken.haar.rho(1, 2) = 1.0;
  broken.haar.rho(2, 1) = 1.0;
  bool threw = false;
  try {
    solve_modular_family(broken.A, broken.H, broken.haar);
  } catch (const error& e) {
    threw = true;
    CHECK(e.code() == errc::no_positive_solution);
  }
  CHECK(threw);
}

TEST_CASE("modular family requires a unit") {
  auto qg = corpus_entry<cd>("c_z2");
  StarAlgebra<cd> A = qg.A;
  A.unit.reset();
  CHECK_THROWS_AS(solve_modular_family(A, qg.H, qg.haar), error);
}
