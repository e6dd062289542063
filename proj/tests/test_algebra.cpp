#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aqg/algebra.hpp"
#include "aqg/corpus.hpp"
#include "aqg/multiplier.hpp"
#include "aqg/rng.hpp"

using namespace aqg;

namespace {

template <class K>
StarAlgebra<K> c_z2() {
  return group_algebra<K>(cyclic_group(2)).first;
}

}  // namespace

TEST_CASE("group law multiplication in C(Z2): g*g = 1") {
  auto A = c_z2<rc>();
  Vec<rc> g = A.basis_vector(1);
  Vec<rc> gg = A.multiply(g, g);
  CHECK(gg[0] == rc{1});
  CHECK(gg[1] == rc{0});

  // bilinearity: x*0 = 0
  Vec<rc> z = A.multiply(g, A.zero());
  CHECK(max_abs(z) == 0.0);
}

TEST_CASE("K(Z2) is the pointwise product of indicators") {
  auto A = function_algebra<rc>(cyclic_group(2)).first;
  CHECK(A.multiply(A.basis_vector(0), A.basis_vector(1)) == A.zero());
  CHECK(A.multiply(A.basis_vector(1), A.basis_vector(1)) == A.basis_vector(1));
}

TEST_CASE("shipped algebras satisfy the structural invariants") {
  for (auto& name : corpus_group_names()) {
    FiniteGroup G = group_by_name(name);
    auto A = group_algebra<rc>(G).first;
    auto B = function_algebra<rc>(G).first;
    for (auto* X : {&A, &B}) {
      CHECK(associativity_residual(*X) == 0.0);
      CHECK(involution_residual(*X) == 0.0);
      CHECK(is_nondegenerate(*X));
      CHECK(unit_residual_ok(*X));
    }
  }
}

TEST_CASE("tensor product of non-degenerate algebras is non-degenerate") {
  auto A = c_z2<cd>();
  auto B = function_algebra<cd>(symmetric_group_3()).first;
  auto T = tensor_algebra(A, B);
  CHECK(associativity_residual(T) < 1e-12);
  CHECK(involution_residual(T) < 1e-12);
  CHECK(is_nondegenerate(T));
}

TEST_CASE("slice maps: defining case and counit identity") {
  auto G = cyclic_group(2);
  auto [A, H] = group_algebra<cd>(G);
  auto T = tensor_algebra(A, A);

  // (omega x id)(a x b) = omega(a) b on basis tensors
  rng r(3);
  Functional<cd> omega;
  omega.coeffs = {r.complex_gaussian(), r.complex_gaussian()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Vec<cd> X(4, cd{0, 0});
      X[i * 2 + j] = 1.0;
      Vec<cd> s = slice(slice_side::left, omega, X, 2, 2);
      for (int t = 0; t < 2; ++t)
        CHECK(std::abs(s[t] - omega.coeffs[i] * (j == t ? 1.0 : 0.0)) < 1e-14);
    }

  // (eps x id) Delta(g) = g
  Vec<cd> dg = delta_of(H, A.basis_vector(1));
  Vec<cd> back = slice(slice_side::left, H.epsilon, dg, 2, 2);
  CHECK(std::abs(back[1] - 1.0) < 1e-14);
  CHECK(std::abs(back[0]) < 1e-14);

  // factor mismatch is rejected
  Functional<cd> wrong;
  wrong.coeffs.assign(3, cd{1, 0});
  CHECK_THROWS_AS(slice(slice_side::left, wrong, dg, 2, 2), error);
}

TEST_CASE("double-slice identity on random tensors") {
  auto A = group_algebra<cd>(symmetric_group_3()).first;
  auto B = function_algebra<cd>(cyclic_group(3)).first;
  rng r(11);
  for (int trial = 0; trial < 100; ++trial) {
    Vec<cd> X(size_t(A.dim) * B.dim);
    for (auto& x : X) x = r.complex_gaussian();
    Functional<cd> om, tau;
    om.coeffs.resize(A.dim);
    tau.coeffs.resize(B.dim);
    for (auto& c : om.coeffs) c = r.complex_gaussian();
    for (auto& c : tau.coeffs) c = r.complex_gaussian();

    // the three contractions computed independently
    cd direct{0, 0};
    for (int i = 0; i < A.dim; ++i)
      for (int j = 0; j < B.dim; ++j) direct += om.coeffs[i] * tau.coeffs[j] * X[i * B.dim + j];
    cd via_left = om(slice(slice_side::right, tau, X, A.dim, B.dim));
    cd via_right = tau(slice(slice_side::left, om, X, A.dim, B.dim));
    CHECK(std::abs(direct - via_left) < 1e-12);
    CHECK(std::abs(direct - via_right) < 1e-12);
  }
}

TEST_CASE("functional translates") {
  auto G = cyclic_group(2);
  auto [A, H] = group_algebra<cd>(G);
  HaarData<cd> haar = solve_haar(A, H);

  // 1 omega = omega
  Functional<cd> om;
  om.coeffs = {cd{0.3, 0.1}, cd{-1.0, 2.0}};
  auto t = translate_right(A, *A.unit, om);
  CHECK(max_abs(Vec<cd>{t.coeffs[0] - om.coeffs[0], t.coeffs[1] - om.coeffs[1]}) < 1e-14);

  // (g phi)(g) = phi(g g) = phi(1) = 1
  auto gphi = translate_right(A, A.basis_vector(1), haar.phi);
  CHECK(std::abs(gphi.coeffs[1] - 1.0) < 1e-14);
  CHECK(std::abs(gphi.coeffs[0]) < 1e-14);

  // (x omega) applied two ways on random data
  rng r(5);
  auto B = group_algebra<cd>(symmetric_group_3()).first;
  for (int trial = 0; trial < 20; ++trial) {
    Vec<cd> x = random_element(B, r), y = random_element(B, r);
    Functional<cd> w;
    w.coeffs.resize(B.dim);
    for (auto& c : w.coeffs) c = r.complex_gaussian();
    cd lhs = translate_right(B, x, w)(y);
    cd rhs = w(B.multiply(y, x));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("positivity and faithfulness predicates") {
  auto G = cyclic_group(2);
  auto [A, H] = group_algebra<cd>(G);
  auto haar = solve_haar(A, H);

  auto p = functional_predicates(A, haar.phi);
  CHECK(p.positive);
  CHECK(p.faithful);
  // Gram of phi is the identity
  auto Gm = functional_gram(A, haar.phi);
  CHECK(diff_norm(Gm, Mat<cd>::identity(2)) < 1e-14);

  auto pe = functional_predicates(A, H.epsilon);
  CHECK(pe.positive);
  CHECK(!pe.faithful);
  // eps(x^* y) = 1 for group elements: the Gram is the rank-one all-ones matrix
  auto Ge = functional_gram(A, H.epsilon);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(Ge(i, j) - cd{1, 0}) < 1e-14);

  Functional<cd> zero;
  zero.coeffs.assign(2, cd{0, 0});
  auto pz = functional_predicates(A, zero);
  CHECK(pz.positive);
  CHECK(!pz.faithful);
}

TEST_CASE("exact-mode predicates on C(Z2)") {
  auto [A, H] = group_algebra<rc>(cyclic_group(2));
  auto haar = solve_haar(A, H);
  auto p = functional_predicates(A, haar.phi);
  CHECK(p.positive);
  CHECK(p.faithful);
  CHECK(haar.phi.coeffs[0] == rc{1});
  CHECK(haar.phi.coeffs[1] == rc{0});
}

TEST_CASE("slice bimodule identity when a unit exists") {
  auto A = group_algebra<cd>(cyclic_group(3)).first;
  auto B = function_algebra<cd>(cyclic_group(2)).first;
  auto T = tensor_algebra(A, B);
  rng r(41);
  Functional<cd> om;
  om.coeffs.resize(A.dim);
  for (auto& c : om.coeffs) c = r.complex_gaussian();
  for (int trial = 0; trial < 20; ++trial) {
    Vec<cd> X(size_t(A.dim) * B.dim);
    for (auto& x : X) x = r.complex_gaussian();
    Vec<cd> b = random_element(B, r);
    // b (om x id)(X) = (om x id)((1 x b) X)
    Vec<cd> lhs = B.multiply(b, slice(slice_side::left, om, X, A.dim, B.dim));
    Vec<cd> one_b(size_t(A.dim) * B.dim, cd{0, 0});
    for (int i = 0; i < A.dim; ++i)
      for (int j = 0; j < B.dim; ++j) one_b[size_t(i) * B.dim + j] = (*A.unit)[i] * b[j];
    Vec<cd> prod = T.multiply(one_b, X);
    Vec<cd> rhs = slice(slice_side::left, om, prod, A.dim, B.dim);
    for (int t = 0; t < B.dim; ++t) CHECK(std::abs(lhs[t] - rhs[t]) < 1e-10);
  }
}

TEST_CASE("unital algebras: every multiplier is left multiplication by an element") {
  // pairs (x, y) in End(A)^2 with x(a)^* b = a^* y(b) for all a, b form a
  // space of dimension dim A, and each x is L_{x(1)}
  for (auto& name : {"c_z3", "k_s3"}) {
    CAPTURE(name);
    auto A = corpus_entry<cd>(name).A;
    const int n = A.dim;
    // unknowns: X(n x n) then Y(n x n), column-major over basis action
    Mat<cd> M(n * n * n, 2 * n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int t = 0; t < n; ++t) {
          int row = (i * n + j) * n + t;
          // (X b_i)^* b_j: conj enters through the star tensor; build by columns
          for (int k = 0; k < n; ++k) {
            // d/dX(k,i): coefficient of b_t in (b_k)^* b_j, conjugate-linear in X
            Vec<cd> bks = A.star_of(A.basis_vector(k));
            cd c = A.multiply(bks, A.basis_vector(j))[t];
            M(row, k * n + i) += std::conj(c);  // unknown conj(X(k,i)) folded below
            // d/dY(k,j): coefficient of b_t in b_i^* b_k
            Vec<cd> bis = A.star_of(A.basis_vector(i));
            cd c2 = A.multiply(bis, A.basis_vector(k))[t];
            M(row, n * n + k * n + j) -= c2;
          }
        }
    // the relation is linear in (conj X, Y); kernel dimension equals dim A
    Mat<cd> ker = kernel(M);
    CHECK(ker.cols == n);
    for (int v = 0; v < ker.cols; ++v) {
      Mat<cd> Xc(n, n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) Xc(k, i) = std::conj(ker(k * n + i, v));
      Vec<cd> x1 = matvec(Xc, *A.unit);
      CHECK(diff_norm(Xc, A.left_mult(x1)) < 1e-9);
    }
  }
}

TEST_CASE("multiplier model of K(T) inside F(T)") {
  // constant 1 acts as the unit
  FiniteSupportFn k;
  k.set("a", {1, 2}).set("b", {-3, 0});
  auto one = IndexFn::constant({1, 0});
  CHECK(multiplier_action(one, k).dist(k) == 0.0);

  // indicator of a point picks out the value
  auto ind = IndexFn::indicator("a");
  auto picked = multiplier_action(ind, k);
  CHECK(picked.dist(FiniteSupportFn::point("a", {1, 2})) == 0.0);

  // left multiplication by an element of K(T) is a multiplier; its adjoint
  // partner is multiplication by the conjugate
  FiniteSupportFn b;
  rng r(17);
  for (auto* t : {"p", "q", "r", "s"}) b.set(t, r.complex_gaussian());
  EndoK x = [b](const FiniteSupportFn& f) { return b * f; };
  EndoK y = [b](const FiniteSupportFn& f) { return b.star() * f; };
  std::vector<FiniteSupportFn> samples;
  for (int i = 0; i < 50; ++i) {
    FiniteSupportFn s;
    for (auto* t : {"p", "q", "r", "s"})
      if (r.uniform() < 0.7) s.set(t, r.complex_gaussian());
    samples.push_back(s);
  }
  auto chk = verify_multiplier(x, y, samples);
  CHECK(chk.relation_residual < 1e-12);
  CHECK(chk.uniqueness_residual < 1e-12);

  // a mismatched partner is caught
  EndoK bad = [b](const FiniteSupportFn& f) {
    FiniteSupportFn g = b * f;
    if (!g.values.empty()) g.values.begin()->second += cd{0.5, 0};
    return g;
  };
  auto chk2 = verify_multiplier(x, bad, samples);
  CHECK(chk2.relation_residual > 1e-3);

  // unbounded oracle rejected at construction
  CHECK_THROWS_AS(IndexFn([](const std::string&) { return cd{0, 0}; },
                          std::numeric_limits<double>::infinity()),
                  error);
}
