#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "aqg/matrix.hpp"
#include "aqg/rng.hpp"
#include "aqg/scalar.hpp"

using namespace aqg;

TEST_CASE("rational arithmetic reduces and stays exact") {
  rational a(1, 3), b(1, 6);
  CHECK(a + b == rational(1, 2));
  CHECK(a - b == rational(1, 6));
  CHECK(a * b == rational(1, 18));
  CHECK(a / b == rational(2));
  CHECK((rational(-4, -8)) == rational(1, 2));
  CHECK(rational(2, -4) == rational(-1, 2));
  CHECK(rational(9, 4).sqrt().value() == rational(3, 2));
  CHECK(!rational(2).sqrt().has_value());
  CHECK(!rational(-1).sqrt().has_value());
}

TEST_CASE("rational overflow throws instead of wrapping") {
  rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, error);
}

TEST_CASE("rc field operations") {
  rc i{rational(0), rational(1)};
  CHECK(i * i == rc{rational(-1)});
  rc z{rational(3, 2), rational(-1, 2)};
  rc w = z / z;
  CHECK(w == rc{rational(1)});
  CHECK(conj(i) * i == rc{rational(1)});
}

TEST_CASE("exact elimination solves and detects inconsistency") {
  Mat<rc> A(3, 2), B(3, 1);
  A(0, 0) = rc{1}; A(0, 1) = rc{2};
  A(1, 0) = rc{3}; A(1, 1) = rc{4};
  A(2, 0) = rc{4}; A(2, 1) = rc{6};  // row0 + row1
  B(0, 0) = rc{1}; B(1, 0) = rc{1}; B(2, 0) = rc{2};
  auto r = linear_solve(A, B);
  CHECK(r.consistent);
  CHECK(r.unique);
  CHECK(r.solution(0, 0) == rc{rational(-1)});
  CHECK(r.solution(1, 0) == rc{rational(1)});

  B(2, 0) = rc{5};
  auto r2 = linear_solve(A, B);
  CHECK(!r2.consistent);
}

TEST_CASE("kernel extraction over both scalar modes") {
  Mat<rc> A(1, 3);
  A(0, 0) = rc{1}; A(0, 1) = rc{1}; A(0, 2) = rc{1};
  Mat<rc> ker = kernel(A);
  CHECK(ker.cols == 2);

  Mat<cd> Af(1, 3);
  Af(0, 0) = 1.0; Af(0, 1) = 1.0; Af(0, 2) = 1.0;
  CHECK(kernel(Af).cols == 2);
}

TEST_CASE("cholesky in exact mode needs exact pivots") {
  Mat<rc> G = Mat<rc>::identity(3);
  G(1, 1) = rc{rational(9, 4)};
  Mat<rc> R = cholesky_upper(G);
  CHECK(R(1, 1) == rc{rational(3, 2)});
  Mat<rc> G2 = Mat<rc>::identity(2);
  G2(0, 0) = rc{2};
  CHECK_THROWS_AS(cholesky_upper(G2), error);
}

TEST_CASE("exact psd test by hermitian pivots") {
  Mat<rc> G(2, 2);
  G(0, 0) = rc{1}; G(1, 1) = rc{1};
  G(0, 1) = rc{1}; G(1, 0) = rc{1};  // rank-1 PSD
  CHECK(is_psd(G));
  G(0, 1) = rc{2}; G(1, 0) = rc{2};  // indefinite
  CHECK(!is_psd(G));
  Mat<rc> Z(2, 2);                   // zero matrix is PSD
  CHECK(is_psd(Z));
}

TEST_CASE("rng is deterministic and roughly gaussian") {
  rng r1(42), r2(42);
  for (int i = 0; i < 10; ++i) CHECK(r1.next_u64() == r2.next_u64());
  rng g(7);
  double mean = 0;
  const int N = 20000;
  for (int i = 0; i < N; ++i) mean += g.gaussian();
  mean /= N;
  CHECK(std::abs(mean) < 0.05);
}
