#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aqg/matrix.hpp"
#include "aqg/rng.hpp"

namespace aqg {

/// Finite-dimensional *-algebra given by structure data:
///   mult[i][j][k] = coefficient of b_k in b_i b_j
///   star row i    = coordinates of b_i^*
/// The optional unit is a coordinate vector.
template <class K>
struct StarAlgebra {
  int dim = 0;
  std::vector<std::string> labels;
  std::vector<K> mult;  // flattened (i*dim + j)*dim + k
  Mat<K> star;
  std::optional<Vec<K>> unit;

  const K& m(int i, int j, int k) const { return mult[(size_t(i) * dim + j) * dim + k]; }
  K& m(int i, int j, int k) { return mult[(size_t(i) * dim + j) * dim + k]; }

  bool is_unital() const { return unit.has_value(); }

  Vec<K> basis_vector(int i) const {
    Vec<K> v(dim, scalar_traits<K>::zero());
    v[i] = scalar_traits<K>::one();
    return v;
  }

  Vec<K> zero() const { return Vec<K>(dim, scalar_traits<K>::zero()); }

  Vec<K> multiply(const Vec<K>& x, const Vec<K>& y) const {
    if (int(x.size()) != dim || int(y.size()) != dim)
      throw error(errc::dimension_mismatch, "multiply");
    Vec<K> z(dim, scalar_traits<K>::zero());
    for (int i = 0; i < dim; ++i) {
      if (scalar_traits<K>::is_zero(x[i])) continue;
      for (int j = 0; j < dim; ++j) {
        if (scalar_traits<K>::is_zero(y[j])) continue;
        K f = x[i] * y[j];
        for (int k = 0; k < dim; ++k) {
          const K& c = m(i, j, k);
          if (!scalar_traits<K>::is_zero(c)) z[k] += f * c;
        }
      }
    }
    return z;
  }

  Vec<K> star_of(const Vec<K>& x) const {
    if (int(x.size()) != dim) throw error(errc::dimension_mismatch, "star");
    Vec<K> y(dim, scalar_traits<K>::zero());
    for (int i = 0; i < dim; ++i) {
      K c = scalar_traits<K>::conj(x[i]);
      if (scalar_traits<K>::is_zero(c)) continue;
      for (int k = 0; k < dim; ++k) y[k] += c * star(i, k);
    }
    return y;
  }

  /// L_x as a matrix on coordinates: (L_x y) = x y
  Mat<K> left_mult(const Vec<K>& x) const {
    Mat<K> L(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (scalar_traits<K>::is_zero(x[i])) continue;
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          if (!scalar_traits<K>::is_zero(m(i, j, k))) L(k, j) += x[i] * m(i, j, k);
    }
    return L;
  }

  Mat<K> right_mult(const Vec<K>& x) const {
    Mat<K> R(dim, dim);
    for (int j = 0; j < dim; ++j) {
      if (scalar_traits<K>::is_zero(x[j])) continue;
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k)
          if (!scalar_traits<K>::is_zero(m(i, j, k))) R(k, i) += x[j] * m(i, j, k);
    }
    return R;
  }
};

template <class K>
struct Element {
  Vec<K> coeffs;
};

/// Functional stored by its values on the basis: omega(b_i) = coeffs[i].
template <class K>
struct Functional {
  Vec<K> coeffs;

  K operator()(const Vec<K>& x) const {
    if (x.size() != coeffs.size()) throw error(errc::dimension_mismatch, "functional");
    K s = scalar_traits<K>::zero();
    for (size_t i = 0; i < x.size(); ++i) s += coeffs[i] * x[i];
    return s;
  }
};

// --- structural residuals ----------------------------------------------------

template <class K>
double associativity_residual(const StarAlgebra<K>& A) {
  double worst = 0;
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) {
      Vec<K> ij = A.multiply(A.basis_vector(i), A.basis_vector(j));
      for (int k = 0; k < A.dim; ++k) {
        Vec<K> l = A.multiply(ij, A.basis_vector(k));
        Vec<K> r = A.multiply(A.basis_vector(i),
                              A.multiply(A.basis_vector(j), A.basis_vector(k)));
        for (int t = 0; t < A.dim; ++t)
          worst = std::max(worst, std::abs(scalar_traits<K>::to_cd(l[t] - r[t])));
      }
    }
  return worst;
}

template <class K>
double involution_residual(const StarAlgebra<K>& A) {
  double worst = 0;
  for (int i = 0; i < A.dim; ++i) {
    Vec<K> ss = A.star_of(A.star_of(A.basis_vector(i)));
    ss[i] -= scalar_traits<K>::one();
    worst = std::max(worst, max_abs(ss));
  }
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) {
      Vec<K> l = A.star_of(A.multiply(A.basis_vector(i), A.basis_vector(j)));
      Vec<K> r = A.multiply(A.star_of(A.basis_vector(j)), A.star_of(A.basis_vector(i)));
      for (int t = 0; t < A.dim; ++t)
        worst = std::max(worst, std::abs(scalar_traits<K>::to_cd(l[t] - r[t])));
    }
  return worst;
}

/// Non-degeneracy: the stacked left (resp. right) multiplication operators
/// have trivial kernel.
template <class K>
bool is_nondegenerate(const StarAlgebra<K>& A) {
  Mat<K> L(A.dim * A.dim, A.dim), R(A.dim * A.dim, A.dim);
  for (int b = 0; b < A.dim; ++b) {
    // x -> x b_b and x -> b_b x, rows stacked per b
    for (int i = 0; i < A.dim; ++i)
      for (int k = 0; k < A.dim; ++k) {
        L(b * A.dim + k, i) = A.m(i, b, k);
        R(b * A.dim + k, i) = A.m(b, i, k);
      }
  }
  return kernel(L).cols == 0 && kernel(R).cols == 0;
}

template <class K>
bool unit_residual_ok(const StarAlgebra<K>& A, double tol = global_tol().identity) {
  if (!A.unit) return true;
  for (int i = 0; i < A.dim; ++i) {
    Vec<K> l = A.multiply(*A.unit, A.basis_vector(i));
    Vec<K> r = A.multiply(A.basis_vector(i), *A.unit);
    l[i] -= scalar_traits<K>::one();
    r[i] -= scalar_traits<K>::one();
    if (max_abs(l) > tol || max_abs(r) > tol) return false;
  }
  return true;
}

// --- tensor product ----------------------------------------------------------

/// A (x) B with basis index i*dimB + j.
template <class K>
StarAlgebra<K> tensor_algebra(const StarAlgebra<K>& A, const StarAlgebra<K>& B) {
  StarAlgebra<K> T;
  T.dim = A.dim * B.dim;
  T.labels.reserve(T.dim);
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < B.dim; ++j) T.labels.push_back(A.labels[i] + "(x)" + B.labels[j]);
  T.mult.assign(size_t(T.dim) * T.dim * T.dim, scalar_traits<K>::zero());
  for (int i1 = 0; i1 < A.dim; ++i1)
    for (int j1 = 0; j1 < A.dim; ++j1)
      for (int k1 = 0; k1 < A.dim; ++k1) {
        if (scalar_traits<K>::is_zero(A.m(i1, j1, k1))) continue;
        for (int i2 = 0; i2 < B.dim; ++i2)
          for (int j2 = 0; j2 < B.dim; ++j2)
            for (int k2 = 0; k2 < B.dim; ++k2) {
              if (scalar_traits<K>::is_zero(B.m(i2, j2, k2))) continue;
              T.m(i1 * B.dim + i2, j1 * B.dim + j2, k1 * B.dim + k2) =
                  A.m(i1, j1, k1) * B.m(i2, j2, k2);
            }
      }
  T.star = kron(A.star, B.star);
  if (A.unit && B.unit) {
    Vec<K> u(T.dim, scalar_traits<K>::zero());
    for (int i = 0; i < A.dim; ++i)
      for (int j = 0; j < B.dim; ++j) u[i * B.dim + j] = (*A.unit)[i] * (*B.unit)[j];
    T.unit = u;
  }
  return T;
}

// --- slice maps and functional translates -------------------------------------

enum class slice_side { left, right };

/// (omega (x) id)(X) or (id (x) omega)(X) for X in A (x) B, in coordinates.
template <class K>
Vec<K> slice(slice_side side, const Functional<K>& omega, const Vec<K>& X,
             int dimA, int dimB) {
  if (int(X.size()) != dimA * dimB) throw error(errc::factor_mismatch, "slice: bad tensor");
  if (side == slice_side::left) {
    if (int(omega.coeffs.size()) != dimA)
      throw error(errc::factor_mismatch, "slice: functional lives on the other factor");
    Vec<K> out(dimB, scalar_traits<K>::zero());
    for (int i = 0; i < dimA; ++i)
      for (int j = 0; j < dimB; ++j) out[j] += omega.coeffs[i] * X[i * dimB + j];
    return out;
  }
  if (int(omega.coeffs.size()) != dimB)
    throw error(errc::factor_mismatch, "slice: functional lives on the other factor");
  Vec<K> out(dimA, scalar_traits<K>::zero());
  for (int i = 0; i < dimA; ++i)
    for (int j = 0; j < dimB; ++j) out[i] += omega.coeffs[j] * X[i * dimB + j];
  return out;
}

/// Translates (x omega)(a) = omega(a x) and (omega x)(a) = omega(x a).
template <class K>
Functional<K> translate_right(const StarAlgebra<K>& A, const Vec<K>& x,
                              const Functional<K>& omega) {
  // (x omega)(b_i) = omega(b_i x)
  Functional<K> out;
  out.coeffs.assign(A.dim, scalar_traits<K>::zero());
  for (int i = 0; i < A.dim; ++i) out.coeffs[i] = omega(A.multiply(A.basis_vector(i), x));
  return out;
}

template <class K>
Functional<K> translate_left(const StarAlgebra<K>& A, const Vec<K>& x,
                             const Functional<K>& omega) {
  // (omega x)(b_i) = omega(x b_i)
  Functional<K> out;
  out.coeffs.assign(A.dim, scalar_traits<K>::zero());
  for (int i = 0; i < A.dim; ++i) out.coeffs[i] = omega(A.multiply(x, A.basis_vector(i)));
  return out;
}

// --- positivity --------------------------------------------------------------

template <class K>
Mat<cd> to_cd_mat(const Mat<K>& A) {
  Mat<cd> B(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) B(i, j) = scalar_traits<K>::to_cd(A(i, j));
  return B;
}

template <class K>
Vec<cd> to_cd_vec(const Vec<K>& v) {
  Vec<cd> w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = scalar_traits<K>::to_cd(v[i]);
  return w;
}

/// Gram matrix G(i,j) = omega(b_i^* b_j).
template <class K>
Mat<K> functional_gram(const StarAlgebra<K>& A, const Functional<K>& omega) {
  Mat<K> G(A.dim, A.dim);
  for (int i = 0; i < A.dim; ++i) {
    Vec<K> bi_star = A.star_of(A.basis_vector(i));
    for (int j = 0; j < A.dim; ++j) G(i, j) = omega(A.multiply(bi_star, A.basis_vector(j)));
  }
  return G;
}

struct FunctionalPredicates {
  bool positive = false;
  bool faithful = false;
};

template <class K>
FunctionalPredicates functional_predicates(const StarAlgebra<K>& A,
                                           const Functional<K>& omega) {
  Mat<K> G = functional_gram(A, omega);
  FunctionalPredicates p;
  p.positive = is_psd(G);
  if (!p.positive) return p;
  if constexpr (scalar_traits<K>::exact) {
    p.faithful = linear_solve(G, Mat<K>(A.dim, 0)).rank == A.dim;
  } else {
    auto ev = hermitian_eigenvalues(to_cd_mat(G));
    p.faithful = !ev.empty() && ev.front() > global_tol().predicate;
  }
  return p;
}

template <class K>
Vec<K> random_element(const StarAlgebra<K>& A, rng& r);

template <>
inline Vec<cd> random_element<cd>(const StarAlgebra<cd>& A, rng& r) {
  Vec<cd> v(A.dim);
  for (auto& x : v) x = r.complex_gaussian();
  return v;
}

}  // namespace aqg
