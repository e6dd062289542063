#pragma once

#include <optional>

#include "aqg/algebra.hpp"

namespace aqg {

/// Comultiplication data attached to a StarAlgebra.
///   delta row i        = coordinates of Delta(b_i) in the tensor basis p*n+q
///   epsilon            = counit values on the basis
///   antipode (op form) = column j holds the coordinates of S(b_j)
template <class K>
struct Hopf {
  Mat<K> delta;
  Functional<K> epsilon;
  Mat<K> antipode;
};

template <class K>
Vec<K> delta_of(const Hopf<K>& H, const Vec<K>& x) {
  int n = int(x.size());
  Vec<K> out(size_t(n) * n, scalar_traits<K>::zero());
  for (int i = 0; i < n; ++i) {
    if (scalar_traits<K>::is_zero(x[i])) continue;
    for (int t = 0; t < n * n; ++t) out[t] += x[i] * H.delta(i, t);
  }
  return out;
}

/// Product of two coordinate tensors in A (x) A.
template <class K>
Vec<K> tensor_multiply(const StarAlgebra<K>& A, const Vec<K>& X, const Vec<K>& Y) {
  int n = A.dim;
  Vec<K> Z(size_t(n) * n, scalar_traits<K>::zero());
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const K& x = X[size_t(i1) * n + i2];
      if (scalar_traits<K>::is_zero(x)) continue;
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
          const K& y = Y[size_t(j1) * n + j2];
          if (scalar_traits<K>::is_zero(y)) continue;
          K f = x * y;
          for (int k1 = 0; k1 < n; ++k1) {
            if (scalar_traits<K>::is_zero(A.m(i1, j1, k1))) continue;
            K g = f * A.m(i1, j1, k1);
            for (int k2 = 0; k2 < n; ++k2)
              if (!scalar_traits<K>::is_zero(A.m(i2, j2, k2)))
                Z[size_t(k1) * n + k2] += g * A.m(i2, j2, k2);
          }
        }
    }
  return Z;
}

template <class K>
Vec<K> tensor_star(const StarAlgebra<K>& A, const Vec<K>& X) {
  int n = A.dim;
  Vec<K> Z(size_t(n) * n, scalar_traits<K>::zero());
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      K c = scalar_traits<K>::conj(X[size_t(i1) * n + i2]);
      if (scalar_traits<K>::is_zero(c)) continue;
      for (int k1 = 0; k1 < n; ++k1) {
        if (scalar_traits<K>::is_zero(A.star(i1, k1))) continue;
        K f = c * A.star(i1, k1);
        for (int k2 = 0; k2 < n; ++k2)
          if (!scalar_traits<K>::is_zero(A.star(i2, k2)))
            Z[size_t(k1) * n + k2] += f * A.star(i2, k2);
      }
    }
  return Z;
}

/// Delta(b_i)(1 (x) b_j) without needing a unit.
template <class K>
Vec<K> delta_mult_right(const StarAlgebra<K>& A, const Hopf<K>& H, int i, int j) {
  int n = A.dim;
  Vec<K> Z(size_t(n) * n, scalar_traits<K>::zero());
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const K& d = H.delta(i, p * n + q);
      if (scalar_traits<K>::is_zero(d)) continue;
      for (int r = 0; r < n; ++r)
        if (!scalar_traits<K>::is_zero(A.m(q, j, r))) Z[size_t(p) * n + r] += d * A.m(q, j, r);
    }
  return Z;
}

/// (b_j (x) 1) Delta(b_i)
template <class K>
Vec<K> delta_mult_left(const StarAlgebra<K>& A, const Hopf<K>& H, int i, int j) {
  int n = A.dim;
  Vec<K> Z(size_t(n) * n, scalar_traits<K>::zero());
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const K& d = H.delta(i, p * n + q);
      if (scalar_traits<K>::is_zero(d)) continue;
      for (int u = 0; u < n; ++u)
        if (!scalar_traits<K>::is_zero(A.m(j, p, u))) Z[size_t(u) * n + q] += d * A.m(j, p, u);
    }
  return Z;
}

enum class galois_map { delta_right, delta_left, left_delta, right_delta };

/// The four Galois-type maps on A (x) A; column (i*n + j) is the image of
/// b_i (x) b_j.
template <class K>
Mat<K> galois_matrix(const StarAlgebra<K>& A, const Hopf<K>& H, galois_map which) {
  int n = A.dim;
  Mat<K> T(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec<K> col;
      switch (which) {
        case galois_map::delta_right: {  // Delta(a)(b (x) 1)
          col.assign(size_t(n) * n, scalar_traits<K>::zero());
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              const K& d = H.delta(i, p * n + q);
              if (scalar_traits<K>::is_zero(d)) continue;
              for (int r = 0; r < n; ++r)
                if (!scalar_traits<K>::is_zero(A.m(p, j, r)))
                  col[size_t(r) * n + q] += d * A.m(p, j, r);
            }
          break;
        }
        case galois_map::delta_left:
          col = delta_mult_right(A, H, i, j);
          break;
        case galois_map::left_delta:
          col = delta_mult_left(A, H, i, j);
          break;
        case galois_map::right_delta: {  // (1 (x) b) Delta(a)
          col.assign(size_t(n) * n, scalar_traits<K>::zero());
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              const K& d = H.delta(i, p * n + q);
              if (scalar_traits<K>::is_zero(d)) continue;
              for (int r = 0; r < n; ++r)
                if (!scalar_traits<K>::is_zero(A.m(j, q, r)))
                  col[size_t(p) * n + r] += d * A.m(j, q, r);
            }
          break;
        }
      }
      for (int t = 0; t < n * n; ++t) T(t, i * n + j) = col[t];
    }
  return T;
}

struct AxiomReport {
  double coassociativity = 0;
  double delta_multiplicative = 0;
  double delta_star = 0;
  double counit_left = 0, counit_right = 0;
  double counit_multiplicative = 0, counit_star = 0;
  double antipode_left = 0, antipode_right = 0;
  double antipode_antimultiplicative = 0;
  double antipode_star_square = 0;  // S(S(a^*)^*) = a
  double galois_cond[4] = {0, 0, 0, 0};
  bool galois_invertible[4] = {false, false, false, false};

  double worst_identity() const {
    double w = coassociativity;
    for (double v : {delta_multiplicative, delta_star, counit_left, counit_right,
                     counit_multiplicative, counit_star, antipode_left, antipode_right,
                     antipode_antimultiplicative, antipode_star_square})
      w = std::max(w, v);
    return w;
  }
  bool pass(double tol = global_tol().identity) const {
    return worst_identity() <= tol && galois_invertible[0] && galois_invertible[1] &&
           galois_invertible[2] && galois_invertible[3];
  }
};

template <class K>
AxiomReport verify_hopf(const StarAlgebra<K>& A, const Hopf<K>& H) {
  const int n = A.dim;
  AxiomReport rep;

  // coassociativity, per basis element
  for (int i = 0; i < n; ++i) {
    Vec<K> L(size_t(n) * n * n, scalar_traits<K>::zero());
    Vec<K> R(size_t(n) * n * n, scalar_traits<K>::zero());
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const K& d = H.delta(i, p * n + q);
        if (scalar_traits<K>::is_zero(d)) continue;
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            if (!scalar_traits<K>::is_zero(H.delta(p, u * n + v)))
              L[(size_t(u) * n + v) * n + q] += d * H.delta(p, u * n + v);
            if (!scalar_traits<K>::is_zero(H.delta(q, u * n + v)))
              R[(size_t(p) * n + u) * n + v] += d * H.delta(q, u * n + v);
          }
      }
    for (size_t t = 0; t < L.size(); ++t)
      rep.coassociativity =
          std::max(rep.coassociativity, std::abs(scalar_traits<K>::to_cd(L[t] - R[t])));
  }

  // Delta is a *-homomorphism
  for (int i = 0; i < n; ++i) {
    Vec<K> lhs = delta_of(H, A.star_of(A.basis_vector(i)));
    Vec<K> row(size_t(n) * n);
    for (int t = 0; t < n * n; ++t) row[t] = H.delta(i, t);
    Vec<K> rhs = tensor_star(A, row);
    for (size_t t = 0; t < lhs.size(); ++t)
      rep.delta_star = std::max(rep.delta_star, std::abs(scalar_traits<K>::to_cd(lhs[t] - rhs[t])));
    for (int j = 0; j < n; ++j) {
      Vec<K> prod = delta_of(H, A.multiply(A.basis_vector(i), A.basis_vector(j)));
      Vec<K> rowj(size_t(n) * n);
      for (int t = 0; t < n * n; ++t) rowj[t] = H.delta(j, t);
      Vec<K> dd = tensor_multiply(A, row, rowj);
      for (size_t t = 0; t < prod.size(); ++t)
        rep.delta_multiplicative = std::max(
            rep.delta_multiplicative, std::abs(scalar_traits<K>::to_cd(prod[t] - dd[t])));
    }
  }

  // counit identities
  for (int i = 0; i < n; ++i) {
    Vec<K> l(n, scalar_traits<K>::zero()), r(n, scalar_traits<K>::zero());
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const K& d = H.delta(i, p * n + q);
        if (scalar_traits<K>::is_zero(d)) continue;
        l[q] += H.epsilon.coeffs[p] * d;
        r[p] += H.epsilon.coeffs[q] * d;
      }
    l[i] -= scalar_traits<K>::one();
    r[i] -= scalar_traits<K>::one();
    rep.counit_left = std::max(rep.counit_left, max_abs(l));
    rep.counit_right = std::max(rep.counit_right, max_abs(r));
    Vec<K> si = A.star_of(A.basis_vector(i));
    K cs = H.epsilon(si) - scalar_traits<K>::conj(H.epsilon.coeffs[i]);
    rep.counit_star = std::max(rep.counit_star, std::abs(scalar_traits<K>::to_cd(cs)));
    for (int j = 0; j < n; ++j) {
      K cm = H.epsilon(A.multiply(A.basis_vector(i), A.basis_vector(j))) -
             H.epsilon.coeffs[i] * H.epsilon.coeffs[j];
      rep.counit_multiplicative =
          std::max(rep.counit_multiplicative, std::abs(scalar_traits<K>::to_cd(cm)));
    }
  }

  // antipode identities m(S x id)(Delta(a)(1 x b)) = eps(a) b,
  //                     m(id x S)((b x 1)Delta(a)) = eps(a) b
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec<K> X = delta_mult_right(A, H, i, j);
      Vec<K> out(n, scalar_traits<K>::zero());
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r) {
          const K& x = X[size_t(p) * n + r];
          if (scalar_traits<K>::is_zero(x)) continue;
          for (int k = 0; k < n; ++k) {
            if (scalar_traits<K>::is_zero(H.antipode(k, p))) continue;
            K f = x * H.antipode(k, p);
            for (int l = 0; l < n; ++l)
              if (!scalar_traits<K>::is_zero(A.m(k, r, l))) out[l] += f * A.m(k, r, l);
          }
        }
      out[j] -= H.epsilon.coeffs[i];
      rep.antipode_left = std::max(rep.antipode_left, max_abs(out));

      Vec<K> Y = delta_mult_left(A, H, i, j);
      Vec<K> out2(n, scalar_traits<K>::zero());
      for (int u = 0; u < n; ++u)
        for (int q = 0; q < n; ++q) {
          const K& y = Y[size_t(u) * n + q];
          if (scalar_traits<K>::is_zero(y)) continue;
          for (int k = 0; k < n; ++k) {
            if (scalar_traits<K>::is_zero(H.antipode(k, q))) continue;
            K f = y * H.antipode(k, q);
            for (int l = 0; l < n; ++l)
              if (!scalar_traits<K>::is_zero(A.m(u, k, l))) out2[l] += f * A.m(u, k, l);
          }
        }
      out2[j] -= H.epsilon.coeffs[i];
      rep.antipode_right = std::max(rep.antipode_right, max_abs(out2));
    }

  // S(ab) = S(b)S(a) and S(S(a^*)^*) = a
  for (int i = 0; i < n; ++i) {
    Vec<K> s_star = matvec(H.antipode, A.star_of(A.basis_vector(i)));
    Vec<K> back = matvec(H.antipode, A.star_of(s_star));
    back[i] -= scalar_traits<K>::one();
    rep.antipode_star_square = std::max(rep.antipode_star_square, max_abs(back));
    for (int j = 0; j < n; ++j) {
      Vec<K> lhs = matvec(H.antipode, A.multiply(A.basis_vector(i), A.basis_vector(j)));
      Vec<K> rhs = A.multiply(matvec(H.antipode, A.basis_vector(j)),
                              matvec(H.antipode, A.basis_vector(i)));
      for (int t = 0; t < n; ++t)
        rep.antipode_antimultiplicative = std::max(
            rep.antipode_antimultiplicative, std::abs(scalar_traits<K>::to_cd(lhs[t] - rhs[t])));
    }
  }

  // bijectivity of the four Galois maps
  const galois_map maps[4] = {galois_map::delta_right, galois_map::delta_left,
                              galois_map::left_delta, galois_map::right_delta};
  for (int t = 0; t < 4; ++t) {
    Mat<K> T = galois_matrix(A, H, maps[t]);
    rep.galois_cond[t] = cond_number(to_cd_mat(T));
    if constexpr (scalar_traits<K>::exact) {
      rep.galois_invertible[t] = (linear_solve(T, Mat<K>(T.rows, 0)).rank == T.cols);
    } else {
      rep.galois_invertible[t] = std::isfinite(rep.galois_cond[t]);
    }
  }
  return rep;
}

// --- solvers ------------------------------------------------------------------

template <class K>
Functional<K> solve_counit(const StarAlgebra<K>& A, const Mat<K>& delta) {
  const int n = A.dim;
  Mat<K> M(2 * n * n, n), B(2 * n * n, 1);
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q) {
      for (int p = 0; p < n; ++p) {
        M(i * n + q, p) += delta(i, p * n + q);              // (eps x id)
        M(n * n + i * n + q, p) += delta(i, q * n + p);      // (id x eps)
      }
      if (q == i) {
        B(i * n + q, 0) = scalar_traits<K>::one();
        B(n * n + i * n + q, 0) = scalar_traits<K>::one();
      }
    }
  auto sol = linear_solve(M, B);
  if (!sol.consistent || sol.residual > global_tol().predicate)
    throw error(errc::no_solution, "counit system inconsistent");
  if (!sol.unique) throw error(errc::non_unique, "counit system underdetermined");
  Functional<K> eps;
  eps.coeffs.resize(n);
  for (int p = 0; p < n; ++p) eps.coeffs[p] = sol.solution(p, 0);
  return eps;
}

template <class K>
Mat<K> solve_antipode(const StarAlgebra<K>& A, const Hopf<K>& partial) {
  const int n = A.dim;
  Mat<K> M(2 * n * n * n, n * n), B(2 * n * n * n, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec<K> X = delta_mult_right(A, partial, i, j);
      Vec<K> Y = delta_mult_left(A, partial, i, j);
      for (int l = 0; l < n; ++l) {
        int row1 = (i * n + j) * n + l;
        int row2 = n * n * n + row1;
        for (int k = 0; k < n; ++k)
          for (int p = 0; p < n; ++p) {
            K c1 = scalar_traits<K>::zero();
            for (int r = 0; r < n; ++r) c1 += X[size_t(p) * n + r] * A.m(k, r, l);
            if (!scalar_traits<K>::is_zero(c1)) M(row1, k * n + p) += c1;
            K c2 = scalar_traits<K>::zero();
            for (int u = 0; u < n; ++u) c2 += Y[size_t(u) * n + p] * A.m(u, k, l);
            if (!scalar_traits<K>::is_zero(c2)) M(row2, k * n + p) += c2;
          }
        if (l == j) {
          B(row1, 0) = partial.epsilon.coeffs[i];
          B(row2, 0) = partial.epsilon.coeffs[i];
        }
      }
    }
  auto sol = linear_solve(M, B);
  if (!sol.consistent || sol.residual > global_tol().predicate)
    throw error(errc::no_solution, "antipode system inconsistent");
  if (!sol.unique) throw error(errc::non_unique, "antipode system underdetermined");
  Mat<K> S(n, n);
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p) S(k, p) = sol.solution(k * n + p, 0);
  return S;
}

/// Non-zero h with a h = h a = eps(a) h, or empty when none exists.
template <class K>
std::optional<Vec<K>> solve_discrete_element(const StarAlgebra<K>& A, const Hopf<K>& H) {
  const int n = A.dim;
  Mat<K> M(2 * n * n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        M(i * n + k, j) += A.m(i, j, k);
        M(n * n + i * n + k, j) += A.m(j, i, k);
        if (j == k) {
          M(i * n + k, j) -= H.epsilon.coeffs[i];
          M(n * n + i * n + k, j) -= H.epsilon.coeffs[i];
        }
      }
  Mat<K> ker = kernel(M);
  if (ker.cols == 0) return std::nullopt;
  Vec<K> h(n);
  for (int i = 0; i < n; ++i) h[i] = ker(i, 0);
  return h;
}

enum class haar_normalization { unit, discrete };

template <class K>
struct HaarData {
  Functional<K> phi;            // left Haar
  Functional<K> psi;            // right: phi o S
  bool psi_positive = false;
  Mat<K> rho;                   // phi(a b) = phi(b rho(a))
  double rho_involutive_residual = 0;  // rho(rho(a^*)^*) = a
  double right_invariance_residual = 0;
  std::optional<Vec<K>> discrete_element;
};

template <class K>
double left_invariance_residual(const StarAlgebra<K>& A, const Hopf<K>& H,
                                const Functional<K>& phi) {
  // (id x phi) Delta(a) = phi(a) 1, checked against the unit when present,
  // otherwise multiplied into the algebra.
  const int n = A.dim;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    Vec<K> lhs(n, scalar_traits<K>::zero());
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) lhs[p] += H.delta(i, p * n + q) * phi.coeffs[q];
    if (A.unit) {
      for (int p = 0; p < n; ++p) lhs[p] -= phi.coeffs[i] * (*A.unit)[p];
      worst = std::max(worst, max_abs(lhs));
    } else {
      for (int j = 0; j < n; ++j) {
        Vec<K> prod = A.multiply(lhs, A.basis_vector(j));
        prod[j] -= phi.coeffs[i];
        worst = std::max(worst, max_abs(prod));
      }
    }
  }
  return worst;
}

template <class K>
double right_invariance_residual(const StarAlgebra<K>& A, const Hopf<K>& H,
                                 const Functional<K>& psi) {
  const int n = A.dim;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    Vec<K> lhs(n, scalar_traits<K>::zero());
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) lhs[q] += H.delta(i, p * n + q) * psi.coeffs[p];
    if (A.unit) {
      for (int q = 0; q < n; ++q) lhs[q] -= psi.coeffs[i] * (*A.unit)[q];
      worst = std::max(worst, max_abs(lhs));
    } else {
      for (int j = 0; j < n; ++j) {
        Vec<K> prod = A.multiply(lhs, A.basis_vector(j));
        prod[j] -= psi.coeffs[i];
        worst = std::max(worst, max_abs(prod));
      }
    }
  }
  return worst;
}

template <class K>
HaarData<K> solve_haar(const StarAlgebra<K>& A, const Hopf<K>& H,
                       haar_normalization norm = haar_normalization::unit) {
  const int n = A.dim;
  // invariance system: (id x phi)Delta(b_i) = phi(b_i) 1. Without a unit the
  // same identity is imposed after multiplying into the algebra.
  Mat<K> M;
  if (A.unit) {
    M = Mat<K>(n * n, n);
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) M(i * n + p, q) += H.delta(i, p * n + q);
        M(i * n + p, i) -= (*A.unit)[p];
      }
  } else {
    if (norm == haar_normalization::unit)
      throw error(errc::not_compact_type, "unit normalization requires a unital algebra");
    M = Mat<K>(n * n * n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          int row = (i * n + j) * n + k;
          for (int q = 0; q < n; ++q) {
            K c = scalar_traits<K>::zero();
            for (int p = 0; p < n; ++p) c += H.delta(i, p * n + q) * A.m(p, j, k);
            M(row, q) += c;
          }
          if (j == k) M(row, i) -= scalar_traits<K>::one();
        }
  }
  Mat<K> ker = kernel(M);
  if (ker.cols == 0)
    throw error(errc::no_invariant_functional, "invariance system has no solution");
  if (ker.cols > 1)
    throw error(errc::non_unique, "invariant functional space has dimension > 1");

  HaarData<K> out;
  out.phi.coeffs.resize(n);
  for (int i = 0; i < n; ++i) out.phi.coeffs[i] = ker(i, 0);

  // normalization
  if (norm == haar_normalization::discrete) {
    out.discrete_element = solve_discrete_element(A, H);
    if (!out.discrete_element)
      throw error(errc::no_solution, "discrete normalization requested but no h exists");
    // canonicalize h: first non-zero coordinate becomes 1, so the kernel
    // solver's sign convention cannot leak into phi
    {
      Vec<K>& h = *out.discrete_element;
      K pivot = scalar_traits<K>::zero();
      for (auto& c : h)
        if (!scalar_traits<K>::is_zero(c)) { pivot = c; break; }
      for (auto& c : h) c = c / pivot;
    }
    K v = out.phi(*out.discrete_element);
    if (scalar_traits<K>::is_zero(v))
      throw error(errc::no_solution, "phi(h) = 0, cannot normalize");
    for (auto& c : out.phi.coeffs) c = c / v;
    // the positive representative may be -h; detect and flip both
    if (!functional_predicates(A, out.phi).positive) {
      for (auto& c : out.phi.coeffs) c = -c;
      for (auto& c : *out.discrete_element) c = -c;
    }
  } else {
    K v = out.phi(*A.unit);
    if (scalar_traits<K>::is_zero(v))
      throw error(errc::no_solution, "phi(1) = 0, cannot normalize");
    for (auto& c : out.phi.coeffs) c = c / v;
  }

  auto preds = functional_predicates(A, out.phi);
  if (!preds.positive)
    throw error(errc::not_positive,
                "invariant functional is not positive; not an algebraic quantum group");
  if (!preds.faithful) throw error(errc::not_faithful, "Haar functional is not faithful");

  // psi = phi o S
  out.psi.coeffs.assign(n, scalar_traits<K>::zero());
  for (int i = 0; i < n; ++i)
    out.psi.coeffs[i] = out.phi(matvec(H.antipode, A.basis_vector(i)));
  out.right_invariance_residual = right_invariance_residual(A, H, out.psi);
  out.psi_positive = functional_predicates(A, out.psi).positive;

  // rho from phi(b_i b_j) = phi(b_j rho(b_i))
  Mat<K> Phi2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      Phi2(i, j) = out.phi(A.multiply(A.basis_vector(i), A.basis_vector(j)));
  Mat<K> rhs(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rhs(j, i) = Phi2(i, j);
  auto rho_sol = linear_solve(Phi2, rhs);  // Phi2 * R = rhs, column i: Phi2 r_i = v_i
  if (!rho_sol.consistent || !rho_sol.unique)
    throw error(errc::no_solution, "rho system not uniquely solvable");
  out.rho = rho_sol.solution;

  for (int i = 0; i < n; ++i) {
    Vec<K> r = matvec(out.rho, A.star_of(matvec(out.rho, A.star_of(A.basis_vector(i)))));
    r[i] -= scalar_traits<K>::one();
    out.rho_involutive_residual = std::max(out.rho_involutive_residual, max_abs(r));
  }
  return out;
}

// --- convolution algebra of functionals ----------------------------------------

template <class K>
Functional<K> convolve(const Hopf<K>& H, const Functional<K>& w1, const Functional<K>& w2) {
  int n = int(w1.coeffs.size());
  Functional<K> out;
  out.coeffs.assign(n, scalar_traits<K>::zero());
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        out.coeffs[i] += H.delta(i, p * n + q) * w1.coeffs[p] * w2.coeffs[q];
  return out;
}

template <class K>
bool is_multiplicative(const StarAlgebra<K>& A, const Functional<K>& w,
                       double tol = global_tol().identity) {
  double nz = max_abs(w.coeffs);
  if (nz <= tol) return false;
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) {
      K d = w(A.multiply(A.basis_vector(i), A.basis_vector(j))) - w.coeffs[i] * w.coeffs[j];
      if (std::abs(scalar_traits<K>::to_cd(d)) > tol * std::max(1.0, nz * nz)) return false;
    }
  return true;
}

template <class K>
Functional<K> mult_functional_inverse(const StarAlgebra<K>& A, const Hopf<K>& H,
                                      const Functional<K>& w) {
  if (!is_multiplicative(A, w))
    throw error(errc::not_multiplicative, "inverse defined only for non-zero characters");
  Functional<K> out;
  out.coeffs.assign(A.dim, scalar_traits<K>::zero());
  for (int i = 0; i < A.dim; ++i)
    out.coeffs[i] = w(matvec(H.antipode, A.basis_vector(i)));
  return out;
}

// --- one-sided and two-sided functional convolutions against elements ----------

/// a * tau = (tau (x) id) Delta(a)
template <class K>
Vec<K> elt_conv_right(const Hopf<K>& H, const Vec<K>& a, const Functional<K>& tau) {
  int n = int(a.size());
  Vec<K> out(n, scalar_traits<K>::zero());
  for (int i = 0; i < n; ++i) {
    if (scalar_traits<K>::is_zero(a[i])) continue;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) out[q] += a[i] * H.delta(i, p * n + q) * tau.coeffs[p];
  }
  return out;
}

/// tau * a = (id (x) tau) Delta(a)
template <class K>
Vec<K> elt_conv_left(const Hopf<K>& H, const Vec<K>& a, const Functional<K>& tau) {
  int n = int(a.size());
  Vec<K> out(n, scalar_traits<K>::zero());
  for (int i = 0; i < n; ++i) {
    if (scalar_traits<K>::is_zero(a[i])) continue;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) out[p] += a[i] * H.delta(i, p * n + q) * tau.coeffs[q];
  }
  return out;
}

/// tau * a * tau' = (tau' (x) id (x) tau)(Delta (x) id)Delta(a)
template <class K>
Vec<K> sandwich(const Hopf<K>& H, const Functional<K>& tau, const Vec<K>& a,
                const Functional<K>& tau_prime) {
  int n = int(a.size());
  Vec<K> out(n, scalar_traits<K>::zero());
  for (int j = 0; j < n; ++j) {
    if (scalar_traits<K>::is_zero(a[j])) continue;
    for (int u = 0; u < n; ++u)
      for (int q = 0; q < n; ++q) {
        const K& d1 = H.delta(j, u * n + q);
        if (scalar_traits<K>::is_zero(d1)) continue;
        K fq = d1 * tau.coeffs[q] * a[j];
        if (scalar_traits<K>::is_zero(fq)) continue;
        for (int p = 0; p < n; ++p)
          for (int r = 0; r < n; ++r) {
            const K& d2 = H.delta(u, p * n + r);
            if (!scalar_traits<K>::is_zero(d2)) out[r] += fq * d2 * tau_prime.coeffs[p];
          }
      }
  }
  return out;
}

}  // namespace aqg
