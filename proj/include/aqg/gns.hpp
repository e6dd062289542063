#pragma once

#include "aqg/duality.hpp"

namespace aqg {

/// GNS pair for a positive faithful functional. The frame is fixed by the
/// Cholesky factor of the Gram form, so lambda(b_i) = column i of `lambda`
/// in an orthonormal basis of H.
template <class K>
struct GnsPair {
  Mat<K> gram;     // gram(i,j) = phi(b_j^* b_i)
  Mat<K> lambda;   // coordinates of lambda(b_i)
  Mat<K> lambda_inv;
  std::vector<Mat<K>> rep;  // pi(b_i)

  Vec<K> lambda_of(const Vec<K>& a) const { return matvec(lambda, a); }

  Mat<K> pi_of(const Vec<K>& a) const {
    Mat<K> M(lambda.rows, lambda.rows);
    for (size_t i = 0; i < a.size(); ++i) {
      if (scalar_traits<K>::is_zero(a[i])) continue;
      M = M + rep[i] * a[i];
    }
    return M;
  }
};

template <class K>
GnsPair<K> build_gns(const StarAlgebra<K>& A, const Functional<K>& phi) {
  const int n = A.dim;
  GnsPair<K> g;
  g.gram = Mat<K>(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      g.gram(i, j) = phi(A.multiply(A.star_of(A.basis_vector(j)), A.basis_vector(i)));
  }
  // inner-product form on coordinates is the transpose of the stored gram
  Mat<K> form = transpose(g.gram);
  if (!is_psd(form)) throw error(errc::not_positive, "GNS needs a positive functional");
  if constexpr (!scalar_traits<K>::exact) {
    auto ev = hermitian_eigenvalues(to_cd_mat(form));
    if (!ev.empty() && ev.front() <= global_tol().predicate)
      throw error(errc::not_faithful, "GNS needs a faithful functional");
  }
  g.lambda = cholesky_upper(form);  // throws NotFaithful on singular gram
  g.lambda_inv = inverse(g.lambda);
  g.rep.reserve(n);
  for (int i = 0; i < n; ++i)
    g.rep.push_back(matmul(matmul(g.lambda, A.left_mult(A.basis_vector(i))), g.lambda_inv));
  return g;
}

/// Residuals of the defining GNS identities, for verification.
template <class K>
double gns_residual(const StarAlgebra<K>& A, const Functional<K>& phi, const GnsPair<K>& g) {
  const int n = A.dim;
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // (lambda(a_i), lambda(a_j)) = phi(a_j^* a_i)
      K ip = scalar_traits<K>::zero();
      for (int t = 0; t < n; ++t)
        ip += scalar_traits<K>::conj(g.lambda(t, j)) * g.lambda(t, i);
      K rhs = phi(A.multiply(A.star_of(A.basis_vector(j)), A.basis_vector(i)));
      worst = std::max(worst, std::abs(scalar_traits<K>::to_cd(ip - rhs)));
      // pi(a) lambda(b) = lambda(ab)
      Vec<K> lhs = matvec(g.rep[i], g.lambda_of(A.basis_vector(j)));
      Vec<K> r2 = g.lambda_of(A.multiply(A.basis_vector(i), A.basis_vector(j)));
      for (int t = 0; t < n; ++t)
        worst = std::max(worst, std::abs(scalar_traits<K>::to_cd(lhs[t] - r2[t])));
    }
  // *-representation: pi(a^*) = pi(a)^*
  for (int i = 0; i < n; ++i) {
    Mat<K> l = g.pi_of(A.star_of(A.basis_vector(i)));
    worst = std::max(worst, diff_norm(l, adjoint(g.rep[i])));
  }
  return worst;
}

// --- multiplicative unitary -----------------------------------------------------

template <class K>
struct MultUnitary {
  Mat<K> W;  // on H (x) H in the GNS frame
};

/// W from the defining relation W (lambda x lambda)(Delta(b)(a (x) 1)) =
/// lambda(a) (x) lambda(b); the transfer map's invertibility is one of the
/// Hopf axioms, so failure here is an axiom violation.
template <class K>
MultUnitary<K> build_W(const StarAlgebra<K>& A, const Hopf<K>& H, const GnsPair<K>& g) {
  const int n = A.dim;
  Mat<K> T(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Delta(b_j)(b_i (x) 1)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          const K& d = H.delta(j, p * n + q);
          if (scalar_traits<K>::is_zero(d)) continue;
          for (int r = 0; r < n; ++r)
            if (!scalar_traits<K>::is_zero(A.m(p, i, r)))
              T(r * n + q, i * n + j) += d * A.m(p, i, r);
        }
    }
  auto inv_res = linear_solve(T, Mat<K>::identity(n * n));
  if (!inv_res.unique || !inv_res.consistent)
    throw error(errc::singular_transfer, "transfer map a(x)b -> Delta(b)(a(x)1) is singular");
  Mat<K> LL = kron(g.lambda, g.lambda);
  MultUnitary<K> W;
  W.W = matmul(matmul(LL, inv_res.solution), inverse(LL));
  return W;
}

template <class K>
double unitarity_residual(const Mat<K>& W) {
  Mat<K> I = Mat<K>::identity(W.rows);
  return std::max(diff_norm(matmul(adjoint(W), W), I), diff_norm(matmul(W, adjoint(W)), I));
}

template <class K>
double w_defining_residual(const StarAlgebra<K>& A, const Hopf<K>& H, const GnsPair<K>& g,
                           const Mat<K>& W) {
  const int n = A.dim;
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec<K> x(size_t(n) * n, scalar_traits<K>::zero());
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          const K& d = H.delta(j, p * n + q);
          if (scalar_traits<K>::is_zero(d)) continue;
          for (int r = 0; r < n; ++r)
            if (!scalar_traits<K>::is_zero(A.m(p, i, r))) x[size_t(r) * n + q] += d * A.m(p, i, r);
        }
      // W (lambda x lambda) x = lambda(b_i) (x) lambda(b_j)
      Vec<K> lx(size_t(n) * n, scalar_traits<K>::zero());
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          const K& c = x[size_t(u) * n + v];
          if (scalar_traits<K>::is_zero(c)) continue;
          for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
              if (!scalar_traits<K>::is_zero(g.lambda(s, u)) &&
                  !scalar_traits<K>::is_zero(g.lambda(t, v)))
                lx[size_t(s) * n + t] += c * g.lambda(s, u) * g.lambda(t, v);
        }
      Vec<K> lhs = matvec(W, lx);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          K expect = g.lambda(s, i) * g.lambda(t, j);
          worst = std::max(worst,
                           std::abs(scalar_traits<K>::to_cd(lhs[size_t(s) * n + t] - expect)));
        }
    }
  return worst;
}

// --- pentagon ---------------------------------------------------------------------

template <class K>
Mat<K> leg12(const Mat<K>& W, int n) {
  return kron(W, Mat<K>::identity(n));
}

template <class K>
Mat<K> leg23(const Mat<K>& W, int n) {
  return kron(Mat<K>::identity(n), W);
}

template <class K>
Mat<K> leg13(const Mat<K>& W, int n) {
  Mat<K> M(n * n * n, n * n * n);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i3 = 0; i3 < n; ++i3)
      for (int j1 = 0; j1 < n; ++j1)
        for (int j3 = 0; j3 < n; ++j3) {
          const K& w = W(i1 * n + i3, j1 * n + j3);
          if (scalar_traits<K>::is_zero(w)) continue;
          for (int k = 0; k < n; ++k)
            M((size_t(i1) * n + k) * n + i3, (size_t(j1) * n + k) * n + j3) = w;
        }
  return M;
}

inline constexpr int kPentagonDimCap = 12;

/// || W12 W13 W23 - W23 W12 || on H (x) H (x) H.
template <class K>
double pentagon_residual(const Mat<K>& W, bool force = false) {
  int n2 = W.rows;
  int n = int(std::lround(std::sqrt(double(n2))));
  if (n * n != n2) throw error(errc::dimension_mismatch, "W is not on H (x) H");
  if (n > kPentagonDimCap && !force)
    throw error(errc::dimension_too_large,
                "pentagon check capped at dimension " + std::to_string(kPentagonDimCap));
  Mat<K> w12 = leg12(W, n), w23 = leg23(W, n), w13 = leg13(W, n);
  Mat<K> lhs = matmul(matmul(w12, w13), w23);
  Mat<K> rhs = matmul(w23, w12);
  return diff_norm(lhs, rhs);
}

// --- implementation formulas --------------------------------------------------------

template <class K>
struct ImplReport {
  double delta_r = 0;        // W^*(1 x pi(a))W = (pi x pi) Delta(a)
  double delta_hat_r = 0;    // W(pi-hat(w) x 1)W^* = (pi-hat x pi-hat) Delta-hat(w)
  double leg_formula = 0;    // W12^* W23 W12 = W13 W23
  double dual_gns = 0;       // (lambda-hat(w), lambda-hat(v)) = psi-hat(v^* w)
};

/// pi-hat matrices of the dual acting on the same H via lambda-hat = lambda.
template <class K>
std::vector<Mat<K>> dual_representation(const DualPresentation<K>& D, const GnsPair<K>& g) {
  std::vector<Mat<K>> rep;
  rep.reserve(D.carrier.dim);
  for (int j = 0; j < D.carrier.dim; ++j)
    rep.push_back(matmul(matmul(g.lambda, D.carrier.left_mult(D.carrier.basis_vector(j))),
                         g.lambda_inv));
  return rep;
}

template <class K>
ImplReport<K> check_implementations(const StarAlgebra<K>& A, const Hopf<K>& H,
                                    const GnsPair<K>& g, const Mat<K>& W,
                                    const DualPresentation<K>& D) {
  const int n = A.dim;
  ImplReport<K> rep;
  Mat<K> Wadj = adjoint(W);

  for (int i = 0; i < n; ++i) {
    Mat<K> mid = kron(Mat<K>::identity(n), g.rep[i]);
    Mat<K> lhs = matmul(matmul(Wadj, mid), W);
    Mat<K> rhs(n * n, n * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const K& d = H.delta(i, p * n + q);
        if (scalar_traits<K>::is_zero(d)) continue;
        rhs = rhs + kron(g.rep[p], g.rep[q]) * d;
      }
    rep.delta_r = std::max(rep.delta_r, diff_norm(lhs, rhs));
  }

  auto rhat = dual_representation(D, g);
  for (int j = 0; j < n; ++j) {
    Mat<K> lhs = matmul(matmul(W, kron(rhat[j], Mat<K>::identity(n))), Wadj);
    Mat<K> rhs(n * n, n * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const K& d = D.hopf.delta(j, p * n + q);
        if (scalar_traits<K>::is_zero(d)) continue;
        rhs = rhs + kron(rhat[p], rhat[q]) * d;
      }
    rep.delta_hat_r = std::max(rep.delta_hat_r, diff_norm(lhs, rhs));
  }

  {
    Mat<K> w12 = leg12(W, n), w23 = leg23(W, n), w13 = leg13(W, n);
    Mat<K> lhs = matmul(matmul(adjoint(w12), w23), w12);
    Mat<K> rhs = matmul(w13, w23);
    rep.leg_formula = diff_norm(lhs, rhs);
  }

  // dual GNS pair identity against psi-hat
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      K ip = scalar_traits<K>::zero();
      for (int t = 0; t < n; ++t)
        ip += scalar_traits<K>::conj(g.lambda(t, j)) * g.lambda(t, i);
      Vec<K> prod = D.carrier.multiply(D.carrier.star_of(D.carrier.basis_vector(j)),
                                       D.carrier.basis_vector(i));
      K rhs = D.haar_right(prod);
      rep.dual_gns = std::max(rep.dual_gns, std::abs(scalar_traits<K>::to_cd(ip - rhs)));
    }
  return rep;
}

// --- opposite quantum group ----------------------------------------------------------

template <class K>
struct Opposite {
  Hopf<K> hopf;        // flipped comultiplication, antipode S^{-1}
  MultUnitary<K> W_op;
};

template <class K>
Opposite<K> build_opposite(const StarAlgebra<K>& A, const Hopf<K>& H, const GnsPair<K>& g) {
  if (!A.unit) throw error(errc::not_compact_type, "opposite needs compact type");
  const int n = A.dim;
  Opposite<K> op;
  op.hopf.delta = Mat<K>(n, n * n);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) op.hopf.delta(i, p * n + q) = H.delta(i, q * n + p);
  op.hopf.epsilon = H.epsilon;
  op.hopf.antipode = inverse(H.antipode);
  op.W_op = build_W(A, op.hopf, g);
  return op;
}

// --- assembled pipeline ---------------------------------------------------------------

/// Quantum group with its GNS data, multiplicative unitary and dual; the
/// working object for the co-amenability and modular checks.
template <class K>
struct Pipeline {
  QG<K> qg;
  GnsPair<K> gns;
  MultUnitary<K> W;
  DualPresentation<K> dual;
  std::vector<Mat<K>> rep_hat;

  const StarAlgebra<K>& A() const { return qg.A; }
  const Hopf<K>& H() const { return qg.H; }
  int dim() const { return qg.A.dim; }
};

template <class K>
Pipeline<K> build_pipeline(QG<K> qg) {
  Pipeline<K> p;
  p.qg = std::move(qg);
  p.gns = build_gns(p.qg.A, p.qg.haar.phi);
  p.W = build_W(p.qg.A, p.qg.H, p.gns);
  p.dual = build_dual(p.qg.A, p.qg.H, p.qg.haar);
  p.rep_hat = dual_representation(p.dual, p.gns);
  return p;
}

template <class K>
Pipeline<K> corpus_pipeline(const std::string& name) {
  return build_pipeline(corpus_entry<K>(name));
}

}  // namespace aqg
