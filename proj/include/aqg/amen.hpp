#pragma once

#include <map>

#include "aqg/gns.hpp"

namespace aqg {

// --- slicing machinery on B(H (x) H) -----------------------------------------

/// (id (x) omega)(Y) for omega(x) = tr(x rho).
template <class K>
Mat<K> slice_second_leg(const Mat<K>& Y, const Mat<K>& rho) {
  int n = rho.rows;
  int m = Y.rows / n;
  Mat<K> out(m, m);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) {
      K s = scalar_traits<K>::zero();
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) s += Y(a * n + b, c * n + d) * rho(d, b);
      out(a, c) = s;
    }
  return out;
}

/// Density of the vector functional omega_{u,v}(x) = (x u, v).
template <class K>
Mat<K> vector_density(const Vec<K>& u, const Vec<K>& v) {
  int n = int(u.size());
  Mat<K> rho(n, n);
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b) rho(d, b) = u[d] * scalar_traits<K>::conj(v[b]);
  return rho;
}

/// Expansion W = sum_i pi(b_i) (x) X_i with the X_i solved from the linear
/// system; valid because the first leg of W lies in pi(A).
template <class K>
struct FirstLegExpansion {
  std::vector<Mat<K>> second;  // X_i
  double residual = 0;         // membership residual
};

template <class K>
FirstLegExpansion<K> expand_first_leg(const Mat<K>& W, const std::vector<Mat<K>>& rep) {
  const int nA = int(rep.size());
  const int n = rep[0].rows;
  const int m = W.rows / n;  // second-leg dimension
  Mat<K> M(W.rows * W.cols, nA * m * m);
  for (int i = 0; i < nA; ++i)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        const K& v = rep[i](a, c);
        if (scalar_traits<K>::is_zero(v)) continue;
        for (int b = 0; b < m; ++b)
          for (int d = 0; d < m; ++d)
            M((size_t(a) * m + b) * W.cols + (c * m + d), (size_t(i) * m + b) * m + d) += v;
      }
  Mat<K> rhs(W.rows * W.cols, 1);
  for (int r = 0; r < W.rows; ++r)
    for (int c = 0; c < W.cols; ++c) rhs(r * W.cols + c, 0) = W(r, c);
  auto sol = linear_solve(M, rhs);
  FirstLegExpansion<K> out;
  out.residual = sol.residual;
  out.second.reserve(nA);
  for (int i = 0; i < nA; ++i) {
    Mat<K> X(m, m);
    for (int b = 0; b < m; ++b)
      for (int d = 0; d < m; ++d) X(b, d) = sol.solution((size_t(i) * m + b) * m + d, 0);
    out.second.push_back(std::move(X));
  }
  return out;
}

/// (f (x) id)(W) for a functional f on A, through the first-leg expansion.
template <class K>
Mat<K> slice_first_leg(const FirstLegExpansion<K>& e, const Functional<K>& f) {
  Mat<K> out(e.second[0].rows, e.second[0].cols);
  for (size_t i = 0; i < e.second.size(); ++i)
    if (!scalar_traits<K>::is_zero(f.coeffs[i])) out = out + e.second[i] * f.coeffs[i];
  return out;
}

/// Rank test: W lies in span(pi(A) (x) pi-hat(A-hat)).
template <class K>
double w_span_residual(const Pipeline<K>& p) {
  const int n = p.dim();
  Mat<K> M(n * n * n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat<K> B = kron(p.gns.rep[i], p.rep_hat[j]);
      for (size_t t = 0; t < B.a.size(); ++t) M(int(t), i * n + j) = B.a[t];
    }
  Mat<K> rhs(n * n * n * n, 1);
  for (size_t t = 0; t < p.W.W.a.size(); ++t) rhs(int(t), 0) = p.W.W.a[t];
  return linear_solve(M, rhs).residual;
}

// --- co-amenability checks -----------------------------------------------------

struct CounitBound {
  double ratio_max = 0;
  double ratio_at_unit = 0;
};

/// max over seeded samples of |eps(a)| / ||pi(a)||.
inline CounitBound counit_bound_check(const Pipeline<cd>& p, int samples, uint64_t seed) {
  rng r(seed);
  CounitBound out;
  for (int s = 0; s < samples; ++s) {
    Vec<cd> a = random_element(p.A(), r);
    double num = std::abs(p.H().epsilon(a));
    double den = opnorm(to_cd_mat(p.gns.pi_of(a)));
    if (den > 1e-14) out.ratio_max = std::max(out.ratio_max, num / den);
  }
  if (p.A().unit) {
    double num = std::abs(p.H().epsilon(*p.A().unit));
    double den = opnorm(to_cd_mat(p.gns.pi_of(*p.A().unit)));
    out.ratio_at_unit = num / den;
  }
  return out;
}

/// || (eps_r (x) id)(W) - 1 ||, with eps_r = eps transported through pi.
template <class K>
double slice_counit_W(const Pipeline<K>& p, const Functional<K>& character) {
  auto e = expand_first_leg(p.W.W, p.gns.rep);
  Mat<K> M = slice_first_leg(e, character);
  return std::max(diff_norm(M, Mat<K>::identity(M.rows)), e.residual);
}

template <class K>
double slice_counit_W(const Pipeline<K>& p) {
  return slice_counit_W(p, p.H().epsilon);
}

/// max over test vectors w of || W(v (x) w) - v (x) w ||_2.
template <class K>
double almost_invariant_residual(const Mat<K>& W, const Vec<K>& v,
                                 const std::vector<Vec<K>>& test_vectors) {
  int n = int(v.size());
  double worst = 0;
  for (auto& w : test_vectors) {
    Vec<K> vw(size_t(n) * w.size());
    for (int i = 0; i < n; ++i)
      for (size_t j = 0; j < w.size(); ++j) vw[size_t(i) * w.size() + j] = v[i] * w[j];
    Vec<K> img = matvec(W, vw);
    double nrm2 = 0;
    for (size_t t = 0; t < vw.size(); ++t)
      nrm2 += std::norm(scalar_traits<K>::to_cd(img[t] - vw[t]));
    worst = std::max(worst, std::sqrt(nrm2));
  }
  return worst;
}

/// The exactly invariant unit vector at finite scale: normalized lambda(h),
/// h the discrete-type element.
template <class K>
Vec<cd> invariant_vector(const Pipeline<K>& p) {
  auto h = solve_discrete_element(p.A(), p.H());
  if (!h) throw error(errc::no_solution, "no discrete-type element");
  Vec<cd> v = to_cd_vec(p.gns.lambda_of(*h));
  double nrm = 0;
  for (auto& x : v) nrm += std::norm(x);
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;
  return v;
}

/// Right-invariant-mean residual for a state given by a density matrix on H:
/// max |m((id x omega)Delta_r(x)) - omega(1) m(x)| over basis x and a matrix
/// frame of vector functionals omega.
template <class K>
double invariant_mean_residual(const Pipeline<K>& p, const Mat<K>& rho_m) {
  const int n = p.dim();
  // state certification: positivity Gram on pi(A) and unitality
  Mat<K> G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat<K> x = matmul(adjoint(p.gns.rep[i]), p.gns.rep[j]);
      K tr = scalar_traits<K>::zero();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) tr += x(a, b) * rho_m(b, a);
      G(i, j) = tr;
    }
  if (!is_psd(G)) throw error(errc::not_a_state, "mean candidate not positive on pi(A)");
  {
    K tr = scalar_traits<K>::zero();
    for (int a = 0; a < n; ++a) tr += rho_m(a, a);
    if (std::abs(scalar_traits<K>::to_cd(tr) - cd{1, 0}) > global_tol().predicate)
      throw error(errc::not_a_state, "mean candidate not unital");
  }

  Mat<K> Wadj = adjoint(p.W.W);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    Mat<K> x = p.gns.rep[i];
    Mat<K> Dx = matmul(matmul(Wadj, kron(Mat<K>::identity(n), x)), p.W.W);
    K mx = scalar_traits<K>::zero();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) mx += x(a, b) * rho_m(b, a);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        Mat<K> rho = vector_density(p.A().basis_vector(u), p.A().basis_vector(v));
        Mat<K> sliced = slice_second_leg(Dx, rho);
        K lhs = scalar_traits<K>::zero();
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) lhs += sliced(a, b) * rho_m(b, a);
        K omega_1 = (u == v) ? scalar_traits<K>::one() : scalar_traits<K>::zero();
        worst = std::max(worst, std::abs(scalar_traits<K>::to_cd(lhs - omega_1 * mx)));
      }
  }
  return worst;
}

/// Right-translation identity of the function-algebra picture, checked inside
/// the group-algebra pipeline: pi-hat(R_x f) = (id x omega_{e_x}) Delta-hat_r pi-hat(f),
/// with e_x = lambda(x^-1) and f running over the indicator basis.
struct TranslationReport {
  double right_translation = 0;  // the identity above
  double w_formula = 0;          // W^*(e_y (x) e_x) = e_{yx} (x) e_x
  double left_translation_gap = 0;  // how badly left translation fails the identity
};

template <class K>
TranslationReport example_translation_check(const FiniteGroup& G, const Pipeline<K>& p) {
  const int n = G.n;
  TranslationReport rep;
  // e_x in GNS coordinates
  std::vector<Vec<K>> E(n);
  for (int x = 0; x < n; ++x) E[x] = p.gns.lambda_of(p.A().basis_vector(G.inv[x]));
  // pi-hat of the indicator e_y = hat(y^-1)
  auto pi_hat_e = [&](int y) { return p.rep_hat[G.inv[y]]; };

  double worst = 0, worst_left = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Mat<K> lhs = pi_hat_e(G.mul(y, G.inv[x]));  // R_x e_y = e_{y x^-1}
      Mat<K> lhs_left = pi_hat_e(G.mul(G.inv[x], y));
      Mat<K> Dr = matmul(matmul(p.W.W, kron(pi_hat_e(y), Mat<K>::identity(n))),
                         adjoint(p.W.W));
      Mat<K> rhs = slice_second_leg(Dr, vector_density(E[x], E[x]));
      worst = std::max(worst, diff_norm(lhs, rhs));
      worst_left = std::max(worst_left, diff_norm(lhs_left, rhs));
    }
  rep.right_translation = worst;
  rep.left_translation_gap = worst_left;

  // Eq: W^*(e_y (x) e_x) = e_{yx} (x) e_x
  Mat<K> Wadj = adjoint(p.W.W);
  double wworst = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      Vec<K> in(size_t(n) * n, scalar_traits<K>::zero());
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) in[size_t(s) * n + t] = E[y][s] * E[x][t];
      Vec<K> img = matvec(Wadj, in);
      int yx = G.mul(y, x);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          K expect = E[yx][s] * E[x][t];
          wworst = std::max(
              wworst, std::abs(scalar_traits<K>::to_cd(img[size_t(s) * n + t] - expect)));
        }
    }
  rep.w_formula = wworst;
  return rep;
}

/// Tracial identity (phi x phi)(Delta(a)^*(b (x) 1)Delta(a)) = phi(b) for
/// phi(a^*a) = 1.
inline double tracial_mean_identity(const QG<cd>& qg, int samples, uint64_t seed) {
  const auto& A = qg.A;
  const auto& phi = qg.haar.phi;
  const int n = A.dim;
  // phi must be a trace
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cd d = phi(A.multiply(A.basis_vector(i), A.basis_vector(j))) -
             phi(A.multiply(A.basis_vector(j), A.basis_vector(i)));
      if (std::abs(d) > global_tol().identity)
        throw error(errc::not_tracial, "haar functional is not a trace");
    }
  if (!A.unit) throw error(errc::not_compact_type, "identity needs a unit");

  rng r(seed);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    Vec<cd> a = random_element(A, r);
    cd nrm = phi(A.multiply(A.star_of(a), a));
    double scale = std::sqrt(std::abs(nrm));
    for (auto& c : a) c /= scale;
    Vec<cd> b = random_element(A, r);

    Vec<cd> Da = delta_of(qg.H, a);
    Vec<cd> b_tensor_1(size_t(n) * n, cd{0, 0});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b_tensor_1[size_t(i) * n + j] = b[i] * (*A.unit)[j];
    Vec<cd> Z = tensor_multiply(A, tensor_star(A, Da), tensor_multiply(A, b_tensor_1, Da));
    cd lhs{0, 0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lhs += Z[size_t(i) * n + j] * phi.coeffs[i] * phi.coeffs[j];
    worst = std::max(worst, std::abs(lhs - phi(b)));
  }
  return worst;
}

/// The sequence phi((a^*a)^n)^(1/n), n = 1..N.
inline std::vector<double> moment_norm_sequence(const StarAlgebra<cd>& A,
                                                const Functional<cd>& phi, const Vec<cd>& a,
                                                int N) {
  Vec<cd> p = A.multiply(A.star_of(a), a);
  std::vector<double> seq;
  seq.reserve(N);
  Vec<cd> pow = p;
  for (int k = 1; k <= N; ++k) {
    seq.push_back(std::pow(std::abs(phi(pow)), 1.0 / k));
    if (k < N) pow = A.multiply(pow, p);
  }
  return seq;
}

/// eps_r((id x omega_v)(W)) = omega_v(1) for GNS frame vectors v; the
/// sliced operators are re-expressed in the pi(A) basis before applying eps.
template <class K>
double counit_state_at_W(const Pipeline<K>& p) {
  const int n = p.dim();
  // basis-expansion matrix for pi(A)
  Mat<K> M(n * n, n);
  for (int i = 0; i < n; ++i)
    for (size_t t = 0; t < p.gns.rep[i].a.size(); ++t) M(int(t), i) = p.gns.rep[i].a[t];
  double worst = 0;
  for (int v = 0; v < n; ++v) {
    Vec<K> ev(n, scalar_traits<K>::zero());
    ev[v] = scalar_traits<K>::one();
    Mat<K> sliced = slice_second_leg(p.W.W, vector_density(ev, ev));
    Mat<K> rhs(n * n, 1);
    for (size_t t = 0; t < sliced.a.size(); ++t) rhs(int(t), 0) = sliced.a[t];
    auto sol = linear_solve(M, rhs);
    worst = std::max(worst, sol.residual);  // membership in pi(A)
    K val = scalar_traits<K>::zero();
    for (int i = 0; i < n; ++i) val += p.H().epsilon.coeffs[i] * sol.solution(i, 0);
    worst = std::max(worst, std::abs(scalar_traits<K>::to_cd(val) - 1.0));
  }
  return worst;
}

/// The approximate-unit conditions collapse to an exact unit at finite
/// scale: with omega the counit state (vector state at the invariant
/// vector), (omega . sigma)(x) = (sigma . omega)(x) = sigma(x) for x in
/// pi(A) and a frame of normal functionals, the products taken through
/// Delta_r.
template <class K>
double predual_unit_residual(const Pipeline<K>& p) {
  const int n = p.dim();
  Vec<cd> xi = invariant_vector(p);
  Mat<cd> rho_w = vector_density(xi, xi);
  Mat<cd> W = to_cd_mat(p.W.W);
  Mat<cd> Wadj = adjoint(W);
  auto pair_both = [&](const Mat<cd>& Y, const Mat<cd>& rho1, const Mat<cd>& rho2) {
    cd out{0, 0};
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            out += Y(a * n + b, c * n + d) * rho1(c, a) * rho2(d, b);
    return out;
  };
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    Mat<cd> x = to_cd_mat(p.gns.rep[i]);
    Mat<cd> Dx = matmul(matmul(Wadj, kron(Mat<cd>::identity(n), x)), W);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        Vec<cd> eu(n, cd{0, 0}), ev(n, cd{0, 0});
        eu[u] = 1.0;
        ev[v] = 1.0;
        Mat<cd> rho_s = vector_density(eu, ev);
        cd sx{0, 0};
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c) sx += x(a, c) * rho_s(c, a);
        worst = std::max(worst, std::abs(pair_both(Dx, rho_w, rho_s) - sx));
        worst = std::max(worst, std::abs(pair_both(Dx, rho_s, rho_w) - sx));
      }
  }
  return worst;
}

// --- assembled report ------------------------------------------------------------

struct AmenReport {
  double counit_bound_ratio_max = 0;
  double slice_residual = 0;
  std::map<std::string, double> mean_residuals;
  std::map<std::string, double> identity_residuals;
};

inline AmenReport run_amen_suite(const Pipeline<cd>& p, int samples, uint64_t seed) {
  AmenReport rep;
  rep.counit_bound_ratio_max = counit_bound_check(p, samples, seed).ratio_max;
  rep.slice_residual = slice_counit_W(p);
  const int n = p.dim();

  Vec<cd> l1 = to_cd_vec(p.gns.lambda_of(*p.A().unit));
  double nrm = 0;
  for (auto& x : l1) nrm += std::norm(x);
  nrm = std::sqrt(nrm);
  for (auto& x : l1) x /= nrm;
  rep.mean_residuals["vector_state_at_lambda_unit"] =
      invariant_mean_residual(p, vector_density(l1, l1));

  rep.identity_residuals["w_span"] = w_span_residual(p);
  rep.identity_residuals["counit_state_at_w"] = counit_state_at_W(p);
  rep.identity_residuals["predual_unit"] = predual_unit_residual(p);
  rep.identity_residuals["pentagon"] =
      n <= kPentagonDimCap ? pentagon_residual(p.W.W) : -1.0;

  std::vector<Vec<cd>> frame;
  for (int i = 0; i < n; ++i) {
    Vec<cd> e(n, cd{0, 0});
    e[i] = 1.0;
    frame.push_back(e);
  }
  rep.identity_residuals["invariant_vector"] =
      almost_invariant_residual(to_cd_mat(p.W.W), invariant_vector(p), frame);
  return rep;
}

}  // namespace aqg
