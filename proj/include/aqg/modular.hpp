#pragma once

#include <cmath>

#include "aqg/amen.hpp"
#include "aqg/gns.hpp"

namespace aqg {

/// One-parameter family of multiplicative functionals f_z determined by
/// per-generator moduli: f_z(b_i) = eps(b_i) mu_i^z, with mu_i = 0 forced on
/// generators killed by the counit. For plain algebras every basis element is
/// its own generator; filtered algebras supply exponents instead.
struct ModularCharacter {
  Vec<double> mu;             // per basis element; 1.0 on the eps-zero set
  Vec<cd> eps;                // counit values (the z = 0 profile)
  std::vector<char> zero_set; // eps(b_i) == 0
  bool unique = true;         // rank analysis of the log-linearized system
  double residual = 0;        // worst defining-condition residual at the solution

  Functional<cd> at(cd z) const {
    Functional<cd> f;
    f.coeffs.resize(mu.size());
    for (size_t i = 0; i < mu.size(); ++i) {
      if (zero_set[i]) {
        f.coeffs[i] = cd{0, 0};
      } else {
        // mu^z = exp(z log mu), mu > 0
        f.coeffs[i] = eps[i] * std::exp(z * std::log(mu[i]));
      }
    }
    return f;
  }
};

namespace detail {

/// Free log-variables after the *-pairing reduction t_{i^*} = -t_i. Only
/// basis-permuting involutions participate; anything else leaves the
/// variable free and the conditions must pin it.
struct StarPairing {
  std::vector<int> var_of;    // basis index -> free variable (or -1 on zero set)
  std::vector<double> sign;   // +1 or -1
  int n_free = 0;
};

template <class K>
StarPairing star_pairing(const StarAlgebra<K>& A, const std::vector<char>& zero_set) {
  const int n = A.dim;
  StarPairing P;
  P.var_of.assign(n, -1);
  P.sign.assign(n, 1.0);
  // detect b_i^* = b_j as a pure permutation row
  std::vector<int> star_perm(n, -1);
  for (int i = 0; i < n; ++i) {
    int hits = 0, j0 = -1;
    for (int j = 0; j < n; ++j) {
      cd v = scalar_traits<K>::to_cd(A.star(i, j));
      if (std::abs(v) > 1e-14) {
        ++hits;
        if (std::abs(v - cd{1, 0}) < 1e-12) j0 = j;
      }
    }
    if (hits == 1 && j0 >= 0) star_perm[i] = j0;
  }
  for (int i = 0; i < n; ++i) {
    if (zero_set[i] || P.var_of[i] >= 0) continue;
    int j = star_perm[i];
    if (j == i) {
      // self-adjoint generator: mu = 1/mu forces t = 0; keep it off the
      // variable list entirely
      P.var_of[i] = -2;
      continue;
    }
    P.var_of[i] = P.n_free;
    P.sign[i] = 1.0;
    if (j >= 0 && !zero_set[j] && P.var_of[j] == -1) {
      P.var_of[j] = P.n_free;
      P.sign[j] = -1.0;
    }
    ++P.n_free;
  }
  return P;
}

}  // namespace detail

/// Solves for the family f_z from the antipode-square and modular-shift
/// conditions, by damped Gauss-Newton on the log moduli.
template <class K>
ModularCharacter solve_modular_family(const StarAlgebra<K>& A, const Hopf<K>& H,
                                      const HaarData<K>& haar) {
  if (!A.unit) throw error(errc::not_compact_type, "modular family needs compact type");
  const int n = A.dim;

  ModularCharacter fam;
  fam.eps.resize(n);
  fam.zero_set.resize(n);
  for (int i = 0; i < n; ++i) {
    fam.eps[i] = scalar_traits<K>::to_cd(H.epsilon.coeffs[i]);
    fam.zero_set[i] = std::abs(fam.eps[i]) < 1e-13;
  }
  auto pairing = detail::star_pairing(A, fam.zero_set);

  Mat<cd> S2 = matmul(to_cd_mat(H.antipode), to_cd_mat(H.antipode));
  Mat<cd> rho = to_cd_mat(haar.rho);
  StarAlgebra<cd> Ac;  // complex copy for the sandwich arithmetic
  {
    Ac.dim = n;
    Ac.labels = A.labels;
    Ac.mult.resize(A.mult.size());
    for (size_t t = 0; t < A.mult.size(); ++t)
      Ac.mult[t] = scalar_traits<K>::to_cd(A.mult[t]);
    Ac.star = to_cd_mat(A.star);
    Ac.unit = to_cd_vec(*A.unit);
  }
  Hopf<cd> Hc;
  Hc.delta = to_cd_mat(H.delta);
  Hc.epsilon.coeffs = to_cd_vec(H.epsilon.coeffs);
  Hc.antipode = to_cd_mat(H.antipode);

  auto values_from = [&](const std::vector<double>& t, double z) {
    Functional<cd> f;
    f.coeffs.assign(n, cd{0, 0});
    for (int i = 0; i < n; ++i) {
      if (fam.zero_set[i]) continue;
      double logmu = 0;
      if (pairing.var_of[i] >= 0) logmu = pairing.sign[i] * t[pairing.var_of[i]];
      f.coeffs[i] = fam.eps[i] * std::exp(z * logmu);
    }
    return f;
  };

  auto residual_vec = [&](const std::vector<double>& t) {
    Functional<cd> f1 = values_from(t, 1.0);
    Functional<cd> fm1 = values_from(t, -1.0);
    std::vector<double> out;
    out.reserve(4 * n * n + 2);
    for (int j = 0; j < n; ++j) {
      Vec<cd> s2 = sandwich(Hc, fm1, Ac.basis_vector(j), f1);   // f_{-1} * b_j * f_1
      Vec<cd> rr = sandwich(Hc, f1, Ac.basis_vector(j), f1);    // f_1 * b_j * f_1
      for (int k = 0; k < n; ++k) {
        cd d1 = s2[k] - S2(k, j);
        cd d2 = rr[k] - rho(k, j);
        out.push_back(d1.real());
        out.push_back(d1.imag());
        out.push_back(d2.real());
        out.push_back(d2.imag());
      }
    }
    cd u = f1(*Ac.unit) - cd{1, 0};
    out.push_back(u.real());
    out.push_back(u.imag());
    return out;
  };

  std::vector<double> t(pairing.n_free, 0.0);
  auto norm_inf = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  double res = norm_inf(residual_vec(t));
  if (pairing.n_free > 0) {
    for (int iter = 0; iter < 60 && res > 1e-13; ++iter) {
      std::vector<double> r0 = residual_vec(t);
      const int m = int(r0.size());
      Eigen::MatrixXd J(m, pairing.n_free);
      const double eps_fd = 1e-6;
      for (int k = 0; k < pairing.n_free; ++k) {
        auto tp = t;
        tp[k] += eps_fd;
        auto rp = residual_vec(tp);
        for (int r = 0; r < m; ++r) J(r, k) = (rp[r] - r0[r]) / eps_fd;
      }
      Eigen::VectorXd b(m);
      for (int r = 0; r < m; ++r) b(r) = -r0[r];
      Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(b);
      double damping = 1.0;
      for (int half = 0; half < 30; ++half) {
        auto tn = t;
        for (int k = 0; k < pairing.n_free; ++k) tn[k] += damping * step(k);
        double rn = norm_inf(residual_vec(tn));
        if (rn < res) {
          t = tn;
          res = rn;
          break;
        }
        damping *= 0.5;
        if (half == 29) iter = 60;  // stuck
      }
    }
    // rank analysis at the solution, for uniqueness of log mu
    {
      std::vector<double> r0 = residual_vec(t);
      const int m = int(r0.size());
      Eigen::MatrixXd J(m, pairing.n_free);
      const double eps_fd = 1e-6;
      for (int k = 0; k < pairing.n_free; ++k) {
        auto tp = t;
        tp[k] += eps_fd;
        auto rp = residual_vec(tp);
        for (int r = 0; r < m; ++r) J(r, k) = (rp[r] - r0[r]) / eps_fd;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
      double smin = svd.singularValues()(svd.singularValues().size() - 1);
      fam.unique = smin > 1e-6;
    }
  }

  if (res > global_tol().predicate)
    throw error(errc::no_positive_solution,
                "no positive multiplicative family satisfies the modular conditions");

  fam.residual = res;
  fam.mu.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    if (!fam.zero_set[i] && pairing.var_of[i] >= 0)
      fam.mu[i] = std::exp(pairing.sign[i] * t[pairing.var_of[i]]);
  return fam;
}

// --- condition grid ---------------------------------------------------------------

struct FamilyGrid {
  double additivity = 0;       // f_{z+w} = convolve(f_z, f_w)
  double antipode_flip = 0;    // f_z o S = f_{-z}
  double star_conjugate = 0;   // conj(f_z(a^*)) = f_{-conj(z)}(a)
  double unital = 0;           // f_z(1) = 1
  double multiplicative = 0;   // characters of A
  double unitary_on_line = 0;  // |f_{it}(b)| = 1 off the zero set

  double worst() const {
    return std::max({additivity, antipode_flip, star_conjugate, unital, multiplicative,
                     unitary_on_line});
  }
};

template <class K>
FamilyGrid family_grid_check(const StarAlgebra<K>& A, const Hopf<K>& H,
                             const ModularCharacter& fam) {
  const int n = A.dim;
  StarAlgebra<cd> Ac;
  Ac.dim = n;
  Ac.labels = A.labels;
  Ac.mult.resize(A.mult.size());
  for (size_t t = 0; t < A.mult.size(); ++t) Ac.mult[t] = scalar_traits<K>::to_cd(A.mult[t]);
  Ac.star = to_cd_mat(A.star);
  if (A.unit) Ac.unit = to_cd_vec(*A.unit);
  Hopf<cd> Hc;
  Hc.delta = to_cd_mat(H.delta);
  Hc.epsilon.coeffs = to_cd_vec(H.epsilon.coeffs);
  Hc.antipode = to_cd_mat(H.antipode);

  FamilyGrid g;
  const cd grid[] = {cd{1, 0}, cd{-1, 0}, cd{0, 1}, cd{0, -1}, cd{0.5, 0}, cd{0, 0.5}};
  for (cd z : grid) {
    Functional<cd> fz = fam.at(z);
    // multiplicative and unital
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cd d = fz(Ac.multiply(Ac.basis_vector(i), Ac.basis_vector(j))) -
               fz.coeffs[i] * fz.coeffs[j];
        g.multiplicative = std::max(g.multiplicative, std::abs(d));
      }
    if (Ac.unit) g.unital = std::max(g.unital, std::abs(fz(*Ac.unit) - cd{1, 0}));
    // f_z o S = f_{-z}
    Functional<cd> fmz = fam.at(-z);
    for (int i = 0; i < n; ++i) {
      cd lhs = fz(matvec(Hc.antipode, Ac.basis_vector(i)));
      g.antipode_flip = std::max(g.antipode_flip, std::abs(lhs - fmz.coeffs[i]));
    }
    // conj(f_z(a^*)) = f_{-conj(z)}(a)
    Functional<cd> fmzc = fam.at(-std::conj(z));
    for (int i = 0; i < n; ++i) {
      cd lhs = std::conj(fz(Ac.star_of(Ac.basis_vector(i))));
      g.star_conjugate = std::max(g.star_conjugate, std::abs(lhs - fmzc.coeffs[i]));
    }
    for (cd w : grid) {
      Functional<cd> fw = fam.at(w), fzw = fam.at(z + w);
      Functional<cd> conv = convolve(Hc, fz, fw);
      for (int i = 0; i < n; ++i)
        g.additivity = std::max(g.additivity, std::abs(conv.coeffs[i] - fzw.coeffs[i]));
    }
  }
  for (double tt : {0.3, 1.0, -0.7}) {
    Functional<cd> fit = fam.at(cd{0, tt});
    for (int i = 0; i < n; ++i)
      if (!fam.zero_set[i])
        g.unitary_on_line = std::max(
            g.unitary_on_line, std::abs(std::abs(fit.coeffs[i] / fam.eps[i]) - 1.0));
  }
  return g;
}

// --- modular flow -----------------------------------------------------------------

/// sigma_t as a matrix on coordinates: b_j -> f_{-it} * b_j * f_{-it}.
template <class K>
Mat<cd> sigma_t(const StarAlgebra<K>& A, const Hopf<K>& H, const ModularCharacter& fam,
                double t) {
  const int n = A.dim;
  Hopf<cd> Hc;
  Hc.delta = to_cd_mat(H.delta);
  Hc.epsilon.coeffs = to_cd_vec(H.epsilon.coeffs);
  Hc.antipode = to_cd_mat(H.antipode);
  StarAlgebra<cd> Ac;
  Ac.dim = n;
  Ac.mult.resize(A.mult.size());
  for (size_t s = 0; s < A.mult.size(); ++s) Ac.mult[s] = scalar_traits<K>::to_cd(A.mult[s]);
  Functional<cd> f = fam.at(cd{0, -t});
  Mat<cd> M(n, n);
  for (int j = 0; j < n; ++j) {
    Vec<cd> col = sandwich(Hc, f, Ac.basis_vector(j), f);
    for (int k = 0; k < n; ++k) M(k, j) = col[k];
  }
  return M;
}

struct FlowReport {
  double family_residual = 0;       // conditions 4-5 at the solution
  FamilyGrid grid;                  // conditions 2-3 and friends
  double sigma_automorphism = 0;    // *-homomorphism property of sigma_t
  double sigma_group_law = 0;       // sigma_{s+t} = sigma_s sigma_t, sigma_0 = id
  double phi_invariance = 0;        // phi o sigma_t = phi
  double flow_group_law = 0;        // F_{s+t} = F_s F_t and same for E
  double flow_unitary = 0;
  double flow_commute = 0;          // F_t E_s = E_s F_t
  double flow_fixes_lambda_unit = 0;
  double v_implements_sigma = 0;    // V_t pi(a) V_t^* = pi(sigma_t(a))
  double w_slice_cross_check = 0;   // F_t = (f_{it} x id)(W), E_t from W_op
  double kms = 0;                   // phi(ab) = phi(b (f_1 * a * f_1))
  bool tracial = false;
  bool mu_trivial = false;
  bool rho_trivial = false;
};

/// Unitaries of the modular flow in GNS coordinates.
template <class K>
struct FlowUnitaries {
  Mat<cd> F, E, V;
};

template <class K>
FlowUnitaries<K> flow_unitaries(const Pipeline<K>& p, const ModularCharacter& fam, double t) {
  const int n = p.dim();
  Hopf<cd> Hc;
  Hc.delta = to_cd_mat(p.H().delta);
  Hc.epsilon.coeffs = to_cd_vec(p.H().epsilon.coeffs);
  Hc.antipode = to_cd_mat(p.H().antipode);
  Functional<cd> f = fam.at(cd{0, -t});  // f_{-it}
  Mat<cd> MF(n, n), ME(n, n);
  for (int j = 0; j < n; ++j) {
    Vec<cd> bj(n, cd{0, 0});
    bj[j] = 1.0;
    Vec<cd> right = elt_conv_right(Hc, bj, f);  // a * f_{-it}
    Vec<cd> left = elt_conv_left(Hc, bj, f);    // f_{-it} * a
    for (int k = 0; k < n; ++k) {
      MF(k, j) = right[k];
      ME(k, j) = left[k];
    }
  }
  Mat<cd> C = to_cd_mat(p.gns.lambda), Ci = to_cd_mat(p.gns.lambda_inv);
  FlowUnitaries<K> out;
  out.F = matmul(matmul(C, MF), Ci);
  out.E = matmul(matmul(C, ME), Ci);
  out.V = matmul(out.F, out.E);
  return out;
}

template <class K>
double kms_residual(const StarAlgebra<K>& A, const Hopf<K>& H, const Functional<K>& phi,
                    const ModularCharacter& fam, int samples, uint64_t seed) {
  const int n = A.dim;
  StarAlgebra<cd> Ac;
  Ac.dim = n;
  Ac.mult.resize(A.mult.size());
  for (size_t s = 0; s < A.mult.size(); ++s) Ac.mult[s] = scalar_traits<K>::to_cd(A.mult[s]);
  Hopf<cd> Hc;
  Hc.delta = to_cd_mat(H.delta);
  Hc.epsilon.coeffs = to_cd_vec(H.epsilon.coeffs);
  Hc.antipode = to_cd_mat(H.antipode);
  Functional<cd> phic;
  phic.coeffs = to_cd_vec(phi.coeffs);
  Functional<cd> f1 = fam.at(cd{1, 0});

  rng r(seed);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    Vec<cd> a = random_element(Ac, r), b = random_element(Ac, r);
    cd lhs = phic(Ac.multiply(a, b));
    cd rhs = phic(Ac.multiply(b, sandwich(Hc, f1, a, f1)));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

/// Full modular suite on an assembled pipeline.
template <class K>
FlowReport run_modular_suite(const Pipeline<K>& p, const std::vector<double>& t_grid,
                             int samples, uint64_t seed) {
  FlowReport rep;
  const auto& A = p.A();
  const auto& H = p.H();
  const int n = p.dim();

  ModularCharacter fam = solve_modular_family(A, H, p.qg.haar);
  rep.family_residual = fam.residual;
  rep.grid = family_grid_check(A, H, fam);

  rep.mu_trivial = true;
  for (double m : fam.mu) rep.mu_trivial = rep.mu_trivial && std::abs(m - 1.0) < 1e-9;
  rep.rho_trivial = diff_norm(to_cd_mat(p.qg.haar.rho), Mat<cd>::identity(n)) < 1e-10;
  rep.tracial = true;
  for (int i = 0; i < n && rep.tracial; ++i)
    for (int j = 0; j < n; ++j) {
      cd d = scalar_traits<K>::to_cd(
          p.qg.haar.phi(A.multiply(A.basis_vector(i), A.basis_vector(j))) -
          p.qg.haar.phi(A.multiply(A.basis_vector(j), A.basis_vector(i))));
      if (std::abs(d) > 1e-10) { rep.tracial = false; break; }
    }

  StarAlgebra<cd> Ac;
  Ac.dim = n;
  Ac.labels = A.labels;
  Ac.mult.resize(A.mult.size());
  for (size_t s = 0; s < A.mult.size(); ++s) Ac.mult[s] = scalar_traits<K>::to_cd(A.mult[s]);
  Ac.star = to_cd_mat(A.star);
  Ac.unit = to_cd_vec(*A.unit);
  Functional<cd> phic;
  phic.coeffs = to_cd_vec(p.qg.haar.phi.coeffs);

  // sigma properties over the grid
  for (double t : t_grid) {
    Mat<cd> st = sigma_t(A, H, fam, t);
    for (int i = 0; i < n; ++i) {
      // *-automorphism
      Vec<cd> lhs = matvec(st, Ac.star_of(Ac.basis_vector(i)));
      Vec<cd> rhs = Ac.star_of(matvec(st, Ac.basis_vector(i)));
      for (int k = 0; k < n; ++k)
        rep.sigma_automorphism = std::max(rep.sigma_automorphism, std::abs(lhs[k] - rhs[k]));
      for (int j = 0; j < n; ++j) {
        Vec<cd> pl = matvec(st, Ac.multiply(Ac.basis_vector(i), Ac.basis_vector(j)));
        Vec<cd> pr = Ac.multiply(matvec(st, Ac.basis_vector(i)), matvec(st, Ac.basis_vector(j)));
        for (int k = 0; k < n; ++k)
          rep.sigma_automorphism = std::max(rep.sigma_automorphism, std::abs(pl[k] - pr[k]));
      }
      // phi invariance
      cd d = phic(matvec(st, Ac.basis_vector(i))) - phic.coeffs[i];
      rep.phi_invariance = std::max(rep.phi_invariance, std::abs(d));
    }
  }
  {
    Mat<cd> s0 = sigma_t(A, H, fam, 0.0);
    rep.sigma_group_law = diff_norm(s0, Mat<cd>::identity(n));
    double s = t_grid.size() > 0 ? t_grid[0] : 0.3;
    double t = t_grid.size() > 1 ? t_grid[1] : 0.5;
    rep.sigma_group_law = std::max(
        rep.sigma_group_law,
        diff_norm(sigma_t(A, H, fam, s + t), matmul(sigma_t(A, H, fam, s), sigma_t(A, H, fam, t))));
  }

  // flow unitaries
  double s = t_grid.size() > 0 ? t_grid[0] : 0.3;
  double t = t_grid.size() > 1 ? t_grid[1] : 0.5;
  auto Us = flow_unitaries(p, fam, s);
  auto Ut = flow_unitaries(p, fam, t);
  auto Ust = flow_unitaries(p, fam, s + t);
  rep.flow_group_law = std::max(diff_norm(Ust.F, matmul(Us.F, Ut.F)),
                                diff_norm(Ust.E, matmul(Us.E, Ut.E)));
  rep.flow_unitary = std::max({unitarity_residual(Us.F), unitarity_residual(Us.E),
                               unitarity_residual(Ut.F), unitarity_residual(Ut.E)});
  rep.flow_commute = std::max(diff_norm(matmul(Us.F, Ut.E), matmul(Ut.E, Us.F)),
                              diff_norm(Ut.V, matmul(Ut.E, Ut.F)));
  {
    Vec<cd> l1 = to_cd_vec(p.gns.lambda_of(*A.unit));
    Vec<cd> img = matvec(Ut.F, l1);
    double w = 0;
    for (int k = 0; k < n; ++k) w = std::max(w, std::abs(img[k] - l1[k]));
    rep.flow_fixes_lambda_unit = w;
  }
  {
    Mat<cd> st = sigma_t(A, H, fam, t);
    double w = 0;
    for (int i = 0; i < n; ++i) {
      Mat<cd> lhs = matmul(matmul(Ut.V, to_cd_mat(p.gns.rep[i])), adjoint(Ut.V));
      Mat<cd> rhs(n, n);
      for (int k = 0; k < n; ++k)
        if (std::abs(st(k, i)) > 0) rhs = rhs + to_cd_mat(p.gns.rep[k]) * st(k, i);
      w = std::max(w, diff_norm(lhs, rhs));
    }
    rep.v_implements_sigma = w;
  }
  // W-slice cross-check: F_t = (f_it x id)(W) and E_t = (f_it x id)(W_op)
  {
    auto expF = expand_first_leg(to_cd_mat(p.W.W), [&] {
      std::vector<Mat<cd>> reps;
      for (auto& r : p.gns.rep) reps.push_back(to_cd_mat(r));
      return reps;
    }());
    Functional<cd> fit = fam.at(cd{0, t});
    Mat<cd> Ft_slice = slice_first_leg(expF, fit);
    rep.w_slice_cross_check = diff_norm(Ft_slice, Ut.F);
    auto op = build_opposite(Ac, [&] {
      Hopf<cd> Hc;
      Hc.delta = to_cd_mat(H.delta);
      Hc.epsilon.coeffs = to_cd_vec(H.epsilon.coeffs);
      Hc.antipode = to_cd_mat(H.antipode);
      return Hc;
    }(), [&] {
      GnsPair<cd> g;
      g.gram = to_cd_mat(p.gns.gram);
      g.lambda = to_cd_mat(p.gns.lambda);
      g.lambda_inv = to_cd_mat(p.gns.lambda_inv);
      for (auto& r : p.gns.rep) g.rep.push_back(to_cd_mat(r));
      return g;
    }());
    auto expE = expand_first_leg(op.W_op.W, [&] {
      std::vector<Mat<cd>> reps;
      for (auto& r : p.gns.rep) reps.push_back(to_cd_mat(r));
      return reps;
    }());
    Mat<cd> Et_slice = slice_first_leg(expE, fit);
    rep.w_slice_cross_check = std::max(rep.w_slice_cross_check, diff_norm(Et_slice, Ut.E));
  }

  rep.kms = kms_residual(A, H, p.qg.haar.phi, fam, samples, seed);
  return rep;
}

}  // namespace aqg
