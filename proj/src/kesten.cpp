#include "aqg/kesten.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <unordered_map>

namespace aqg {

// --- Lanczos -------------------------------------------------------------------------

TopEigen lanczos_top(const std::function<void(const double*, double*)>& matvec, size_t dim,
                     const std::vector<double>& start, double rel_tol) {
  TopEigen out;
  if (dim == 0) throw error(errc::dimension_mismatch, "empty operator");
  if (dim == 1) {
    double x = 1, y = 0;
    matvec(&x, &y);
    out.value = y;
    out.vector = {1.0};
    out.matvecs = 1;
    return out;
  }

  const int window = dim > 500000 ? 24 : int(std::min<size_t>(dim, 48));
  const int max_restarts = 400;

  std::vector<double> v = start;
  auto normalize = [&](std::vector<double>& x) {
    double n = 0;
    for (double c : x) n += c * c;
    n = std::sqrt(n);
    if (n == 0) throw error(errc::no_solution, "zero start vector");
    for (double& c : x) c /= n;
    return n;
  };
  normalize(v);

  std::vector<std::vector<double>> Q;
  std::vector<double> alpha, beta;
  std::vector<double> w(dim);
  double prev = -std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < max_restarts; ++restart) {
    Q.assign(1, v);
    alpha.clear();
    beta.clear();
    bool breakdown = false;
    for (int j = 0; j < window; ++j) {
      matvec(Q[j].data(), w.data());
      ++out.matvecs;
      double a = 0;
      for (size_t t = 0; t < dim; ++t) a += w[t] * Q[j][t];
      alpha.push_back(a);
      // full reorthogonalization inside the window, run twice
      for (int pass = 0; pass < 2; ++pass)
        for (auto& q : Q) {
          double c = 0;
          for (size_t t = 0; t < dim; ++t) c += w[t] * q[t];
          for (size_t t = 0; t < dim; ++t) w[t] -= c * q[t];
        }
      double b = 0;
      for (double c : w) b += c * c;
      b = std::sqrt(b);
      if (b < 1e-14) { breakdown = true; break; }
      beta.push_back(b);
      if (j + 1 < window) {
        std::vector<double> q(dim);
        for (size_t t = 0; t < dim; ++t) q[t] = w[t] / b;
        Q.push_back(std::move(q));
      }
    }

    const int m = int(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    int top = m - 1;  // ascending order
    double theta = es.eigenvalues()(top);
    std::vector<double> ritz(dim, 0.0);
    for (int j = 0; j < int(Q.size()); ++j) {
      double y = es.eigenvectors()(j, top);
      for (size_t t = 0; t < dim; ++t) ritz[t] += y * Q[j][t];
    }
    normalize(ritz);

    matvec(ritz.data(), w.data());
    ++out.matvecs;
    double res = 0;
    for (size_t t = 0; t < dim; ++t) {
      double d = w[t] - theta * ritz[t];
      res += d * d;
    }
    res = std::sqrt(res);
    out.value = theta;
    out.vector = ritz;
    out.residual = res;
    double scale = std::max(1.0, std::abs(theta));
    if ((res <= rel_tol * scale && std::abs(theta - prev) <= rel_tol * scale) || breakdown)
      return out;
    prev = theta;
    v = std::move(ritz);
  }
  return out;  // best effort after max_restarts; residual is reported
}

// --- Rayleigh bounds -------------------------------------------------------------------

double rayleigh_bound(const CayleyBall& ball, const AveragingElement& h, int R,
                      std::vector<double>* eigenvector) {
  if (!h.symmetric)
    throw error(errc::not_symmetric, "rayleigh bound needs a symmetric averaging element");
  size_t m = ball.ball_size(R);
  std::vector<double> wts(h.support.size());
  for (size_t s = 0; s < wts.size(); ++s) wts[s] = h.weight(s);

  auto matvec = [&](const double* x, double* y) {
    for (size_t i = 0; i < m; ++i) y[i] = 0;
    for (size_t s = 0; s < h.support.size(); ++s) {
      const auto& act = ball.action[s];
      double ws = wts[s];
      for (size_t i = 0; i < m; ++i) {
        int32_t j = act[i];
        if (j >= 0 && size_t(j) < m) y[j] += ws * x[i];
      }
    }
  };
  // deterministic start: uniform on the ball
  std::vector<double> start(m, 1.0);
  TopEigen t = lanczos_top(matvec, m, start);
  if (eigenvector) *eigenvector = t.vector;
  return t.value;
}

// --- moments ----------------------------------------------------------------------------

namespace {

bool is_free_standard(const GroupOracle& G, const AveragingElement& h, int& k_out) {
  if (G.name.rfind("F_", 0) != 0) return false;
  int k = std::atoi(G.name.c_str() + 2);
  if (int(h.support.size()) != 2 * k) return false;
  for (auto& w : h.weight_num)
    if (w != h.weight_num[0]) return false;
  // support must be exactly the single letters
  std::vector<bool> seen(2 * k + 1, false);
  for (auto& g : h.support) {
    if (g.size() != 1) return false;
    int v = int8_t(g[0]);
    int idx = v > 0 ? v : k - v;  // 1..k then k+1..2k
    if (idx < 1 || idx > 2 * k || seen[idx]) return false;
    seen[idx] = true;
  }
  k_out = k;
  return true;
}

/// Return-count route for F_k with uniform weights on the standard letters:
/// w(m, r) counts length-m words evaluating to a fixed reduced word of length
/// r. Radial transitivity of the tree makes this exact.
long double free_radial_moment(int k, int n) {
  const int q = 2 * k;  // vertex degree
  std::vector<long long> w(n + 2, 0), nx(n + 2, 0);
  w[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int r = 0; r <= n + 1; ++r) nx[r] = 0;
    for (int r = 0; r <= m; ++r) {
      if (w[r] == 0) continue;
      // step away from the root
      long long away = w[r];
      if (r + 1 <= n + 1) {
        if (nx[r + 1] > INT64_MAX - away) throw error(errc::overflow, "radial count overflow");
        nx[r + 1] += away;
      }
      // toward the root: q - 1 children below when r >= 2, q at the root's level
      if (r >= 1) {
        long long in_ways = (r == 1) ? q : q - 1;
        long long add = w[r];
        if (add > INT64_MAX / in_ways) throw error(errc::overflow, "radial count overflow");
        add *= in_ways;
        if (nx[r - 1] > INT64_MAX - add) throw error(errc::overflow, "radial count overflow");
        nx[r - 1] += add;
      }
    }
    std::swap(w, nx);
  }
  // sum over spheres of w(n, r)^2 * |sphere r|
  unsigned __int128 total = 0;
  unsigned __int128 sphere = 1;
  for (int r = 0; r <= n; ++r) {
    if (w[r]) {
      unsigned __int128 term = (unsigned __int128)w[r] * (unsigned __int128)w[r];
      if (term > ~(unsigned __int128)0 / sphere)
        throw error(errc::overflow, "radial count overflow");
      total += term * sphere;
    }
    sphere = (r == 0) ? (unsigned __int128)q : sphere * (q - 1);
  }
  return (long double)total;
}

}  // namespace

static double moments_from_counts(long double sum_sq, long long den, int n) {
  // phi(h^(2n)) = sum_sq / den^(2n); return the 2n-th root
  long double log_phi = std::log(sum_sq) - 2.0L * n * std::log((long double)den);
  return double(std::exp(log_phi / (2.0L * n)));
}

double moment_bound_exact(const GroupOracle& G, const AveragingElement& h, int n,
                          size_t support_cap) {
  if (!h.symmetric)
    throw error(errc::not_symmetric, "moment bound needs a symmetric averaging element");
  int k = 0;
  if (is_free_standard(G, h, k)) {
    long double sum_sq = free_radial_moment(k, n);
    return moments_from_counts(sum_sq, h.weight_den, n);
  }

  // generic sparse self-convolution with integer numerators
  std::unordered_map<std::string, long long> u;
  u.emplace(G.identity(), 1);
  for (int step = 0; step < n; ++step) {
    std::unordered_map<std::string, long long> nx;
    nx.reserve(u.size() * 2);
    for (auto& [g, c] : u)
      for (size_t s = 0; s < h.support.size(); ++s) {
        long long add;
        if (__builtin_mul_overflow(c, h.weight_num[s], &add))
          throw error(errc::overflow, "moment count overflow; reduce n");
        auto [it, fresh] = nx.try_emplace(G.multiply(h.support[s], g), 0);
        if (__builtin_add_overflow(it->second, add, &it->second))
          throw error(errc::overflow, "moment count overflow; reduce n");
        if (fresh && nx.size() > support_cap)
          throw error(errc::ball_too_large, "moment support exceeds cap");
      }
    u = std::move(nx);
  }
  unsigned __int128 sum_sq = 0;
  for (auto& [g, c] : u) sum_sq += (unsigned __int128)c * (unsigned __int128)c;
  return moments_from_counts((long double)sum_sq, h.weight_den, n);
}

double moment_bound_float(const GroupOracle& G, const AveragingElement& h, int n,
                          size_t support_cap) {
  if (!h.symmetric)
    throw error(errc::not_symmetric, "moment bound needs a symmetric averaging element");
  std::unordered_map<std::string, double> u;
  u.emplace(G.identity(), 1.0);
  for (int step = 0; step < n; ++step) {
    std::unordered_map<std::string, double> nx;
    nx.reserve(u.size() * 2);
    for (auto& [g, c] : u)
      for (size_t s = 0; s < h.support.size(); ++s) {
        auto [it, fresh] = nx.try_emplace(G.multiply(h.support[s], g), 0.0);
        it->second += c * h.weight(s);
        if (fresh && nx.size() > support_cap)
          throw error(errc::ball_too_large, "moment support exceeds cap");
      }
    u = std::move(nx);
  }
  long double sum_sq = 0;
  for (auto& [g, c] : u) sum_sq += (long double)c * c;
  return double(std::exp(std::log(sum_sq) / (2.0L * n)));
}

// --- Folner data -----------------------------------------------------------------------

FolnerData folner_vector(const CayleyBall& ball, const AveragingElement& h) {
  FolnerData out;
  out.lambda = rayleigh_bound(ball, h, ball.radius, &out.vector);
  size_t m = out.vector.size();

  // Perron sign: dominant entry positive
  size_t arg = 0;
  for (size_t i = 1; i < m; ++i)
    if (std::abs(out.vector[i]) > std::abs(out.vector[arg])) arg = i;
  if (out.vector[arg] < 0)
    for (auto& c : out.vector) c = -c;

  double identity_sum = 0;
  for (size_t s = 0; s < h.support.size(); ++s) {
    const auto& act = ball.action[s];
    // <pi(s)v, v> within the ball; the complement contributes the escaping mass
    double inner = 0, escape_out = 0, escape_in = 0;
    std::vector<char> hit(m, 0);
    for (size_t i = 0; i < m; ++i) {
      int32_t j = act[i];
      if (j >= 0 && size_t(j) < m) {
        inner += out.vector[i] * out.vector[j];
        hit[j] = 1;
      } else {
        escape_out += out.vector[i] * out.vector[i];
      }
    }
    for (size_t j = 0; j < m; ++j)
      if (!hit[j]) escape_in += out.vector[j] * out.vector[j];
    // || pi(s)v - v ||^2 = sum_{sx in B} (v_x - v_sx)^2 + escaping terms
    double norm2 = escape_out + escape_in;
    for (size_t i = 0; i < m; ++i) {
      int32_t j = act[i];
      if (j >= 0 && size_t(j) < m) {
        double d = out.vector[i] - out.vector[j];
        norm2 += d * d;
      }
    }
    out.residuals[h.labels[s]] = std::sqrt(std::max(0.0, norm2));
    identity_sum += h.weight(s) * (1.0 - inner);
  }
  out.eigen_identity_residual = std::abs(identity_sum - (1.0 - out.lambda));
  return out;
}

// --- orchestration -----------------------------------------------------------------------

SpectralReport amen_probe(const GroupOracle& G, const AveragingElement& h, int R_max,
                          int n_max, size_t cap) {
  SpectralReport rep;
  rep.group = G.name;
  rep.generator_labels = h.labels;

  CayleyBall ball = build_ball(G, h, R_max, cap);
  rep.ball_elements = ball.size();
  for (int R = 1; R <= R_max; ++R) {
    if (R > 1 && ball.ball_size(R) == ball.ball_size(R - 1)) {
      // ball saturated (finite group); the bound repeats
      rep.rayleigh_bounds.emplace_back(R, rep.rayleigh_bounds.back().second);
      continue;
    }
    rep.rayleigh_bounds.emplace_back(R, rayleigh_bound(ball, h, R));
  }
  for (int n = 1; n <= n_max; ++n) {
    try {
      rep.moment_bounds.emplace_back(n, moment_bound_exact(G, h, n, cap));
    } catch (const error& e) {
      if (e.code() == errc::ball_too_large || e.code() == errc::overflow) break;
      throw;
    }
  }
  FolnerData f = folner_vector(ball, h);
  rep.folner_residuals = f.residuals;
  rep.eigen_identity_residual = f.eigen_identity_residual;
  rep.verdict_gap = 1.0 - rep.best_bound();
  return rep;
}

}  // namespace aqg
