#pragma once

#include <map>

#include "aqg/groups.hpp"

namespace aqg {

/// Top eigenpair of a symmetric operator given through its matvec.
struct TopEigen {
  double value = 0;
  std::vector<double> vector;
  int matvecs = 0;
  double residual = 0;  // || A v - value v ||
};

/// Restarted Lanczos with full reorthogonalization inside the window,
/// deterministic start vector supplied by the caller. Relative accuracy on
/// the top eigenvalue is driven to rel_tol.
TopEigen lanczos_top(const std::function<void(const double*, double*)>& matvec, size_t dim,
                     const std::vector<double>& start, double rel_tol = 1e-10);

/// lambda_R: top eigenvalue of the ball-compressed averaging operator.
/// Certified lower bound for ||pi(h)||; requires symmetric h.
double rayleigh_bound(const CayleyBall& ball, const AveragingElement& h, int R,
                      std::vector<double>* eigenvector = nullptr);

/// phi(h^(2n))^(1/2n) via exact integer-weighted word counting. Uses the
/// generic sparse self-convolution, with a radial shortcut for free groups on
/// their standard generators (the sparse support would blow past any cap).
double moment_bound_exact(const GroupOracle& G, const AveragingElement& h, int n,
                          size_t support_cap = kDefaultBallCap);

/// Same bound computed in floating point through the sparse convolution; the
/// second path of the exactness cross-check.
double moment_bound_float(const GroupOracle& G, const AveragingElement& h, int n,
                          size_t support_cap = kDefaultBallCap);

struct FolnerData {
  std::vector<double> vector;                  // on the ball, unit norm, Perron sign
  std::map<std::string, double> residuals;     // per generator ||pi(s)v - v||
  double eigen_identity_residual = 0;          // sum_s w_s(1 - <pi(s)v, v>) vs 1 - lambda
  double lambda = 0;
};

FolnerData folner_vector(const CayleyBall& ball, const AveragingElement& h);

struct SpectralReport {
  std::string group;
  std::vector<std::string> generator_labels;
  std::vector<std::pair<int, double>> rayleigh_bounds;  // (R, lambda_R)
  std::vector<std::pair<int, double>> moment_bounds;    // (n, phi(h^2n)^(1/2n))
  std::map<std::string, double> folner_residuals;
  double eigen_identity_residual = 0;
  double verdict_gap = 1.0;  // 1 - best lower bound; trend data, not a verdict
  size_t ball_elements = 0;

  double best_bound() const {
    double b = 0;
    for (auto& [r, v] : rayleigh_bounds) b = std::max(b, v);
    for (auto& [n, v] : moment_bounds) b = std::max(b, v);
    return b;
  }
};

SpectralReport amen_probe(const GroupOracle& G, const AveragingElement& h, int R_max,
                          int n_max, size_t cap = kDefaultBallCap);

}  // namespace aqg
