#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "aqg/corpus.hpp"
#include "aqg/error.hpp"

namespace aqg {

/// Abstract group arithmetic on opaque canonical forms (byte strings with
/// equality/hash). Shipped oracles: Z^d, free groups F_k, finite groups from
/// multiplication tables, and direct products.
struct GroupOracle {
  std::string name;
  std::function<std::string()> identity;
  std::function<std::string(const std::string&, const std::string&)> multiply;
  std::function<std::string(const std::string&)> invert;
  std::function<std::string(const std::string&)> label;  // printable form

  bool is_identity(const std::string& g) const { return g == identity(); }
};

GroupOracle zd_oracle(int d);
GroupOracle free_oracle(int k);
GroupOracle finite_oracle(const FiniteGroup& G);
GroupOracle product_oracle(const GroupOracle& A, const GroupOracle& B);

/// Standard symmetric generator sets (element, printable label).
std::vector<std::pair<std::string, std::string>> zd_standard_generators(int d);
std::vector<std::pair<std::string, std::string>> free_standard_generators(int k);

/// Normalized averaging element: sum of w_s s with w_s > 0 summing to 1.
/// Weights are kept as integers over a common denominator so the moment path
/// can stay exact.
struct AveragingElement {
  std::vector<std::string> support;
  std::vector<std::string> labels;
  std::vector<long long> weight_num;
  long long weight_den = 1;
  bool symmetric = false;

  double weight(size_t s) const { return double(weight_num[s]) / double(weight_den); }
};

AveragingElement uniform_averaging(const GroupOracle& G,
                                   const std::vector<std::pair<std::string, std::string>>& gens);

/// Checks S = S^-1 with matching weights.
bool averaging_is_symmetric(const GroupOracle& G, const AveragingElement& h);

/// BFS ball of radius R with sparse generator actions. Elements are listed in
/// BFS order, so the prefix up to sphere_start[r+1] is exactly the r-ball.
struct CayleyBall {
  int radius = 0;
  std::vector<std::string> elements;
  std::vector<int> distance;
  std::vector<int> sphere_start;             // sphere_start[r] = first index at distance r
  std::vector<std::vector<int32_t>> action;  // action[s][i] = index of g_s x_i, or -1

  size_t size() const { return elements.size(); }
  size_t ball_size(int r) const {
    if (r + 1 < int(sphere_start.size())) return sphere_start[r + 1];
    return elements.size();
  }
};

inline constexpr size_t kDefaultBallCap = 2'000'000;

CayleyBall build_ball(const GroupOracle& G, const AveragingElement& h, int radius,
                      size_t cap = kDefaultBallCap);

/// Consistency probe: stored actions against oracle arithmetic on sampled pairs.
double ball_consistency_residual(const GroupOracle& G, const AveragingElement& h,
                                 const CayleyBall& ball, int samples, uint64_t seed);

}  // namespace aqg
