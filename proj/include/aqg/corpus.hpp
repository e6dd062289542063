#pragma once

#include <string>
#include <vector>

#include "aqg/hopf.hpp"

namespace aqg {

/// Finite group as a multiplication table; element 0 is the identity.
struct FiniteGroup {
  std::string name;
  int n = 0;
  std::vector<std::string> labels;
  std::vector<int> table;  // table[i*n + j] = index of g_i g_j
  std::vector<int> inv;

  int mul(int i, int j) const { return table[size_t(i) * n + j]; }
};

FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_group_3();
FiniteGroup dihedral_group_4();   // order 8
FiniteGroup quaternion_group();   // order 8
FiniteGroup group_by_name(const std::string& name);  // z2 z3 z6 s3 d4 q8

std::vector<std::string> corpus_group_names();

/// Group algebra C(G): basis = group elements, Delta(x) = x (x) x.
template <class K>
std::pair<StarAlgebra<K>, Hopf<K>> group_algebra(const FiniteGroup& G) {
  const int n = G.n;
  StarAlgebra<K> A;
  A.dim = n;
  A.labels = G.labels;
  A.mult.assign(size_t(n) * n * n, scalar_traits<K>::zero());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.m(i, j, G.mul(i, j)) = scalar_traits<K>::one();
  A.star = Mat<K>(n, n);
  for (int i = 0; i < n; ++i) A.star(i, G.inv[i]) = scalar_traits<K>::one();
  Vec<K> u(n, scalar_traits<K>::zero());
  u[0] = scalar_traits<K>::one();
  A.unit = u;

  Hopf<K> H;
  H.delta = Mat<K>(n, n * n);
  for (int i = 0; i < n; ++i) H.delta(i, i * n + i) = scalar_traits<K>::one();
  H.epsilon.coeffs.assign(n, scalar_traits<K>::one());
  H.antipode = Mat<K>(n, n);
  for (int j = 0; j < n; ++j) H.antipode(G.inv[j], j) = scalar_traits<K>::one();
  return {A, H};
}

/// Function algebra K(G): pointwise operations, Delta(f)(x, y) = f(xy).
template <class K>
std::pair<StarAlgebra<K>, Hopf<K>> function_algebra(const FiniteGroup& G) {
  const int n = G.n;
  StarAlgebra<K> A;
  A.dim = n;
  A.labels.reserve(n);
  for (auto& l : G.labels) A.labels.push_back("e[" + l + "]");
  A.mult.assign(size_t(n) * n * n, scalar_traits<K>::zero());
  for (int i = 0; i < n; ++i) A.m(i, i, i) = scalar_traits<K>::one();
  A.star = Mat<K>::identity(n);
  A.unit = Vec<K>(n, scalar_traits<K>::one());

  Hopf<K> H;
  H.delta = Mat<K>(n, n * n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) H.delta(G.mul(u, v), u * n + v) = scalar_traits<K>::one();
  H.epsilon.coeffs.assign(n, scalar_traits<K>::zero());
  H.epsilon.coeffs[0] = scalar_traits<K>::one();
  H.antipode = Mat<K>(n, n);
  for (int j = 0; j < n; ++j) H.antipode(G.inv[j], j) = scalar_traits<K>::one();
  return {A, H};
}

/// Characters of the cyclic group algebra C(Z_n), as functionals.
std::vector<Functional<cd>> cyclic_characters(int n);

/// Fully assembled quantum group: algebra, Hopf data, Haar data.
template <class K>
struct QG {
  std::string name;
  StarAlgebra<K> A;
  Hopf<K> H;
  HaarData<K> haar;
  haar_normalization norm = haar_normalization::unit;
};

template <class K>
QG<K> assemble(std::string name, StarAlgebra<K> A, Hopf<K> H,
               haar_normalization norm = haar_normalization::unit) {
  QG<K> qg;
  qg.name = std::move(name);
  qg.A = std::move(A);
  qg.H = std::move(H);
  qg.norm = norm;
  qg.haar = solve_haar(qg.A, qg.H, norm);
  return qg;
}

/// Shipped corpus entry by name: "c_<group>" or "k_<group>".
template <class K>
QG<K> corpus_entry(const std::string& entry) {
  bool fn = entry.rfind("k_", 0) == 0;
  bool grp = entry.rfind("c_", 0) == 0;
  if (!fn && !grp) throw error(errc::schema, "unknown corpus entry " + entry);
  FiniteGroup G = group_by_name(entry.substr(2));
  if (grp) {
    auto [A, H] = group_algebra<K>(G);
    return assemble(entry, std::move(A), std::move(H), haar_normalization::unit);
  }
  auto [A, H] = function_algebra<K>(G);
  return assemble(entry, std::move(A), std::move(H), haar_normalization::discrete);
}

std::vector<std::string> corpus_entry_names();

}  // namespace aqg
