#include "aqg/corpus.hpp"

#include <cmath>

namespace aqg {

static void fill_inverses(FiniteGroup& G) {
  G.inv.assign(G.n, -1);
  for (int i = 0; i < G.n; ++i)
    for (int j = 0; j < G.n; ++j)
      if (G.mul(i, j) == 0) G.inv[i] = j;
}

FiniteGroup cyclic_group(int n) {
  FiniteGroup G;
  G.name = "z" + std::to_string(n);
  G.n = n;
  for (int i = 0; i < n; ++i) G.labels.push_back("g^" + std::to_string(i));
  G.labels[0] = "1";
  G.table.resize(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G.table[size_t(i) * n + j] = (i + j) % n;
  fill_inverses(G);
  return G;
}

FiniteGroup symmetric_group_3() {
  // permutations of {0,1,2} in a fixed listing
  const int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  const char* names[6] = {"e", "(01)", "(02)", "(12)", "(012)", "(021)"};
  FiniteGroup G;
  G.name = "s3";
  G.n = 6;
  for (auto* s : names) G.labels.push_back(s);
  G.table.resize(36);
  auto index_of = [&](const int p[3]) {
    for (int k = 0; k < 6; ++k)
      if (perms[k][0] == p[0] && perms[k][1] == p[1] && perms[k][2] == p[2]) return k;
    return -1;
  };
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      int comp[3];
      for (int t = 0; t < 3; ++t) comp[t] = perms[i][perms[j][t]];  // (g_i g_j)(t)
      G.table[size_t(i) * 6 + j] = index_of(comp);
    }
  fill_inverses(G);
  return G;
}

FiniteGroup dihedral_group_4() {
  // elements r^a s^b, a mod 4, b mod 2; s r s = r^-1
  FiniteGroup G;
  G.name = "d4";
  G.n = 8;
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 4; ++a) {
      std::string l = a == 0 && b == 0 ? "1" : "";
      if (a) l += "r" + (a > 1 ? std::string("^") + std::to_string(a) : "");
      if (b) l += "s";
      G.labels.push_back(l);
    }
  auto idx = [](int a, int b) { return b * 4 + a; };
  G.table.resize(64);
  for (int b1 = 0; b1 < 2; ++b1)
    for (int a1 = 0; a1 < 4; ++a1)
      for (int b2 = 0; b2 < 2; ++b2)
        for (int a2 = 0; a2 < 4; ++a2) {
          // (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + a2*(-1)^b1) s^(b1+b2)
          int a = ((a1 + (b1 ? 4 - a2 : a2)) % 4 + 4) % 4;
          int b = (b1 + b2) % 2;
          G.table[size_t(idx(a1, b1)) * 8 + idx(a2, b2)] = idx(a, b);
        }
  fill_inverses(G);
  return G;
}

FiniteGroup quaternion_group() {
  // elements s*u with sign s and axis u in {1, i, j, k}; index = sign*4 + axis
  FiniteGroup G;
  G.name = "q8";
  G.n = 8;
  const char* ax = "1ijk";
  for (int s = 0; s < 2; ++s)
    for (int u = 0; u < 4; ++u)
      G.labels.push_back(std::string(s ? "-" : "") + ax[u]);
  // axis product table and sign: i*j = k, j*k = i, k*i = j, x*x = -1
  auto axis_mul = [](int u, int v, int& sign) {
    sign = 0;
    if (u == 0) return v;
    if (v == 0) return u;
    if (u == v) { sign = 1; return 0; }
    // cyclic (1,2,3) = (i,j,k)
    int w = 6 - u - v;  // the remaining axis
    bool cyc = (u == 1 && v == 2) || (u == 2 && v == 3) || (u == 3 && v == 1);
    sign = cyc ? 0 : 1;
    return w;
  };
  G.table.resize(64);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int u1 = 0; u1 < 4; ++u1)
      for (int s2 = 0; s2 < 2; ++s2)
        for (int u2 = 0; u2 < 4; ++u2) {
          int extra;
          int u = axis_mul(u1, u2, extra);
          int s = (s1 + s2 + extra) % 2;
          G.table[size_t(s1 * 4 + u1) * 8 + (s2 * 4 + u2)] = s * 4 + u;
        }
  fill_inverses(G);
  return G;
}

FiniteGroup group_by_name(const std::string& name) {
  if (name == "z2") return cyclic_group(2);
  if (name == "z3") return cyclic_group(3);
  if (name == "z6") return cyclic_group(6);
  if (name == "s3") return symmetric_group_3();
  if (name == "d4") return dihedral_group_4();
  if (name == "q8") return quaternion_group();
  throw error(errc::schema, "unknown group " + name);
}

std::vector<std::string> corpus_group_names() {
  return {"z2", "z3", "z6", "s3", "d4", "q8"};
}

std::vector<std::string> corpus_entry_names() {
  std::vector<std::string> out;
  for (auto& g : corpus_group_names()) {
    out.push_back("c_" + g);
    out.push_back("k_" + g);
  }
  return out;
}

std::vector<Functional<cd>> cyclic_characters(int n) {
  std::vector<Functional<cd>> chars(n);
  const double tau = 6.283185307179586;
  for (int k = 0; k < n; ++k) {
    chars[k].coeffs.resize(n);
    for (int j = 0; j < n; ++j)
      chars[k].coeffs[j] = std::polar(1.0, tau * k * j / n);
  }
  return chars;
}

}  // namespace aqg
