#include "aqg/groups.hpp"

#include <cstring>
#include <unordered_map>

#include "aqg/rng.hpp"

namespace aqg {

// --- Z^d: little-endian int32 per coordinate -------------------------------------

static std::string zd_pack(const std::vector<int32_t>& v) {
  std::string s(v.size() * 4, '\0');
  std::memcpy(s.data(), v.data(), s.size());
  return s;
}

static std::vector<int32_t> zd_unpack(const std::string& s) {
  std::vector<int32_t> v(s.size() / 4);
  std::memcpy(v.data(), s.data(), s.size());
  return v;
}

GroupOracle zd_oracle(int d) {
  GroupOracle G;
  G.name = "Z^" + std::to_string(d);
  G.identity = [d]() { return zd_pack(std::vector<int32_t>(d, 0)); };
  G.multiply = [](const std::string& a, const std::string& b) {
    auto x = zd_unpack(a), y = zd_unpack(b);
    for (size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return zd_pack(x);
  };
  G.invert = [](const std::string& a) {
    auto x = zd_unpack(a);
    for (auto& c : x) c = -c;
    return zd_pack(x);
  };
  G.label = [](const std::string& a) {
    auto x = zd_unpack(a);
    std::string out = "(";
    for (size_t i = 0; i < x.size(); ++i)
      out += (i ? "," : "") + std::to_string(x[i]);
    return out + ")";
  };
  return G;
}

std::vector<std::pair<std::string, std::string>> zd_standard_generators(int d) {
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 0; i < d; ++i)
    for (int sgn : {1, -1}) {
      std::vector<int32_t> v(d, 0);
      v[i] = sgn;
      out.emplace_back(zd_pack(v), (sgn > 0 ? "+e" : "-e") + std::to_string(i + 1));
    }
  return out;
}

// --- free group F_k: reduced words, one signed byte per letter --------------------

GroupOracle free_oracle(int k) {
  GroupOracle G;
  G.name = "F_" + std::to_string(k);
  G.identity = []() { return std::string(); };
  G.multiply = [](const std::string& a, const std::string& b) {
    size_t i = a.size(), j = 0;
    // cancel at the junction
    while (i > 0 && j < b.size() && int8_t(a[i - 1]) == -int8_t(b[j])) { --i; ++j; }
    std::string out = a.substr(0, i);
    out.append(b, j, std::string::npos);
    return out;
  };
  G.invert = [](const std::string& a) {
    std::string out(a.rbegin(), a.rend());
    for (auto& c : out) c = char(-int8_t(c));
    return out;
  };
  G.label = [](const std::string& a) {
    std::string out;
    for (char c : a) {
      int8_t v = int8_t(c);
      char base = char('a' + std::abs(v) - 1);
      out += v > 0 ? base : char(base - 'a' + 'A');
    }
    return out.empty() ? std::string("1") : out;
  };
  return G;
}

std::vector<std::pair<std::string, std::string>> free_standard_generators(int k) {
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 1; i <= k; ++i) {
    out.emplace_back(std::string(1, char(i)), std::string(1, char('a' + i - 1)));
    out.emplace_back(std::string(1, char(-i)), std::string(1, char('A' + i - 1)));
  }
  return out;
}

// --- finite groups ------------------------------------------------------------------

GroupOracle finite_oracle(const FiniteGroup& Gt) {
  auto tbl = std::make_shared<FiniteGroup>(Gt);
  GroupOracle G;
  G.name = "finite:" + Gt.name;
  G.identity = []() { return std::string(1, '\0'); };
  G.multiply = [tbl](const std::string& a, const std::string& b) {
    return std::string(1, char(tbl->mul(uint8_t(a[0]), uint8_t(b[0]))));
  };
  G.invert = [tbl](const std::string& a) {
    return std::string(1, char(tbl->inv[uint8_t(a[0])]));
  };
  G.label = [tbl](const std::string& a) { return tbl->labels[uint8_t(a[0])]; };
  return G;
}

// --- direct products ----------------------------------------------------------------

GroupOracle product_oracle(const GroupOracle& A, const GroupOracle& B) {
  auto a = std::make_shared<GroupOracle>(A);
  auto b = std::make_shared<GroupOracle>(B);
  auto pack = [](const std::string& x, const std::string& y) {
    if (x.size() > 0xffff) throw error(errc::schema, "product element too long");
    std::string out(2, '\0');
    uint16_t len = uint16_t(x.size());
    std::memcpy(out.data(), &len, 2);
    return out + x + y;
  };
  auto split = [](const std::string& s) {
    uint16_t len;
    std::memcpy(&len, s.data(), 2);
    return std::pair<std::string, std::string>(s.substr(2, len), s.substr(2 + len));
  };
  GroupOracle G;
  G.name = A.name + "x" + B.name;
  G.identity = [a, b, pack]() { return pack(a->identity(), b->identity()); };
  G.multiply = [a, b, pack, split](const std::string& x, const std::string& y) {
    auto [x1, x2] = split(x);
    auto [y1, y2] = split(y);
    return pack(a->multiply(x1, y1), b->multiply(x2, y2));
  };
  G.invert = [a, b, pack, split](const std::string& x) {
    auto [x1, x2] = split(x);
    return pack(a->invert(x1), b->invert(x2));
  };
  G.label = [a, b, split](const std::string& x) {
    auto [x1, x2] = split(x);
    return "(" + a->label(x1) + "," + b->label(x2) + ")";
  };
  return G;
}

// --- averaging elements --------------------------------------------------------------

AveragingElement uniform_averaging(
    const GroupOracle& G, const std::vector<std::pair<std::string, std::string>>& gens) {
  if (gens.empty()) throw error(errc::schema, "empty generator set");
  AveragingElement h;
  for (auto& [g, l] : gens) {
    h.support.push_back(g);
    h.labels.push_back(l);
    h.weight_num.push_back(1);
  }
  h.weight_den = (long long)gens.size();
  h.symmetric = averaging_is_symmetric(G, h);
  return h;
}

bool averaging_is_symmetric(const GroupOracle& G, const AveragingElement& h) {
  for (size_t s = 0; s < h.support.size(); ++s) {
    std::string inv = G.invert(h.support[s]);
    bool found = false;
    for (size_t t = 0; t < h.support.size(); ++t)
      if (h.support[t] == inv && h.weight_num[t] == h.weight_num[s]) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

// --- BFS ball -------------------------------------------------------------------------

CayleyBall build_ball(const GroupOracle& G, const AveragingElement& h, int radius,
                      size_t cap) {
  CayleyBall ball;
  ball.radius = radius;
  std::unordered_map<std::string, int32_t> index;
  index.reserve(1024);

  std::string id = G.identity();
  ball.elements.push_back(id);
  ball.distance.push_back(0);
  index.emplace(id, 0);
  ball.sphere_start.push_back(0);

  size_t head = 0;
  int current_dist = 0;
  while (head < ball.elements.size()) {
    // BFS order: distances along the queue are non-decreasing
    int d = ball.distance[head];
    if (d > current_dist) {
      ball.sphere_start.push_back(int(head));
      current_dist = d;
    }
    if (d == radius) { ++head; continue; }
    const std::string x = ball.elements[head];
    for (size_t s = 0; s < h.support.size(); ++s) {
      std::string y = G.multiply(h.support[s], x);
      if (index.find(y) == index.end()) {
        if (ball.elements.size() >= cap)
          throw error(errc::ball_too_large,
                      "ball exceeds cap of " + std::to_string(cap) + " elements");
        index.emplace(y, int32_t(ball.elements.size()));
        ball.elements.push_back(std::move(y));
        ball.distance.push_back(d + 1);
      }
    }
    ++head;
  }
  ball.sphere_start.push_back(int(ball.elements.size()));

  // sparse generator actions
  ball.action.assign(h.support.size(), std::vector<int32_t>(ball.elements.size(), -1));
  for (size_t s = 0; s < h.support.size(); ++s)
    for (size_t i = 0; i < ball.elements.size(); ++i) {
      auto it = index.find(G.multiply(h.support[s], ball.elements[i]));
      if (it != index.end()) ball.action[s][i] = it->second;
    }
  return ball;
}

double ball_consistency_residual(const GroupOracle& G, const AveragingElement& h,
                                 const CayleyBall& ball, int samples, uint64_t seed) {
  rng r(seed);
  std::unordered_map<std::string, int32_t> index;
  for (size_t i = 0; i < ball.elements.size(); ++i)
    index.emplace(ball.elements[i], int32_t(i));
  double bad = 0;
  for (int t = 0; t < samples; ++t) {
    size_t i = size_t(r.below(ball.elements.size()));
    size_t s = size_t(r.below(h.support.size()));
    std::string y = G.multiply(h.support[s], ball.elements[i]);
    auto it = index.find(y);
    int32_t expect = it == index.end() ? -1 : it->second;
    if (ball.action[s][i] != expect) bad += 1;
  }
  return bad;
}

}  // namespace aqg
