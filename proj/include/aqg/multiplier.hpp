#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "aqg/scalar.hpp"

namespace aqg {

/// Finitely supported function on a countable index set (kept as strings).
struct FiniteSupportFn {
  std::map<std::string, cd> values;

  cd at(const std::string& t) const {
    auto it = values.find(t);
    return it == values.end() ? cd{0, 0} : it->second;
  }
  FiniteSupportFn& set(const std::string& t, cd v) {
    if (v == cd{0, 0}) values.erase(t);
    else values[t] = v;
    return *this;
  }
  static FiniteSupportFn point(const std::string& t, cd v = {1, 0}) {
    FiniteSupportFn f;
    f.set(t, v);
    return f;
  }

  FiniteSupportFn star() const {
    FiniteSupportFn g;
    for (auto& [t, v] : values) g.values[t] = std::conj(v);
    return g;
  }

  friend FiniteSupportFn operator*(const FiniteSupportFn& a, const FiniteSupportFn& b) {
    FiniteSupportFn c;
    for (auto& [t, v] : a.values) {
      cd w = b.at(t);
      if (v * w != cd{0, 0}) c.values[t] = v * w;
    }
    return c;
  }

  double dist(const FiniteSupportFn& o) const {
    double d = 0;
    for (auto& [t, v] : values) d = std::max(d, std::abs(v - o.at(t)));
    for (auto& [t, v] : o.values) d = std::max(d, std::abs(v - at(t)));
    return d;
  }
};

/// Total function oracle with a declared sup bound; models an arbitrary
/// complex-valued function without storing it.
struct IndexFn {
  std::function<cd(const std::string&)> eval;
  double bound = 0;

  IndexFn(std::function<cd(const std::string&)> f, double b) : eval(std::move(f)), bound(b) {
    if (!(b >= 0) || !std::isfinite(b))
      throw error(errc::schema, "IndexFn requires a finite declared bound");
  }

  static IndexFn constant(cd v) {
    return IndexFn([v](const std::string&) { return v; }, std::abs(v));
  }
  static IndexFn indicator(const std::string& t0) {
    return IndexFn([t0](const std::string& t) { return t == t0 ? cd{1, 0} : cd{0, 0}; }, 1.0);
  }
};

/// Pointwise action of M(K(T)) = F(T) on K(T).
inline FiniteSupportFn multiplier_action(const IndexFn& F, const FiniteSupportFn& k) {
  FiniteSupportFn out;
  for (auto& [t, v] : k.values) {
    cd w = F.eval(t);
    if (std::abs(w) > F.bound * (1 + 1e-9))
      throw error(errc::schema, "IndexFn exceeded its declared bound at " + t);
    if (v * w != cd{0, 0}) out.values[t] = v * w;
  }
  return out;
}

using EndoK = std::function<FiniteSupportFn(const FiniteSupportFn&)>;

struct MultiplierCheck {
  double relation_residual = 0;   // max |x(a)^* b - a^* y(b)|
  double uniqueness_residual = 0; // deviation of y from the pointwise partner forced by x
  bool ok(double tol = global_tol().identity) const {
    return relation_residual <= tol && uniqueness_residual <= tol;
  }
};

/// Checks the defining multiplier relation x(a)^* b = a^* y(b) on the listed
/// sample functions, and that y agrees pointwise with the unique adjoint
/// partner determined by x on indicator functions.
inline MultiplierCheck verify_multiplier(const EndoK& x, const EndoK& y,
                                         const std::vector<FiniteSupportFn>& samples) {
  MultiplierCheck c;
  for (auto& a : samples)
    for (auto& b : samples) {
      FiniteSupportFn lhs = x(a).star() * b;
      FiniteSupportFn rhs = a.star() * y(b);
      c.relation_residual = std::max(c.relation_residual, lhs.dist(rhs));
    }
  // uniqueness: on points in the samples' support, y(e_t)(t') is pinned by
  // x via e_t'^* y(e_t) = x(e_t')^* e_t
  for (auto& b : samples)
    for (auto& [t, unused] : b.values) {
      FiniteSupportFn et = FiniteSupportFn::point(t);
      FiniteSupportFn yt = y(et);
      for (auto& [s, v] : yt.values) {
        cd forced = std::conj(x(FiniteSupportFn::point(s)).at(t));
        c.uniqueness_residual = std::max(c.uniqueness_residual, std::abs(v - forced));
      }
    }
  return c;
}

}  // namespace aqg
