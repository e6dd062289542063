#include "aqg/suq2.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace aqg {

namespace {
// letters
constexpr char A = 0, As = 1, C = 2, Cs = 3;
std::string w(std::initializer_list<char> ls) { return std::string(ls.begin(), ls.end()); }
}  // namespace

Suq2Data builtin_suq2_data() {
  Suq2Data d;
  d.version = 1;
  d.letter_names = {"a", "a*", "c", "c*"};
  d.letter_star = {1, 0, 3, 2};

  auto qc = [](long long num, long long den, int p) {
    QCoeff c;
    c.c = rational(num, den);
    c.qpow = p;
    return c;
  };

  // normal order: a-letters first, then c, then c*; a a* pairs collapse
  d.rules = {
      {w({As, A}), {{qc(1, 1, 0), ""}, {qc(-1, 1, 0), w({C, Cs})}}},
      {w({A, As}), {{qc(1, 1, 0), ""}, {qc(-1, 1, 2), w({C, Cs})}}},
      {w({C, A}), {{qc(1, 1, -1), w({A, C})}}},
      {w({Cs, A}), {{qc(1, 1, -1), w({A, Cs})}}},
      {w({C, As}), {{qc(1, 1, 1), w({As, C})}}},
      {w({Cs, As}), {{qc(1, 1, 1), w({As, Cs})}}},
      {w({Cs, C}), {{qc(1, 1, 0), w({C, Cs})}}},
  };

  d.delta.resize(4);
  d.delta[A] = {{qc(1, 1, 0), w({A}), w({A})}, {qc(-1, 1, 1), w({Cs}), w({C})}};
  d.delta[As] = {{qc(1, 1, 0), w({As}), w({As})}, {qc(-1, 1, 1), w({C}), w({Cs})}};
  d.delta[C] = {{qc(1, 1, 0), w({C}), w({A})}, {qc(1, 1, 0), w({As}), w({C})}};
  d.delta[Cs] = {{qc(1, 1, 0), w({Cs}), w({As})}, {qc(1, 1, 0), w({A}), w({Cs})}};

  d.epsilon = {qc(1, 1, 0), qc(1, 1, 0), qc(0, 1, 0), qc(0, 1, 0)};

  d.antipode.resize(4);
  d.antipode[A] = {{qc(1, 1, 0), w({As})}};
  d.antipode[As] = {{qc(1, 1, 0), w({A})}};
  d.antipode[C] = {{qc(-1, 1, 1), w({C})}};
  d.antipode[Cs] = {{qc(-1, 1, -1), w({Cs})}};
  return d;
}

// --- filtered algebra -------------------------------------------------------------

FilteredAlgebra::FilteredAlgebra(const Suq2Data& data, double q, int degree)
    : data_(data), q_(q), degree_(degree) {
  if (!(q > 0) || !(q <= 1)) throw error(errc::schema, "q must lie in (0, 1]");
  if (degree < 2 || degree > 6)
    throw error(errc::schema, "filtration degree must be between 2 and 6");
  for (auto& r : data_.rules) rule_at_[r.lhs] = int(&r - &data_.rules[0]);

  // enumerate redex-free words by length, lexicographically
  const int L = letters();
  std::vector<std::string> frontier = {""};
  basis_.push_back("");
  for (int len = 1; len <= degree; ++len) {
    std::vector<std::string> next;
    for (auto& wrd : frontier)
      for (char l = 0; l < L; ++l) {
        std::string cand = wrd + l;
        if (cand.size() >= 2 &&
            rule_at_.count(cand.substr(cand.size() - 2)))
          continue;
        next.push_back(cand);
        basis_.push_back(cand);
      }
    frontier = std::move(next);
  }
  for (size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = int(i);
  delta_cache_.resize(basis_.size());
  delta_cached_.assign(basis_.size(), 0);

  double conf = confluence_residual(4);
  if (conf > 1e-12)
    throw error(errc::non_confluent_relations,
                "rewriting rules are not confluent up to degree 4");
}

int FilteredAlgebra::letter_index(int l) const {
  auto it = index_.find(std::string(1, char(l)));
  if (it == index_.end()) throw error(errc::schema, "letter is not a normal word");
  return it->second;
}

std::string FilteredAlgebra::label(int i) const {
  if (i == 0) return "1";
  std::string out;
  for (char l : basis_[i]) out += data_.letter_names[int(l)];
  return out;
}

int FilteredAlgebra::a_exponent(int i) const {
  int e = 0;
  for (char l : basis_[i]) {
    if (l == 0) ++e;
    if (l == 1) --e;
  }
  return e;
}

bool FilteredAlgebra::has_c_content(int i) const {
  for (char l : basis_[i])
    if (l == 2 || l == 3) return true;
  return false;
}

std::map<std::string, cd> FilteredAlgebra::normalize_words(const std::string& start,
                                                           bool rightmost) const {
  std::map<std::string, cd> out;
  std::vector<std::pair<std::string, cd>> stack{{start, cd{1, 0}}};
  while (!stack.empty()) {
    auto [wrd, coeff] = std::move(stack.back());
    stack.pop_back();
    int pos = -1;
    if (!rightmost) {
      for (size_t p = 0; p + 1 < wrd.size(); ++p)
        if (rule_at_.count(wrd.substr(p, 2))) { pos = int(p); break; }
    } else {
      for (size_t p = wrd.size(); p >= 2; --p)
        if (rule_at_.count(wrd.substr(p - 2, 2))) { pos = int(p - 2); break; }
    }
    if (pos < 0) {
      out[wrd] += coeff;
      continue;
    }
    const auto& rule = data_.rules[rule_at_.at(wrd.substr(pos, 2))];
    for (auto& [qc, rep] : rule.rhs) {
      cd c = coeff * qc.value(q_);
      if (c == cd{0, 0}) continue;
      stack.emplace_back(wrd.substr(0, pos) + rep + wrd.substr(pos + 2), c);
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = (std::abs(it->second) == 0.0) ? out.erase(it) : std::next(it);
  return out;
}

FilteredAlgebra::Elt FilteredAlgebra::normalize(const std::string& wrd) const {
  Elt out;
  for (auto& [nw, c] : normalize_words(wrd, false)) {
    auto it = index_.find(nw);
    if (it == index_.end())
      throw error(errc::dimension_too_large, "normal form exceeds the filtration degree");
    out[it->second] += c;
  }
  return out;
}

double FilteredAlgebra::confluence_residual(int maxlen) const {
  // compare leftmost-first and rightmost-first reductions on every word
  double worst = 0;
  std::vector<std::string> words = {""};
  for (int len = 1; len <= maxlen; ++len) {
    std::vector<std::string> next;
    for (auto& wrd : words)
      if (int(wrd.size()) == len - 1)
        for (char l = 0; l < char(letters()); ++l) next.push_back(wrd + l);
    for (auto& wrd : next) {
      auto a = normalize_words(wrd, false);
      auto b = normalize_words(wrd, true);
      for (auto& [nw, c] : a) {
        auto it = b.find(nw);
        worst = std::max(worst, std::abs(c - (it == b.end() ? cd{0, 0} : it->second)));
      }
      for (auto& [nw, c] : b)
        if (!a.count(nw)) worst = std::max(worst, std::abs(c));
    }
    words.insert(words.end(), next.begin(), next.end());
  }
  return worst;
}

FilteredAlgebra::Elt FilteredAlgebra::multiply(const Elt& x, const Elt& y) const {
  Elt out;
  for (auto& [i, ci] : x)
    for (auto& [j, cj] : y) {
      if (degree_of(i) + degree_of(j) > degree_)
        throw error(errc::dimension_too_large,
                    "product leaves the filtration: " + label(i) + " * " + label(j));
      long long key = (long long)i * dim() + j;
      auto it = product_cache_.find(key);
      if (it == product_cache_.end())
        it = product_cache_.emplace(key, normalize(basis_[i] + basis_[j])).first;
      for (auto& [k, ck] : it->second) out[k] += ci * cj * ck;
    }
  return out;
}

FilteredAlgebra::Elt FilteredAlgebra::star(const Elt& x) const {
  Elt out;
  for (auto& [i, c] : x) {
    std::string s(basis_[i].rbegin(), basis_[i].rend());
    for (char& l : s) l = char(data_.letter_star[int(l)]);
    for (auto& [k, ck] : normalize(s)) out[k] += std::conj(c) * ck;
  }
  return out;
}

cd FilteredAlgebra::eps(const Elt& x) const {
  cd out{0, 0};
  for (auto& [i, c] : x) {
    cd v{1, 0};
    for (char l : basis_[i]) v *= data_.epsilon[int(l)].value(q_);
    out += c * v;
  }
  return out;
}

const FilteredAlgebra::TensorElt& FilteredAlgebra::delta_of_basis(int i) const {
  if (delta_cached_[i]) return delta_cache_[i];
  TensorElt acc{{{0, 0}, cd{1, 0}}};  // 1 (x) 1
  for (char l : basis_[i]) {
    TensorElt next;
    for (auto& [uv, c] : acc)
      for (auto& [qc, lw, rw] : data_.delta[int(l)]) {
        cd f = c * qc.value(q_);
        if (f == cd{0, 0}) continue;
        Elt left = normalize(basis_[uv.first] + lw);
        Elt right = normalize(basis_[uv.second] + rw);
        for (auto& [u2, cu] : left)
          for (auto& [v2, cv] : right) next[{u2, v2}] += f * cu * cv;
      }
    acc = std::move(next);
  }
  for (auto it = acc.begin(); it != acc.end();)
    it = (std::abs(it->second) < 1e-300) ? acc.erase(it) : std::next(it);
  delta_cache_[i] = std::move(acc);
  delta_cached_[i] = 1;
  return delta_cache_[i];
}

FilteredAlgebra::TensorElt FilteredAlgebra::delta(const Elt& x) const {
  TensorElt out;
  for (auto& [i, c] : x)
    for (auto& [uv, cv] : delta_of_basis(i)) out[uv] += c * cv;
  return out;
}

FilteredAlgebra::Elt FilteredAlgebra::antipode(const Elt& x) const {
  Elt out;
  for (auto& [i, c] : x) {
    Elt acc{{0, cd{1, 0}}};
    const std::string& wrd = basis_[i];
    for (auto it = wrd.rbegin(); it != wrd.rend(); ++it) {
      Elt next;
      for (auto& [j, cj] : acc)
        for (auto& [qc, aw] : data_.antipode[int(*it)]) {
          cd f = cj * qc.value(q_);
          if (f == cd{0, 0}) continue;
          for (auto& [k, ck] : normalize(basis_[j] + aw)) next[k] += f * ck;
        }
      acc = std::move(next);
    }
    for (auto& [k, ck] : acc) out[k] += c * ck;
  }
  return out;
}

// --- sandbox build ------------------------------------------------------------------

cd Suq2Sandbox::phi_of(const FilteredAlgebra::Elt& x) const {
  cd out{0, 0};
  for (auto& [i, c] : x) out += c * phi[i];
  return out;
}

Suq2Sandbox suq2_build(const Suq2Data& data, double q, int degree) {
  Suq2Sandbox sb{FilteredAlgebra(data, q, degree), {}, {}, {}, Mat<cd>()};
  const auto& F = sb.alg;
  const int N = F.dim();
  sb.axioms.confluence = F.confluence_residual(4);

  // left-invariance system: rows (w, u) of (id x phi)Delta(w) - phi(w) 1
  {
    std::map<std::pair<int, int>, int> row_of;
    auto row_id = [&](int wi, int u) {
      auto key = std::make_pair(wi, u);
      auto it = row_of.find(key);
      if (it == row_of.end()) it = row_of.emplace(key, int(row_of.size())).first;
      return it->second;
    };
    std::vector<std::map<int, cd>> rows;
    auto add = [&](int r, int col, cd v) {
      if (int(rows.size()) <= r) rows.resize(r + 1);
      rows[r][col] += v;
    };
    for (int wi = 0; wi < N; ++wi) {
      for (auto& [uv, c] : F.delta_of_basis(wi)) add(row_id(wi, uv.first), uv.second, c);
      add(row_id(wi, 0), wi, cd{-1, 0});  // phi(w) * unit component
    }
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(int(rows.size()), N);
    for (size_t r = 0; r < rows.size(); ++r)
      for (auto& [col, v] : rows[r]) M(int(r), col) = v;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv(0);
    int null_dim = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) <= 1e-10 * smax) ++null_dim;
    if (null_dim == 0)
      throw error(errc::haar_system_inconsistent, "invariance system has no kernel");
    if (null_dim > 1)
      throw error(errc::haar_system_inconsistent,
                  "invariance kernel has dimension " + std::to_string(null_dim));
    sb.phi.resize(N);
    for (int i = 0; i < N; ++i) sb.phi[i] = svd.matrixV()(i, N - 1);
    cd unit_val = sb.phi[0];
    if (std::abs(unit_val) < 1e-12)
      throw error(errc::haar_system_inconsistent, "phi(1) = 0 in the kernel vector");
    for (auto& v : sb.phi) v /= unit_val;
    // invariance residual of the normalized solution
    double worst = 0;
    for (int wi = 0; wi < N; ++wi) {
      std::map<int, cd> lhs;
      for (auto& [uv, c] : F.delta_of_basis(wi)) lhs[uv.first] += c * sb.phi[uv.second];
      lhs[0] -= sb.phi[wi];
      for (auto& [u, v] : lhs) worst = std::max(worst, std::abs(v));
    }
    sb.axioms.haar_invariance = worst;
  }

  // positivity on the half basis
  {
    for (int i = 0; i < N; ++i)
      if (F.degree_of(i) <= F.degree() / 2) sb.half_basis.push_back(i);
    const int H = int(sb.half_basis.size());
    sb.gram_half = Mat<cd>(H, H);
    for (int i = 0; i < H; ++i)
      for (int j = 0; j < H; ++j) {
        auto prod = F.multiply(F.star(F.basis_elt(sb.half_basis[i])),
                               F.basis_elt(sb.half_basis[j]));
        sb.gram_half(i, j) = sb.phi_of(prod);
      }
    auto ev = hermitian_eigenvalues(sb.gram_half);
    if (!ev.empty() && ev.front() < global_tol().psd_floor)
      throw error(errc::not_psd, "Gram of the half filtration is not PSD");
  }

  // axiom residuals on the filtration
  {
    const int d = F.degree();
    double coassoc = 0, counit = 0, dstar = 0, dmult = 0, anti = 0;
    for (int i = 0; i < N; ++i) {
      const auto& Dw = F.delta_of_basis(i);
      // counit identities
      FilteredAlgebra::Elt l, r;
      for (auto& [uv, c] : Dw) {
        l[uv.second] += c * F.eps(F.basis_elt(uv.first));
        r[uv.first] += c * F.eps(F.basis_elt(uv.second));
      }
      l[i] -= cd{1, 0};
      r[i] -= cd{1, 0};
      for (auto& [k, v] : l) counit = std::max(counit, std::abs(v));
      for (auto& [k, v] : r) counit = std::max(counit, std::abs(v));

      // coassociativity
      std::map<std::tuple<int, int, int>, cd> lhs, rhs;
      for (auto& [uv, c] : Dw) {
        for (auto& [pq, c2] : F.delta_of_basis(uv.first))
          lhs[{pq.first, pq.second, uv.second}] += c * c2;
        for (auto& [pq, c2] : F.delta_of_basis(uv.second))
          rhs[{uv.first, pq.first, pq.second}] += c * c2;
      }
      for (auto& [k, v] : lhs) {
        auto it = rhs.find(k);
        coassoc = std::max(coassoc, std::abs(v - (it == rhs.end() ? cd{0, 0} : it->second)));
      }
      for (auto& [k, v] : rhs)
        if (!lhs.count(k)) coassoc = std::max(coassoc, std::abs(v));

      // Delta(w^*) = Delta(w)^*
      {
        auto ws = F.star(F.basis_elt(i));
        auto Dws = F.delta(ws);
        std::map<std::pair<int, int>, cd> expect;
        for (auto& [uv, c] : Dw) {
          auto su = F.star(F.basis_elt(uv.first));
          auto sv = F.star(F.basis_elt(uv.second));
          for (auto& [u2, cu] : su)
            for (auto& [v2, cv] : sv) expect[{u2, v2}] += std::conj(c) * cu * cv;
        }
        for (auto& [k, v] : expect) {
          auto it = Dws.find(k);
          dstar = std::max(dstar, std::abs(v - (it == Dws.end() ? cd{0, 0} : it->second)));
        }
        for (auto& [k, v] : Dws)
          if (!expect.count(k)) dstar = std::max(dstar, std::abs(v));
      }
    }
    // degree-compatible multiplicativity of Delta and the antipode identities
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (F.degree_of(i) + F.degree_of(j) > d) continue;
        {
          auto prod = F.multiply(F.basis_elt(i), F.basis_elt(j));
          auto Dprod = F.delta(prod);
          std::map<std::pair<int, int>, cd> expect;
          for (auto& [uv1, c1] : F.delta_of_basis(i))
            for (auto& [uv2, c2] : F.delta_of_basis(j)) {
              auto lm = F.multiply(F.basis_elt(uv1.first), F.basis_elt(uv2.first));
              auto rm = F.multiply(F.basis_elt(uv1.second), F.basis_elt(uv2.second));
              for (auto& [u2, cu] : lm)
                for (auto& [v2, cv] : rm) expect[{u2, v2}] += c1 * c2 * cu * cv;
            }
          for (auto& [k, v] : expect) {
            auto it = Dprod.find(k);
            dmult = std::max(dmult, std::abs(v - (it == Dprod.end() ? cd{0, 0} : it->second)));
          }
          for (auto& [k, v] : Dprod)
            if (!expect.count(k)) dmult = std::max(dmult, std::abs(v));
        }
        if (2 * F.degree_of(i) + F.degree_of(j) <= d) {
          // m(S x id)(Delta(w_i)(1 x w_j)) = eps(w_i) w_j; the two Delta legs
          // can each carry the full degree of w_i, hence the tighter budget
          FilteredAlgebra::Elt acc;
          for (auto& [uv, c] : F.delta_of_basis(i)) {
            auto right = F.multiply(F.basis_elt(uv.second), F.basis_elt(j));
            auto sleft = F.antipode(F.basis_elt(uv.first));
            auto prod = F.multiply(sleft, right);
            for (auto& [k, v] : prod) acc[k] += c * v;
          }
          cd e = F.eps(F.basis_elt(i));
          acc[j] -= e;
          for (auto& [k, v] : acc) anti = std::max(anti, std::abs(v));

          // m(id x S)((w_j x 1)Delta(w_i)) = eps(w_i) w_j
          FilteredAlgebra::Elt acc2;
          for (auto& [uv, c] : F.delta_of_basis(i)) {
            auto left = F.multiply(F.basis_elt(j), F.basis_elt(uv.first));
            auto sright = F.antipode(F.basis_elt(uv.second));
            auto prod = F.multiply(left, sright);
            for (auto& [k, v] : prod) acc2[k] += c * v;
          }
          acc2[j] -= e;
          for (auto& [k, v] : acc2) anti = std::max(anti, std::abs(v));
        }
      }
    sb.axioms.coassociativity = coassoc;
    sb.axioms.counit = counit;
    sb.axioms.delta_star = dstar;
    sb.axioms.delta_multiplicative = dmult;
    sb.axioms.antipode = anti;
  }
  return sb;
}

// --- modular family -------------------------------------------------------------------

Vec<cd> Suq2Modular::values(const Suq2Sandbox& sb, cd z) const {
  const auto& F = sb.alg;
  Vec<cd> v(F.dim(), cd{0, 0});
  for (int i = 0; i < F.dim(); ++i) {
    if (F.has_c_content(i)) continue;
    v[i] = std::exp(z * std::log(mu) * double(F.a_exponent(i)));
  }
  return v;
}

namespace {

/// tau * a * tau' = (tau' x id x tau)(Delta x id)Delta(a), with functionals
/// given by value vectors on the basis.
FilteredAlgebra::Elt sandwich_elt(const Suq2Sandbox& sb, const Vec<cd>& tau,
                                  const FilteredAlgebra::Elt& a, const Vec<cd>& tau_prime) {
  const auto& F = sb.alg;
  FilteredAlgebra::Elt out;
  for (auto& [i, c] : a)
    for (auto& [xy, c1] : F.delta_of_basis(i)) {
      cd fy = tau[xy.second];
      if (fy == cd{0, 0}) continue;
      for (auto& [pr, c2] : F.delta_of_basis(xy.first)) {
        cd fp = tau_prime[pr.first];
        if (fp == cd{0, 0}) continue;
        out[pr.second] += c * c1 * c2 * fp * fy;
      }
    }
  for (auto it = out.begin(); it != out.end();)
    it = (std::abs(it->second) < 1e-300) ? out.erase(it) : std::next(it);
  return out;
}

double family_residual_at(const Suq2Sandbox& sb, double mu) {
  const auto& F = sb.alg;
  Suq2Modular fam{mu, 0, true};
  Vec<cd> f1 = fam.values(sb, cd{1, 0});
  Vec<cd> fm1 = fam.values(sb, cd{-1, 0});
  double worst = 0;
  // condition: S^2(g) = f_{-1} * g * f_1 on the letters
  for (int l = 0; l < F.letters(); ++l) {
    auto g = F.basis_elt(F.letter_index(l));
    auto s2 = F.antipode(F.antipode(g));
    auto sw = sandwich_elt(sb, fm1, g, f1);
    for (auto& [k, v] : s2) {
      auto it = sw.find(k);
      worst = std::max(worst, std::abs(v - (it == sw.end() ? cd{0, 0} : it->second)));
    }
    for (auto& [k, v] : sw)
      if (!s2.count(k)) worst = std::max(worst, std::abs(v));
  }
  // condition: phi(g b) = phi(b (f_1 * g * f_1)) over the pairing budget
  for (int l = 0; l < F.letters(); ++l) {
    auto g = F.basis_elt(F.letter_index(l));
    auto rho_g = sandwich_elt(sb, f1, g, f1);
    for (int b = 0; b < F.dim(); ++b) {
      if (F.degree_of(b) + 1 > F.degree()) continue;
      cd lhs = sb.phi_of(F.multiply(g, F.basis_elt(b)));
      cd rhs = sb.phi_of(F.multiply(F.basis_elt(b), rho_g));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace

Suq2Modular suq2_solve_modular(const Suq2Sandbox& sb) {
  // one log-variable Gauss-Newton with finite differences
  double t = 0;
  double res = family_residual_at(sb, std::exp(t));
  const double fd = 1e-6;
  for (int iter = 0; iter < 80 && res > 1e-12; ++iter) {
    double rp = family_residual_at(sb, std::exp(t + fd));
    double rm = family_residual_at(sb, std::exp(t - fd));
    double grad = (rp - rm) / (2 * fd);
    if (std::abs(grad) < 1e-14) break;
    double step = -res / grad;
    double damping = 1.0;
    bool moved = false;
    for (int half = 0; half < 40; ++half) {
      double tn = t + damping * step;
      double rn = family_residual_at(sb, std::exp(tn));
      if (rn < res) {
        t = tn;
        res = rn;
        moved = true;
        break;
      }
      damping *= 0.5;
    }
    if (!moved) break;
  }
  if (res > 1e-9)
    throw error(errc::no_positive_solution,
                "no positive family satisfies the modular conditions on the truncation");
  Suq2Modular fam;
  fam.mu = std::exp(t);
  fam.residual = res;
  // uniqueness: the residual must grow when mu moves
  double bump = std::max(family_residual_at(sb, std::exp(t + 0.05)),
                         family_residual_at(sb, std::exp(t - 0.05)));
  fam.unique = bump > 100 * std::max(res, 1e-13);
  return fam;
}

// --- flow --------------------------------------------------------------------------

Mat<cd> suq2_flow_F(const Suq2Sandbox& sb, const Suq2Modular& fam, double t) {
  const auto& F = sb.alg;
  Vec<cd> f = fam.values(sb, cd{0, -t});  // f_{-it}
  Mat<cd> M(F.dim(), F.dim());
  for (int j = 0; j < F.dim(); ++j)
    for (auto& [uv, c] : F.delta_of_basis(j)) M(uv.second, j) += c * f[uv.first];
  return M;
}

Mat<cd> suq2_flow_E(const Suq2Sandbox& sb, const Suq2Modular& fam, double t) {
  const auto& F = sb.alg;
  Vec<cd> f = fam.values(sb, cd{0, -t});
  Mat<cd> M(F.dim(), F.dim());
  for (int j = 0; j < F.dim(); ++j)
    for (auto& [uv, c] : F.delta_of_basis(j)) M(uv.first, j) += c * f[uv.second];
  return M;
}

Mat<cd> suq2_sigma(const Suq2Sandbox& sb, const Suq2Modular& fam, double t) {
  const auto& F = sb.alg;
  Vec<cd> f = fam.values(sb, cd{0, -t});
  Mat<cd> M(F.dim(), F.dim());
  for (int j = 0; j < F.dim(); ++j) {
    auto col = sandwich_elt(sb, f, F.basis_elt(j), f);
    for (auto& [k, v] : col) M(k, j) = v;
  }
  return M;
}

double suq2_kms_residual(const Suq2Sandbox& sb, const Suq2Modular& fam) {
  const auto& F = sb.alg;
  Vec<cd> f1 = fam.values(sb, cd{1, 0});
  double worst = 0;
  for (int i = 0; i < F.dim(); ++i)
    for (int j = 0; j < F.dim(); ++j) {
      if (F.degree_of(i) + F.degree_of(j) > F.degree()) continue;
      cd lhs = sb.phi_of(F.multiply(F.basis_elt(i), F.basis_elt(j)));
      cd rhs = sb.phi_of(
          F.multiply(F.basis_elt(j), sandwich_elt(sb, f1, F.basis_elt(i), f1)));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

Suq2FlowReport suq2_flow_suite(const Suq2Sandbox& sb, const Suq2Modular& fam, double s,
                               double t) {
  const auto& F = sb.alg;
  Suq2FlowReport rep;
  rep.family_residual = fam.residual;

  // grid checks for the family
  const cd grid[] = {cd{1, 0}, cd{-1, 0}, cd{0, 1}, cd{0, -1}, cd{0.5, 0}, cd{0, 0.5}};
  for (cd z : grid) {
    Vec<cd> fz = fam.values(sb, z);
    Vec<cd> fmz = fam.values(sb, -z);
    Vec<cd> fmzc = fam.values(sb, -std::conj(z));
    for (int i = 0; i < F.dim(); ++i) {
      // f_z o S = f_{-z}
      cd lhs{0, 0};
      for (auto& [k, v] : F.antipode(F.basis_elt(i))) lhs += v * fz[k];
      rep.antipode_flip = std::max(rep.antipode_flip, std::abs(lhs - fmz[i]));
      // conj(f_z(w^*)) = f_{-conj z}(w)
      cd sv{0, 0};
      for (auto& [k, v] : F.star(F.basis_elt(i))) sv += v * fz[k];
      rep.star_conjugate = std::max(rep.star_conjugate, std::abs(std::conj(sv) - fmzc[i]));
    }
    for (cd w2 : grid) {
      Vec<cd> fw = fam.values(sb, w2);
      Vec<cd> fzw = fam.values(sb, z + w2);
      for (int i = 0; i < F.dim(); ++i) {
        cd conv{0, 0};
        for (auto& [uv, c] : F.delta_of_basis(i)) conv += c * fz[uv.first] * fw[uv.second];
        rep.additivity = std::max(rep.additivity, std::abs(conv - fzw[i]));
      }
    }
  }

  // sigma acts diagonally on the letters with unimodular scalars
  {
    Mat<cd> st = suq2_sigma(sb, fam, t);
    for (int l = 0; l < F.letters(); ++l) {
      int idx = F.letter_index(l);
      for (int k = 0; k < F.dim(); ++k) {
        if (k == idx) {
          rep.sigma_diag_unimodular =
              std::max(rep.sigma_diag_unimodular, std::abs(std::abs(st(k, idx)) - 1.0));
        } else {
          rep.sigma_diag_unimodular =
              std::max(rep.sigma_diag_unimodular, std::abs(st(k, idx)));
        }
      }
    }
  }

  Mat<cd> Fs = suq2_flow_F(sb, fam, s), Ft = suq2_flow_F(sb, fam, t),
          Fst = suq2_flow_F(sb, fam, s + t);
  Mat<cd> Es = suq2_flow_E(sb, fam, s), Et = suq2_flow_E(sb, fam, t),
          Est = suq2_flow_E(sb, fam, s + t);
  rep.flow_group_law =
      std::max(diff_norm(Fst, matmul(Fs, Ft)), diff_norm(Est, matmul(Es, Et)));
  rep.flow_commute = diff_norm(matmul(Fs, Et), matmul(Et, Fs));
  rep.flow_fixes_unit = [&] {
    double w = 0;
    for (int k = 0; k < F.dim(); ++k)
      w = std::max(w, std::abs(Ft(k, 0) - (k == 0 ? cd{1, 0} : cd{0, 0})));
    return w;
  }();

  // unitarity w.r.t. the Gram form on the half basis
  {
    const auto& half = sb.half_basis;
    const int H = int(half.size());
    auto restrict_to_half = [&](const Mat<cd>& M) {
      Mat<cd> R(H, H);
      for (int j = 0; j < H; ++j) {
        for (int k = 0; k < H; ++k) R(k, j) = M(half[k], half[j]);
        // anything escaping the half basis would break the restriction
        for (int k = 0; k < F.dim(); ++k)
          if (std::abs(M(k, half[j])) > 1e-13 &&
              !std::binary_search(half.begin(), half.end(), k))
            throw error(errc::dimension_too_large, "flow left the half filtration");
      }
      return R;
    };
    for (const Mat<cd>* U : {&Ft, &Et}) {
      Mat<cd> R = restrict_to_half(*U);
      Mat<cd> lhs = matmul(adjoint(R), matmul(sb.gram_half, R));
      rep.flow_unitary_half = std::max(rep.flow_unitary_half, diff_norm(lhs, sb.gram_half));
    }
  }

  rep.kms = suq2_kms_residual(sb, fam);
  {
    auto ev = hermitian_eigenvalues(sb.gram_half);
    rep.phi_positive_floor = ev.empty() ? 0.0 : ev.front();
  }
  return rep;
}

}  // namespace aqg
