#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "aqg/error.hpp"

namespace aqg {

using cd = std::complex<double>;

/// Exact rational scalar over int64, reduced after every operation.
/// Intermediates run through __int128; anything that would leave the
/// int64 range throws errc::overflow instead of silently degrading.
class rational {
 public:
  rational() : num_(0), den_(1) {}
  rational(long long n) : num_(n), den_(1) {}
  rational(long long n, long long d) : num_(n), den_(d) { reduce(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  friend rational operator+(const rational& a, const rational& b) {
    __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return make(n, d);
  }
  friend rational operator-(const rational& a, const rational& b) {
    __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return make(n, d);
  }
  friend rational operator*(const rational& a, const rational& b) {
    return make((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend rational operator/(const rational& a, const rational& b) {
    if (b.num_ == 0) throw error(errc::overflow, "rational division by zero");
    return make((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  rational operator-() const { return rational(-num_, den_); }
  rational& operator+=(const rational& o) { return *this = *this + o; }
  rational& operator-=(const rational& o) { return *this = *this - o; }
  rational& operator*=(const rational& o) { return *this = *this * o; }
  rational& operator/=(const rational& o) { return *this = *this / o; }

  friend bool operator==(const rational& a, const rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
  friend bool operator<(const rational& a, const rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }

  double to_double() const { return double(num_) / double(den_); }

  /// Exact square root, when one exists in Q.
  std::optional<rational> sqrt() const {
    if (num_ < 0) return std::nullopt;
    auto isqrt = [](long long v) -> std::optional<long long> {
      if (v < 0) return std::nullopt;
      long long r = (long long)std::llround(std::sqrt((double)v));
      for (long long c = std::max(0LL, r - 2); c <= r + 2; ++c)
        if (c * c == v) return c;
      return std::nullopt;
    };
    auto n = isqrt(num_), d = isqrt(den_);
    if (!n || !d) return std::nullopt;
    return rational(*n, *d);
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static rational make(__int128 n, __int128 d) {
    if (d == 0) throw error(errc::overflow, "zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw error(errc::overflow, "rational out of int64 range");
    rational r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a ? a : 1;
  }
  void reduce() { *this = make(num_, den_); }

  long long num_, den_;
};

/// Complex number with exact rational real/imaginary parts.
struct rc {
  rational re, im;

  rc() = default;
  rc(rational r) : re(r) {}
  rc(long long r) : re(r) {}
  rc(rational r, rational i) : re(r), im(i) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  friend rc operator+(const rc& a, const rc& b) { return {a.re + b.re, a.im + b.im}; }
  friend rc operator-(const rc& a, const rc& b) { return {a.re - b.re, a.im - b.im}; }
  friend rc operator*(const rc& a, const rc& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend rc operator/(const rc& a, const rc& b) {
    rational m = b.re * b.re + b.im * b.im;
    if (m.is_zero()) throw error(errc::overflow, "rc division by zero");
    rc c = a * rc{b.re, -b.im};
    return {c.re / m, c.im / m};
  }
  rc operator-() const { return {-re, -im}; }
  rc& operator+=(const rc& o) { return *this = *this + o; }
  rc& operator-=(const rc& o) { return *this = *this - o; }
  rc& operator*=(const rc& o) { return *this = *this * o; }
  friend bool operator==(const rc& a, const rc& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const rc& a, const rc& b) { return !(a == b); }

  cd to_cd() const { return {re.to_double(), im.to_double()}; }
};

inline rc conj(const rc& z) { return {z.re, -z.im}; }
inline double abs2_approx(const rc& z) { return std::norm(z.to_cd()); }

// --- unified scalar access -------------------------------------------------

template <class K>
struct scalar_traits;

template <>
struct scalar_traits<cd> {
  static constexpr bool exact = false;
  static cd zero() { return {0.0, 0.0}; }
  static cd one() { return {1.0, 0.0}; }
  static cd from_int(long long v) { return {double(v), 0.0}; }
  static cd from_rational(const rational& r, const rational& i) {
    return {r.to_double(), i.to_double()};
  }
  static cd conj(cd z) { return std::conj(z); }
  static bool is_zero(cd z) { return z == cd{0.0, 0.0}; }
  static cd to_cd(cd z) { return z; }
  static cd sqrt_positive(cd z) { return std::sqrt(z.real()); }
};

template <>
struct scalar_traits<rc> {
  static constexpr bool exact = true;
  static rc zero() { return {}; }
  static rc one() { return rc{1}; }
  static rc from_int(long long v) { return rc{v}; }
  static rc from_rational(const rational& r, const rational& i) { return {r, i}; }
  static rc conj(const rc& z) { return aqg::conj(z); }
  static bool is_zero(const rc& z) { return z.is_zero(); }
  static cd to_cd(const rc& z) { return z.to_cd(); }
  static rc sqrt_positive(const rc& z) {
    if (!z.im.is_zero()) throw error(errc::not_exact, "sqrt of non-real value");
    auto s = z.re.sqrt();
    if (!s) throw error(errc::not_exact, "no exact rational square root");
    return rc{*s};
  }
};

// Default numeric gates. Identities are held to tighter tolerance than
// spectral predicates, which must absorb eigensolver noise.
struct tolerances {
  double identity = 1e-12;
  double predicate = 1e-10;
  double psd_floor = -1e-10;
};

inline tolerances& global_tol() {
  static tolerances t;
  return t;
}

}  // namespace aqg
