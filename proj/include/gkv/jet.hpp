#ifndef GKV_JET_HPP
#define GKV_JET_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>

#include "gkv/errors.hpp"

namespace gkv {

// Largest patch dimension the toolkit supports; gradients are stored inline.
inline constexpr int kMaxDim = 16;

// Value plus exact first partial derivatives. Arithmetic is first-order
// truncated polynomial arithmetic, so product and chain rules hold to
// machine precision (no finite-difference step anywhere).
template <class S>
struct JetT {
  S v{};
  int n = 0;
  std::array<S, kMaxDim> d{};

  JetT() = default;
  explicit JetT(S value, int dim = 0) : v(value), n(dim) { d.fill(S{}); }

  static JetT constant(S value, int dim) { return JetT(value, dim); }

  static JetT variable(S value, int dim, int index) {
    JetT j(value, dim);
    j.d[static_cast<size_t>(index)] = S{1};
    return j;
  }

  JetT& operator+=(const JetT& o) {
    if (n < o.n) n = o.n;
    v += o.v;
    for (int i = 0; i < n; ++i) d[i] += o.d[i];
    return *this;
  }
  JetT& operator-=(const JetT& o) {
    if (n < o.n) n = o.n;
    v -= o.v;
    for (int i = 0; i < n; ++i) d[i] -= o.d[i];
    return *this;
  }
};

using Jet = JetT<double>;
using CJet = JetT<std::complex<double>>;

template <class S>
inline JetT<S> operator+(const JetT<S>& a, const JetT<S>& b) {
  JetT<S> r = a;
  r += b;
  return r;
}

template <class S>
inline JetT<S> operator-(const JetT<S>& a, const JetT<S>& b) {
  JetT<S> r = a;
  r -= b;
  return r;
}

template <class S>
inline JetT<S> operator-(const JetT<S>& a) {
  JetT<S> r(-a.v, a.n);
  for (int i = 0; i < a.n; ++i) r.d[i] = -a.d[i];
  return r;
}

template <class S>
inline JetT<S> operator*(const JetT<S>& a, const JetT<S>& b) {
  JetT<S> r(a.v * b.v, a.n > b.n ? a.n : b.n);
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

template <class S>
inline JetT<S> operator*(const JetT<S>& a, S c) {
  JetT<S> r(a.v * c, a.n);
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] * c;
  return r;
}

template <class S>
inline JetT<S> operator*(S c, const JetT<S>& a) {
  return a * c;
}

inline Jet operator*(const Jet& a, int c) { return a * static_cast<double>(c); }

template <class S>
inline JetT<S> operator/(const JetT<S>& a, const JetT<S>& b) {
  JetT<S> r(a.v / b.v, a.n > b.n ? a.n : b.n);
  const S inv2 = S{1} / (b.v * b.v);
  for (int i = 0; i < r.n; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
  return r;
}

template <class S>
inline JetT<S> operator/(const JetT<S>& a, S c) {
  return a * (S{1} / c);
}

// f(a) with f'(a) supplied: chain rule in one place.
template <class S>
inline JetT<S> chain(const JetT<S>& a, S value, S slope) {
  JetT<S> r(value, a.n);
  for (int i = 0; i < a.n; ++i) r.d[i] = slope * a.d[i];
  return r;
}

inline Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e);
}

inline Jet log(const Jet& a) {
  if (!(a.v > 0.0)) fail(errc::domain_error, "log of non-positive value");
  return chain(a, std::log(a.v), 1.0 / a.v);
}

inline Jet sqrt(const Jet& a) {
  if (a.v < 0.0) fail(errc::domain_error, "sqrt of negative value");
  const double s = std::sqrt(a.v);
  if (s == 0.0) fail(errc::domain_error, "sqrt derivative singular at zero");
  return chain(a, s, 0.5 / s);
}

// pow with constant exponent only; general powers go through exp/log.
inline Jet pow(const Jet& a, double e) {
  if (e == 0.0) return Jet::constant(1.0, a.n);
  if (e == 1.0) return a;
  if (a.v == 0.0) {
    if (e > 1.0) return Jet::constant(0.0, a.n);
    fail(errc::domain_error, "pow at zero base with exponent <= 1");
  }
  if (a.v < 0.0 && e != std::floor(e))
    fail(errc::domain_error, "fractional power of negative value");
  const double p = std::pow(a.v, e);
  return chain(a, p, e * std::pow(a.v, e - 1.0));
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& a) { return a.v; }
inline std::complex<double> value_of(const std::complex<double>& x) { return x; }
inline std::complex<double> value_of(const CJet& a) { return a.v; }

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }
template <class S>
inline double magnitude(const JetT<S>& a) {
  return std::abs(a.v);
}

inline CJet to_complex(const Jet& re, const Jet& im) {
  CJet r(std::complex<double>(re.v, im.v), re.n > im.n ? re.n : im.n);
  for (int i = 0; i < r.n; ++i) r.d[i] = std::complex<double>(re.d[i], im.d[i]);
  return r;
}

inline CJet to_complex(const Jet& re) {
  CJet r(std::complex<double>(re.v, 0.0), re.n);
  for (int i = 0; i < r.n; ++i) r.d[i] = std::complex<double>(re.d[i], 0.0);
  return r;
}

}  // namespace gkv

#endif
