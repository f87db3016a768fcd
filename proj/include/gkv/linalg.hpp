#ifndef GKV_LINALG_HPP
#define GKV_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gkv/errors.hpp"
#include "gkv/jet.hpp"

namespace gkv {

inline double unit_like(double) { return 1.0; }
inline std::complex<double> unit_like(const std::complex<double>&) { return {1.0, 0.0}; }
inline Jet unit_like(const Jet& a) { return Jet::constant(1.0, a.n); }
inline CJet unit_like(const CJet& a) { return CJet::constant({1.0, 0.0}, a.n); }

// Dense matrix over an arbitrary arithmetic scalar (double, complex, Jet,
// CJet). Row major. Dimensions are small (<= kMaxDim); everything is written
// for clarity over asymptotics.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows * cols)) {}

  int rows() const { return r_; }
  int cols() const { return c_; }

  T& operator()(int i, int j) { return a_[static_cast<size_t>(i * c_ + j)]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i * c_ + j)]; }

  std::vector<T>& data() { return a_; }
  const std::vector<T>& data() const { return a_; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<T> a_;
};

template <class T>
using Vec = std::vector<T>;

template <class T>
inline Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows(), a.cols());
  for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
  return r;
}

template <class T>
inline Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows(), a.cols());
  for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
  return r;
}

template <class T>
inline Mat<T> operator-(const Mat<T>& a) {
  Mat<T> r(a.rows(), a.cols());
  for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = -a.data()[i];
  return r;
}

template <class T>
inline Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <class T, class S>
inline Mat<T> scale(const Mat<T>& a, const S& s) {
  Mat<T> r(a.rows(), a.cols());
  for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] * s;
  return r;
}

template <class T>
inline Vec<T> operator*(const Mat<T>& a, const Vec<T>& x) {
  Vec<T> y(static_cast<size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) {
    T s{};
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = s;
  }
  return y;
}

template <class T>
inline Mat<T> transpose(const Mat<T>& a) {
  Mat<T> r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

template <class T>
inline T trace(const Mat<T>& a) {
  T s{};
  for (int i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

template <class T>
inline double max_abs(const Mat<T>& a) {
  double m = 0;
  for (const T& x : a.data()) m = std::max(m, magnitude(x));
  return m;
}

template <class T>
inline double frobenius(const Mat<T>& a) {
  double s = 0;
  for (const T& x : a.data()) {
    const double m = magnitude(x);
    s += m * m;
  }
  return std::sqrt(s);
}

inline Mat<double> eye(int n) {
  Mat<double> m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Mat<Jet> eye_jet(int n, int dim) {
  Mat<Jet> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Jet::constant(i == j ? 1.0 : 0.0, dim);
  return m;
}

template <class T>
inline Mat<double> values_of(const Mat<T>& a) {
  Mat<double> r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = value_of(a(i, j));
  return r;
}

inline Mat<std::complex<double>> values_of(const Mat<CJet>& a) {
  Mat<std::complex<double>> r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).v;
  return r;
}

// Gauss-Jordan inverse with partial pivoting on the value slot. Jets
// propagate exactly through the elimination, so d(A^{-1}) comes out for free.
template <class T>
inline Mat<T> inverse(const Mat<T>& a, errc on_singular = errc::singular_metric) {
  const int n = a.rows();
  Mat<T> m = a;
  Mat<T> inv(n, n);
  const T one = unit_like(a(0, 0));
  const T zero = one - one;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = (i == j) ? one : zero;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = magnitude(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double cand = magnitude(m(r, col));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best < 1e-300) fail(on_singular, "singular matrix in inverse()");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const T pivot = m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) = m(col, j) / pivot;
      inv(col, j) = inv(col, j) / pivot;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = m(r, col);
      if (magnitude(f) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) = m(r, j) - f * m(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

// Determinant via LU with partial pivoting (value-slot pivoting).
template <class T>
inline T determinant(Mat<T> m) {
  const int n = m.rows();
  T det = unit_like(m(0, 0));
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = magnitude(m(col, col));
    for (int r = col + 1; r < n; ++r)
      if (magnitude(m(r, col)) > best) {
        best = magnitude(m(r, col));
        piv = r;
      }
    if (best == 0.0) return m(0, 0) - m(0, 0);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      sign = -sign;
    }
    det = det * m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const T f = m(r, col) / m(col, col);
      for (int j = col; j < n; ++j) m(r, j) = m(r, j) - f * m(col, j);
    }
  }
  if (sign < 0) det = -det;
  return det;
}

// Cholesky of an SPD double matrix; returns false if not positive definite.
bool cholesky(const Mat<double>& g, Mat<double>& lower);

// Solve A x = b for complex square A (partial pivoting). Used for the
// transverse-component decomposition in the Dirac closure check.
Vec<std::complex<double>> solve(Mat<std::complex<double>> a, Vec<std::complex<double>> b);

template <class T>
inline double max_abs(const Vec<T>& v) {
  double m = 0;
  for (const T& x : v) m = std::max(m, magnitude(x));
  return m;
}

template <class T>
inline double norm2(const Vec<T>& v) {
  double s = 0;
  for (const T& x : v) {
    const double m = magnitude(x);
    s += m * m;
  }
  return std::sqrt(s);
}

}  // namespace gkv

#endif
