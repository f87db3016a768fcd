#ifndef GKV_CALCULUS_HPP
#define GKV_CALCULUS_HPP

#include "gkv/linalg.hpp"
#include "gkv/patch.hpp"

namespace gkv {

// Fully stored 3-index array; antisymmetric ones keep all components so that
// contractions stay branch-free.
template <class T>
struct Cube3 {
  int n = 0;
  std::vector<T> a;

  Cube3() = default;
  explicit Cube3(int dim) : n(dim), a(static_cast<size_t>(dim * dim * dim)) {}

  T& at(int i, int j, int k) { return a[static_cast<size_t>((i * n + j) * n + k)]; }
  const T& at(int i, int j, int k) const { return a[static_cast<size_t>((i * n + j) * n + k)]; }

  double max_abs() const {
    double m = 0;
    for (const T& x : a) m = std::max(m, magnitude(x));
    return m;
  }
};

// --- exterior derivative (coordinate components from jet gradients) --------

// d of a 0-form: the gradient as a one-form value.
template <class S>
Vec<S> d0(const JetT<S>& f) {
  Vec<S> v(static_cast<size_t>(f.n));
  for (int i = 0; i < f.n; ++i) v[static_cast<size_t>(i)] = f.d[i];
  return v;
}

// d of a 1-form: (dw)_{ij} = d_i w_j - d_j w_i.
template <class S>
Mat<S> d1(const Vec<JetT<S>>& w) {
  const int n = static_cast<int>(w.size());
  Mat<S> r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = w[static_cast<size_t>(j)].d[i] - w[static_cast<size_t>(i)].d[j];
  return r;
}

// d of a 2-form: (dw)_{ijk} = d_i w_{jk} - d_j w_{ik} + d_k w_{ij}.
template <class S>
Cube3<S> d2(const Mat<JetT<S>>& w) {
  const int n = w.rows();
  Cube3<S> r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r.at(i, j, k) = w(j, k).d[i] - w(i, k).d[j] + w(i, j).d[k];
  return r;
}

// --- wedge and interior products (shuffle convention, no 1/k! factors) -----

// (a ^ b)(X,Y) = a(X) b(Y) - a(Y) b(X) for 1-forms.
template <class T>
Mat<T> wedge11(const Vec<T>& a, const Vec<T>& b) {
  const int n = static_cast<int>(a.size());
  Mat<T> r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) = a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)] -
                a[static_cast<size_t>(j)] * b[static_cast<size_t>(i)];
  return r;
}

// (a ^ B)(X,Y,Z) = a(X)B(Y,Z) + a(Y)B(Z,X) + a(Z)B(X,Y) for a 1-form and a 2-form.
template <class T>
Cube3<T> wedge12(const Vec<T>& a, const Mat<T>& B) {
  const int n = static_cast<int>(a.size());
  Cube3<T> r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r.at(i, j, k) = a[static_cast<size_t>(i)] * B(j, k) + a[static_cast<size_t>(j)] * B(k, i) +
                        a[static_cast<size_t>(k)] * B(i, j);
  return r;
}

// Interior products: contraction in the first slot.
template <class T>
T interior1(const Vec<T>& x, const Vec<T>& a) {
  T s{};
  for (size_t i = 0; i < x.size(); ++i) s += a[i] * x[i];
  return s;
}

template <class T>
Vec<T> interior2(const Vec<T>& x, const Mat<T>& w) {
  const int n = w.rows();
  Vec<T> r(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    T s{};
    for (int i = 0; i < n; ++i) s += w(i, j) * x[static_cast<size_t>(i)];
    r[static_cast<size_t>(j)] = s;
  }
  return r;
}

template <class T>
Mat<T> interior3(const Vec<T>& x, const Cube3<T>& w) {
  const int n = w.n;
  Mat<T> r(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      T s{};
      for (int i = 0; i < n; ++i) s += w.at(i, j, k) * x[static_cast<size_t>(i)];
      r(j, k) = s;
    }
  return r;
}

// Evaluate a stored 3-form on three vectors.
template <class T>
T eval3(const Cube3<T>& w, const Vec<T>& x, const Vec<T>& y, const Vec<T>& z) {
  const int n = w.n;
  T s{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        s += w.at(i, j, k) * x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)] *
             z[static_cast<size_t>(k)];
  return s;
}

// 3-form evaluated on (e_i, A e_j, e_k) style slots happens inline in the
// identity suites; this helper covers the plain coordinate-slot value.
template <class T>
T eval3_coords(const Cube3<T>& w, int i, int j, int k) {
  return w.at(i, j, k);
}

// --- brackets and covariant derivatives -------------------------------------

// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i from jets of the component functions.
template <class S>
Vec<S> lie_bracket(const Vec<JetT<S>>& x, const Vec<JetT<S>>& y) {
  const int n = static_cast<int>(x.size());
  Vec<S> r(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    S s{};
    for (int j = 0; j < n; ++j)
      s += x[static_cast<size_t>(j)].v * y[static_cast<size_t>(i)].d[j] -
           y[static_cast<size_t>(j)].v * x[static_cast<size_t>(i)].d[j];
    r[static_cast<size_t>(i)] = s;
  }
  return r;
}

// (nabla_i A)^k_j = d_i A^k_j + Gamma^k_{il} A^l_j - Gamma^l_{ij} A^k_l,
// for an endomorphism-valued jet matrix A (row = upper index).
Cube3<double> covariant_deriv_endo(const Mat<Jet>& a, const Christoffels& gamma);

// (nabla_Y X)^k = Y^i (d_i X^k + Gamma^k_{il} X^l) for a jet vector field X
// and a plain direction Y.
Vec<double> covariant_deriv_vector(const Vec<Jet>& x, const Vec<double>& y,
                                   const Christoffels& gamma);

// Nijenhuis tensor N^k_{ij} of an endomorphism field with J^2 = -Id.
Cube3<double> nijenhuis(const Mat<Jet>& j, double acs_tol = 1e-8);

// --- Hodge star --------------------------------------------------------------

// Top and zero forms work in any dimension; a top form is carried by its
// single coefficient on e^1 ^ ... ^ e^n.
double star_zero_form(double f, const Mat<double>& g, int orientation);
double star_top_form(double coeff, const Mat<double>& g, int orientation);

// *(1-form) in dim 4 -> 3-form.
Cube3<double> star_one_form_dim4(const Vec<double>& alpha, const Mat<double>& g, int orientation);

// *(2-form) in dim 4 -> 2-form.
Mat<double> star_two_form_dim4(const Mat<double>& w, const Mat<double>& g, int orientation);

// *(3-form) in dim 4 -> 1-form.
Vec<double> star_three_form_dim4(const Cube3<double>& w, const Mat<double>& g, int orientation);

// sqrt(det g) (positive for SPD metrics).
double volume_density(const Mat<double>& g);

// Pointwise g-norm of forms (full contraction with g^{-1}, normalized by 1/k!).
double gnorm_one_form(const Vec<double>& a, const Mat<double>& ginv);
double gnorm_two_form(const Mat<double>& w, const Mat<double>& ginv);
double gnorm_three_form(const Cube3<double>& w, const Mat<double>& ginv);

}  // namespace gkv

#endif
