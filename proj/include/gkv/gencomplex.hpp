#ifndef GKV_GENCOMPLEX_HPP
#define GKV_GENCOMPLEX_HPP

#include <complex>

#include "gkv/calculus.hpp"

namespace gkv {

using cplx = std::complex<double>;

// An element X + alpha of (TM + T*M) at a point.
template <class S>
struct GenVec {
  Vec<S> x;     // vector part
  Vec<S> form;  // one-form part
};

// <X+a, Y+b> = (a(Y) + b(X)) / 2.
template <class S>
S canonical_pairing(const GenVec<S>& u, const GenVec<S>& v) {
  if (u.x.size() != v.x.size()) fail(errc::spec_error, "dimension mismatch in pairing");
  S s{};
  for (size_t i = 0; i < u.x.size(); ++i) s += u.form[i] * v.x[i] + v.form[i] * u.x[i];
  return s * S(0.5);
}

// Gram matrix of the pairing in the standard doubled basis (d_1..d_n, dx^1..dx^n).
Mat<double> pairing_gram(int n);

// Courant bracket of two sections given their jets at a point:
// [X+a, Y+b] = [X,Y] + L_X b - L_Y a - d(i_X b - i_Y a)/2, with the Lie
// derivatives expanded through Cartan's formula. Output carries values only.
template <class S>
GenVec<S> courant_bracket(const Vec<JetT<S>>& x, const Vec<JetT<S>>& a, const Vec<JetT<S>>& y,
                          const Vec<JetT<S>>& b) {
  const int n = static_cast<int>(x.size());
  GenVec<S> out;
  out.x = lie_bracket(x, y);

  const Mat<S> da = d1(a);
  const Mat<S> db = d1(b);
  Vec<S> xv(static_cast<size_t>(n)), yv(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    xv[static_cast<size_t>(i)] = x[static_cast<size_t>(i)].v;
    yv[static_cast<size_t>(i)] = y[static_cast<size_t>(i)].v;
  }
  // i_X db - i_Y da
  Vec<S> form = interior2(xv, db);
  const Vec<S> iyda = interior2(yv, da);

  // + d(i_X b - i_Y a)/2, where i_X b is a scalar jet
  JetT<S> ixb{}, iya{};
  for (int i = 0; i < n; ++i) {
    ixb += x[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
    iya += y[static_cast<size_t>(i)] * a[static_cast<size_t>(i)];
  }
  const Vec<S> dpair = d0(ixb - iya);
  for (int i = 0; i < n; ++i)
    form[static_cast<size_t>(i)] +=
        -iyda[static_cast<size_t>(i)] + S(0.5) * dpair[static_cast<size_t>(i)];
  out.form = std::move(form);
  return out;
}

// Basis {e_k + eps(e_k, .)} of L(T^C M, eps) stacked as rows of a 2n-column
// matrix (first n columns vector part, last n form part).
Mat<cplx> dirac_basis(const Mat<cplx>& eps);

// Max |<b_i, b_j>| over the basis rows: isotropy residual of L(E, eps).
double isotropy_residual(const Mat<cplx>& basis);

// True when L and conj(L) intersect trivially (stacked rank 2n), i.e. the
// generalized almost complex condition holds at the point.
bool trivial_intersection_with_conjugate(const Mat<cplx>& basis, double tol = 1e-8);

// Decompose w against span(basis) + span(conj basis); returns the norm of the
// component transverse to L (the conj(L) part, reconstructed as a vector).
double transverse_component_norm(const GenVec<cplx>& w, const Mat<cplx>& basis);

}  // namespace gkv

#endif
