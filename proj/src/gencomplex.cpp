#include "gkv/gencomplex.hpp"

namespace gkv {

Mat<double> pairing_gram(int n) {
  Mat<double> g(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    g(i, n + i) = 0.5;
    g(n + i, i) = 0.5;
  }
  return g;
}

Mat<cplx> dirac_basis(const Mat<cplx>& eps) {
  const int n = eps.rows();
  Mat<cplx> basis(n, 2 * n);
  for (int k = 0; k < n; ++k) {
    basis(k, k) = 1.0;
    for (int j = 0; j < n; ++j) basis(k, n + j) = eps(k, j);  // eps(e_k, e_j)
  }
  return basis;
}

namespace {

GenVec<cplx> row_to_genvec(const Mat<cplx>& basis, int row) {
  const int n = basis.cols() / 2;
  GenVec<cplx> v;
  v.x.resize(static_cast<size_t>(n));
  v.form.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    v.x[static_cast<size_t>(j)] = basis(row, j);
    v.form[static_cast<size_t>(j)] = basis(row, n + j);
  }
  return v;
}

}  // namespace

double isotropy_residual(const Mat<cplx>& basis) {
  double worst = 0;
  for (int i = 0; i < basis.rows(); ++i)
    for (int j = 0; j < basis.rows(); ++j) {
      const GenVec<cplx> u = row_to_genvec(basis, i);
      const GenVec<cplx> v = row_to_genvec(basis, j);
      worst = std::max(worst, std::abs(canonical_pairing(u, v)));
    }
  return worst;
}

bool trivial_intersection_with_conjugate(const Mat<cplx>& basis, double tol) {
  const int n = basis.rows();
  const int m = basis.cols();
  // stack basis over conj(basis) and row-reduce; trivial intersection iff rank = 2n
  Mat<cplx> s(2 * n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      s(i, j) = basis(i, j);
      s(n + i, j) = std::conj(basis(i, j));
    }
  int rank = 0;
  int row = 0;
  for (int col = 0; col < m && row < 2 * n; ++col) {
    int piv = -1;
    double best = tol;
    for (int r = row; r < 2 * n; ++r)
      if (std::abs(s(r, col)) > best) {
        best = std::abs(s(r, col));
        piv = r;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < m; ++j) std::swap(s(piv, j), s(row, j));
    for (int r = 0; r < 2 * n; ++r) {
      if (r == row) continue;
      const cplx f = s(r, col) / s(row, col);
      if (std::abs(f) == 0.0) continue;
      for (int j = col; j < m; ++j) s(r, j) -= f * s(row, j);
    }
    ++row;
    ++rank;
  }
  return rank == 2 * n;
}

double transverse_component_norm(const GenVec<cplx>& w, const Mat<cplx>& basis) {
  const int n = static_cast<int>(w.x.size());
  const int m = 2 * n;
  // columns: basis rows then conj(basis) rows
  Mat<cplx> a(m, m);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < m; ++i) {
      a(i, k) = basis(k, i);
      a(i, n + k) = std::conj(basis(k, i));
    }
  Vec<cplx> rhs(static_cast<size_t>(m));
  for (int i = 0; i < n; ++i) {
    rhs[static_cast<size_t>(i)] = w.x[static_cast<size_t>(i)];
    rhs[static_cast<size_t>(n + i)] = w.form[static_cast<size_t>(i)];
  }
  const Vec<cplx> coef = solve(a, rhs);
  // reconstruct the conj(L) component
  Vec<cplx> t(static_cast<size_t>(m), cplx{});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < m; ++i)
      t[static_cast<size_t>(i)] += coef[static_cast<size_t>(n + k)] * std::conj(basis(k, i));
  return norm2(t);
}

}  // namespace gkv
