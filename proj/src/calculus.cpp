#include "gkv/calculus.hpp"

namespace gkv {

Cube3<double> covariant_deriv_endo(const Mat<Jet>& a, const Christoffels& gamma) {
  const int n = a.rows();
  Cube3<double> r(n);  // r.at(i, k, j) = (nabla_i A)^k_j
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double s = a(k, j).d[i];
        for (int l = 0; l < n; ++l)
          s += gamma.at(k, i, l) * a(l, j).v - gamma.at(l, i, j) * a(k, l).v;
        r.at(i, k, j) = s;
      }
  return r;
}

Vec<double> covariant_deriv_vector(const Vec<Jet>& x, const Vec<double>& y,
                                   const Christoffels& gamma) {
  const int n = static_cast<int>(x.size());
  Vec<double> r(static_cast<size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0;
    for (int i = 0; i < n; ++i) {
      double t = x[static_cast<size_t>(k)].d[i];
      for (int l = 0; l < n; ++l) t += gamma.at(k, i, l) * x[static_cast<size_t>(l)].v;
      s += y[static_cast<size_t>(i)] * t;
    }
    r[static_cast<size_t>(k)] = s;
  }
  return r;
}

Cube3<double> nijenhuis(const Mat<Jet>& j, double acs_tol) {
  const int n = j.rows();
  // require J^2 = -Id at the point
  Mat<double> jv = values_of(j);
  Mat<double> sq = jv * jv;
  for (int a = 0; a < n; ++a) sq(a, a) += 1.0;
  if (max_abs(sq) > acs_tol)
    fail(errc::not_almost_complex, "endomorphism does not square to -Id (residual " +
                                       std::to_string(max_abs(sq)) + ")");

  Cube3<double> r(n);  // r.at(k, i, j) = N^k(e_i, e_j)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj) {
        double s = 0;
        for (int l = 0; l < n; ++l)
          s += j(l, i).v * j(k, jj).d[l] - j(l, jj).v * j(k, i).d[l] +
               j(k, l).v * (j(l, i).d[jj] - j(l, jj).d[i]);
        r.at(k, i, jj) = s;
      }
  return r;
}

double volume_density(const Mat<double>& g) {
  const double det = determinant(g);
  if (det <= 0) fail(errc::singular_metric, "metric determinant not positive");
  return std::sqrt(det);
}

double star_zero_form(double f, const Mat<double>& g, int orientation) {
  return f * volume_density(g) * orientation;
}

double star_top_form(double coeff, const Mat<double>& g, int orientation) {
  return coeff * orientation / volume_density(g);
}

namespace {

int eps4(int i, int j, int k, int l) {
  const int p[4] = {i, j, k, l};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] == p[b]) return 0;
  int inv = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

void require_dim4(int n) {
  if (n != 4) fail(errc::spec_error, "Hodge star on 1-/2-/3-forms is implemented for dim 4 only");
}

}  // namespace

Cube3<double> star_one_form_dim4(const Vec<double>& alpha, const Mat<double>& g, int orientation) {
  require_dim4(static_cast<int>(alpha.size()));
  const Mat<double> ginv = inverse(g);
  const double sq = volume_density(g) * orientation;
  Vec<double> up = ginv * alpha;
  Cube3<double> r(4);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        double s = 0;
        for (int i = 0; i < 4; ++i) s += eps4(i, j, k, l) * up[static_cast<size_t>(i)];
        r.at(j, k, l) = sq * s;
      }
  return r;
}

Mat<double> star_two_form_dim4(const Mat<double>& w, const Mat<double>& g, int orientation) {
  require_dim4(w.rows());
  const Mat<double> ginv = inverse(g);
  const double sq = volume_density(g) * orientation;
  Mat<double> up = ginv * w * transpose(ginv);  // w^{ij} = g^{ia} g^{jb} w_{ab}
  Mat<double> r(4, 4);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      double s = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += eps4(i, j, k, l) * up(i, j);
      r(k, l) = 0.5 * sq * s;
    }
  return r;
}

Vec<double> star_three_form_dim4(const Cube3<double>& w, const Mat<double>& g, int orientation) {
  require_dim4(w.n);
  const Mat<double> ginv = inverse(g);
  const double sq = volume_density(g) * orientation;
  // raise all three indices
  Cube3<double> up(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        double s = 0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
              s += ginv(a, i) * ginv(b, j) * ginv(c, k) * w.at(i, j, k);
        up.at(a, b, c) = s;
      }
  Vec<double> r(4, 0.0);
  for (int m = 0; m < 4; ++m) {
    double s = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) s += eps4(i, j, k, m) * up.at(i, j, k);
    r[static_cast<size_t>(m)] = sq * s / 6.0;
  }
  return r;
}

double gnorm_one_form(const Vec<double>& a, const Mat<double>& ginv) {
  const int n = static_cast<int>(a.size());
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s += ginv(i, j) * a[static_cast<size_t>(i)] * a[static_cast<size_t>(j)];
  return std::sqrt(std::max(0.0, s));
}

double gnorm_two_form(const Mat<double>& w, const Mat<double>& ginv) {
  const Mat<double> up = ginv * w * transpose(ginv);
  double s = 0;
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j) s += w(i, j) * up(i, j);
  return std::sqrt(std::max(0.0, 0.5 * s));
}

double gnorm_three_form(const Cube3<double>& w, const Mat<double>& ginv) {
  const int n = w.n;
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double up = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              up += ginv(i, a) * ginv(j, b) * ginv(k, c) * w.at(a, b, c);
        s += w.at(i, j, k) * up;
      }
  return std::sqrt(std::max(0.0, s / 6.0));
}

}  // namespace gkv
