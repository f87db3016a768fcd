#include "gkv/patch.hpp"

#include <cmath>
#include <random>

namespace gkv {

void Patch::validate() const {
  if (dim < 2) fail(errc::dimension_limit, "patch dimension must be at least 2");
  if (dim > kMaxDim)
    fail(errc::dimension_limit,
         "patch dimension " + std::to_string(dim) + " exceeds the supported maximum " +
             std::to_string(kMaxDim));
  if (static_cast<int>(coords.size()) != dim || static_cast<int>(lo.size()) != dim ||
      static_cast<int>(hi.size()) != dim)
    fail(errc::spec_error, "coordinate/domain arrays do not match the patch dimension");
  for (int i = 0; i < dim; ++i)
    if (!(lo[i] < hi[i])) fail(errc::spec_error, "empty domain box on axis " + coords[i]);
}

namespace {

// 53-bit uniform in [0,1); independent of distribution implementations so the
// sample set is reproducible byte for byte.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int thinned_axis_count(int requested, int dim, int max_total) {
  int n = requested;
  auto total = [&](int m) {
    double t = 1;
    for (int i = 0; i < dim; ++i) {
      t *= m;
      if (t > 1e9) return 1e9;
    }
    return t;
  };
  while (n > 1 && total(n) > max_total) --n;
  return n < 1 ? 1 : n;
}

void grid_rec(const Patch& patch, int axis, int per_axis, std::vector<double>& cur,
              std::vector<std::vector<double>>& out) {
  if (axis == patch.dim) {
    out.push_back(cur);
    return;
  }
  const double lo = patch.lo[axis], hi = patch.hi[axis];
  for (int i = 0; i < per_axis; ++i) {
    const double t = per_axis == 1 ? 0.5 : 0.05 + 0.9 * static_cast<double>(i) / (per_axis - 1);
    cur[static_cast<size_t>(axis)] = lo + (hi - lo) * t;
    grid_rec(patch, axis + 1, per_axis, cur, out);
  }
}

}  // namespace

std::vector<std::vector<double>> sample_points(const Patch& patch) {
  patch.validate();
  std::vector<std::vector<double>> pts;
  const int per_axis =
      thinned_axis_count(patch.plan.grid_per_axis, patch.dim, patch.plan.max_grid_total);
  std::vector<double> cur(static_cast<size_t>(patch.dim));
  grid_rec(patch, 0, per_axis, cur, pts);

  std::mt19937_64 rng(patch.plan.seed);
  for (int k = 0; k < patch.plan.random_count; ++k) {
    std::vector<double> p(static_cast<size_t>(patch.dim));
    for (int i = 0; i < patch.dim; ++i) {
      const double t = 0.05 + 0.9 * unit_uniform(rng);
      p[static_cast<size_t>(i)] = patch.lo[i] + (patch.hi[i] - patch.lo[i]) * t;
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<std::vector<double>> coarse_points(const Patch& patch) {
  Patch coarse = patch;
  coarse.plan.grid_per_axis = 3;
  coarse.plan.max_grid_total = 81;
  coarse.plan.random_count = 16;
  return sample_points(coarse);
}

MatrixField MatrixField::zero(int n) {
  MatrixField f;
  f.n = n;
  f.entries.assign(static_cast<size_t>(n * n), Expr::constant(0.0));
  return f;
}

MatrixField MatrixField::identity(int n) {
  MatrixField f = zero(n);
  for (int i = 0; i < n; ++i) f.at(i, i) = Expr::constant(1.0);
  return f;
}

Mat<Jet> MatrixField::eval(std::span<const double> p) const {
  Mat<Jet> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = eval_jet(at(i, j), p);
  return m;
}

Mat<double> MatrixField::eval_values(std::span<const double> p) const {
  Mat<double> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = eval_value(at(i, j), p);
  return m;
}

Vec<Jet> VectorField::eval(std::span<const double> p) const {
  Vec<Jet> v(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) v[i] = eval_jet(entries[i], p);
  return v;
}

Vec<double> VectorField::eval_values(std::span<const double> p) const {
  Vec<double> v(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) v[i] = eval_value(entries[i], p);
  return v;
}

MatrixField add_fields(const MatrixField& a, const MatrixField& b) {
  if (a.n != b.n) fail(errc::spec_error, "field shapes differ in add_fields");
  MatrixField r;
  r.n = a.n;
  r.entries.reserve(a.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i)
    r.entries.push_back(Expr::binary(BinOp::Add, a.entries[i], b.entries[i]));
  return r;
}

bool cholesky(const Mat<double>& g, Mat<double>& lower) {
  const int n = g.rows();
  lower = Mat<double>(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        lower(i, i) = std::sqrt(s);
      } else {
        lower(i, j) = s / lower(j, j);
      }
    }
  }
  return true;
}

Vec<std::complex<double>> solve(Mat<std::complex<double>> a, Vec<std::complex<double>> b) {
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        piv = r;
      }
    if (best < 1e-300) fail(errc::internal, "singular system in solve()");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
    }
    for (int r = col + 1; r < n; ++r) {
      const std::complex<double> f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
    }
  }
  Vec<std::complex<double>> x(static_cast<size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    std::complex<double> s = b[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = s / a(i, i);
  }
  return x;
}

std::pair<Mat<Jet>, Mat<Jet>> metric_sharp_flat(const MatrixField& g, const Patch& patch,
                                                const std::vector<double>& p) {
  (void)patch;
  Mat<Jet> gj = g.eval(p);
  Mat<double> lower;
  if (!cholesky(values_of(gj), lower))
    fail_at(errc::singular_metric, "metric is not positive definite", p);
  return {gj, inverse(gj)};
}

Christoffels christoffels(const Mat<Jet>& g, const Mat<Jet>& ginv) {
  const int n = g.rows();
  Christoffels c;
  c.n = n;
  c.gamma.assign(static_cast<size_t>(n * n * n), 0.0);
  // Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l).v * (g(j, l).d[i] + g(i, l).d[j] - g(i, j).d[l]);
        c.at(k, i, j) = 0.5 * s;
        c.at(k, j, i) = 0.5 * s;
      }
  return c;
}

PointFrame PointFrame::at(const QuadrupleFields& q, const std::vector<double>& p) {
  PointFrame f;
  f.p = p;
  f.n = q.patch.dim;
  f.g = q.g.eval(p);
  f.b = q.b.eval(p);
  f.jp = q.jplus.eval(p);
  f.jm = q.jminus.eval(p);
  f.gv = values_of(f.g);
  if (!cholesky(f.gv, f.chol_lower))
    fail_at(errc::singular_metric, "metric is not positive definite", p);
  f.ginv = inverse(f.g);
  f.ginvv = values_of(f.ginv);
  f.bv = values_of(f.b);
  f.jpv = values_of(f.jp);
  f.jmv = values_of(f.jm);
  f.gamma = christoffels(f.g, f.ginv);
  return f;
}

}  // namespace gkv
