#include "gkv/fourdim.hpp"

#include <random>

#include "gkv/quaternion.hpp"

namespace gkv {

namespace {

double pfaffian4(const Mat<double>& w) {
  return w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2);
}

Vec<double> matvec_vals(const Mat<double>& m, const Vec<double>& v) { return m * v; }

double gdot(const Mat<double>& g, const Vec<double>& u, const Vec<double>& v) {
  double s = 0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      s += u[static_cast<size_t>(i)] * g(i, j) * v[static_cast<size_t>(j)];
  return s;
}

}  // namespace

void check_four_point(const FourPointData& d, double margin) {
  if (d.g.rows() != 4) fail(errc::spec_error, "four-dimensional data required");
  const Mat<double> omega_p = transpose(d.jp) * d.g;  // g(J+ ., .)
  const Mat<double> omega_m = transpose(d.jm) * d.g;
  const double sp = pfaffian4(omega_p) * d.orientation;
  const double sm = pfaffian4(omega_m) * d.orientation;
  if (sp <= 0 || sm <= 0)
    fail(errc::orientation_mismatch,
         "J+ / J- do not induce the declared orientation (Pfaffian signs " +
             std::to_string(sp) + ", " + std::to_string(sm) + ")");
  if (!(std::abs(d.a) < 1.0 - margin))
    fail(errc::singular_operator, "|a| too close to 1: J+ and J- nearly dependent");
}

FourDimResiduals four_point_residuals(const FourPointData& d, double du_tol) {
  FourDimResiduals out;
  const int n = 4;
  const Mat<double> ginv = inverse(d.g);
  const double lambda = std::sqrt((1.0 + d.a) / (1.0 - d.a));
  const Mat<double> kmetric = scale(d.g, lambda);

  // K = K+ K- = -[J+,J-] / (2 sqrt(1-a^2))
  const Mat<double> comm = d.jp * d.jm - d.jm * d.jp;
  const Mat<double> kk = scale(comm, -1.0 / (2.0 * std::sqrt(1.0 - d.a * d.a)));

  // du = -da/(1-a)
  Vec<double> du(d.da.size());
  for (size_t i = 0; i < du.size(); ++i) du[i] = -d.da[i] / (1.0 - d.a);

  // Eq. (1.11) second equality: du ^ b + *_k (K du) = 0, with the musical
  // action K du = g(K (du)#, .).
  const Vec<double> kdu_mus = matvec_vals(d.g * kk * ginv, du);
  const Cube3<double> lhs = wedge12(du, d.b);
  const Cube3<double> rhs = star_one_form_dim4(kdu_mus, kmetric, d.orientation);
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(lhs.at(i, j, k) + rhs.at(i, j, k)));
  out.eq_1_11_second = worst;

  // Eq. (1.10) line 2 in the form consistent with (1.11) and the k above:
  // *(da ^ b) = (da o [J+,J-]) / (2(1-a)).
  {
    const Cube3<double> dab = wedge12(d.da, d.b);
    const Vec<double> star = star_three_form_dim4(dab, d.g, d.orientation);
    const Vec<double> act = matvec_vals(transpose(comm), d.da);
    double w10 = 0;
    for (int i = 0; i < n; ++i)
      w10 = std::max(w10, std::abs(star[static_cast<size_t>(i)] -
                                   act[static_cast<size_t>(i)] / (2.0 * (1.0 - d.a))));
    out.eq_1_10_line2 = w10;
  }

  // conformal cross-check on the same covector: *_k alpha = lambda *_g alpha
  {
    const Cube3<double> a1 = star_one_form_dim4(kdu_mus, kmetric, d.orientation);
    const Cube3<double> a2 = star_one_form_dim4(kdu_mus, d.g, d.orientation);
    double w = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          w = std::max(w, std::abs(a1.at(i, j, k) - lambda * a2.at(i, j, k)));
    out.star_conformal = w;
  }

  // b-decomposition where du != 0: adapted frame f1 = grad u / |grad u|,
  // f2 = K f1, f3 in the orthocomplement, f4 = K f3; vE, vF are the k-metric
  // area forms oriented by (f1, f2) and (f3, f4).
  const Vec<double> gradu = matvec_vals(ginv, du);
  const double gu = std::sqrt(std::max(0.0, gdot(d.g, gradu, gradu)));
  if (gu <= du_tol) {
    out.decomposition_evaluated = false;
    return out;
  }
  out.decomposition_evaluated = true;

  Vec<double> f1 = gradu;
  for (auto& x : f1) x /= gu;
  const Vec<double> f2 = matvec_vals(kk, f1);
  // pick f3 as the best-projected coordinate vector
  Vec<double> f3;
  double best = -1;
  for (int c = 0; c < n; ++c) {
    Vec<double> v(static_cast<size_t>(n), 0.0);
    v[static_cast<size_t>(c)] = 1.0;
    const double c1 = gdot(d.g, v, f1), c2 = gdot(d.g, v, f2);
    for (int i = 0; i < n; ++i)
      v[static_cast<size_t>(i)] -= c1 * f1[static_cast<size_t>(i)] + c2 * f2[static_cast<size_t>(i)];
    const double nn = gdot(d.g, v, v);
    if (nn > best) {
      best = nn;
      f3 = v;
    }
  }
  const double f3n = std::sqrt(best);
  for (auto& x : f3) x /= f3n;
  const Vec<double> f4 = matvec_vals(kk, f3);

  Mat<double> frame(n, n);
  for (int i = 0; i < n; ++i) {
    frame(i, 0) = f1[static_cast<size_t>(i)];
    frame(i, 1) = f2[static_cast<size_t>(i)];
    frame(i, 2) = f3[static_cast<size_t>(i)];
    frame(i, 3) = f4[static_cast<size_t>(i)];
  }
  const Mat<double> coframe = inverse(frame);  // rows are f^1..f^4

  auto covector_row = [&](int r) {
    Vec<double> v(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) v[static_cast<size_t>(j)] = coframe(r, j);
    return v;
  };
  const Vec<double> co1 = covector_row(0), co2 = covector_row(1), co3 = covector_row(2),
                    co4 = covector_row(3);

  const Mat<double> v_e = scale(wedge11(co1, co2), lambda);
  const Mat<double> v_f = scale(wedge11(co3, co4), lambda);

  // b(f1, f2) etc.
  auto bval = [&](const Vec<double>& x, const Vec<double>& y) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += x[static_cast<size_t>(i)] * d.b(i, j) * y[static_cast<size_t>(j)];
    return s;
  };
  const double c = bval(f1, f2) / lambda;
  const double a3 = bval(f1, f3) / gu;
  const double a4 = bval(f1, f4) / gu;
  Vec<double> alpha(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    alpha[static_cast<size_t>(i)] = a3 * co3[static_cast<size_t>(i)] + a4 * co4[static_cast<size_t>(i)];

  const Mat<double> rebuilt = scale(v_e, c) + v_f + wedge11(du, alpha);
  out.decomposition = max_abs(d.b - rebuilt);
  return out;
}

FourDimFieldResiduals four_dim_field_residuals(const PointFrame& f, int orientation,
                                               double margin) {
  if (f.n != 4) fail(errc::spec_error, "fourdim suite requires a 4-dimensional patch");
  FourDimFieldResiduals out;

  const SigmaData s = sigma_and_a(f);
  if (!s.scalar_regime(1e-8))
    fail_at(errc::spec_error, "Sigma is not scalar at the point (same-orientation check failed?)",
            f.p);

  const GaugeData gauge = normalized_gauge(f);

  FourPointData d{.g = f.gv,
                  .jp = f.jpv,
                  .jm = f.jmv,
                  .a = s.a.v,
                  .da = d0(s.a),
                  .b = values_of(gauge.b_gauge),
                  .orientation = orientation};
  check_four_point(d, margin);
  out.algebraic = four_point_residuals(d);

  // derivative-bearing lines, all in the gauge
  const Cube3<double> db = d2(gauge.b_gauge);
  const Vec<double> da = d0(s.a);
  const Cube3<double> dab = wedge12(da, d.b);
  Vec<double> du(da.size());
  for (size_t i = 0; i < du.size(); ++i) du[i] = -da[i] / (1.0 - d.a);
  const Cube3<double> dub = wedge12(du, d.b);

  double w1 = 0, w2 = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        w1 = std::max(w1, std::abs(db.at(i, j, k) + dab.at(i, j, k) / (1.0 - d.a)));
        w2 = std::max(w2, std::abs(db.at(i, j, k) - dub.at(i, j, k)));
      }
  out.eq_1_10_line1 = w1;
  out.eq_1_11_first = w2;
  return out;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Vec<double> unit3(std::mt19937_64& rng) {
  for (;;) {
    Vec<double> u = {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const double nn = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    if (nn > 1e-4 && nn <= 1.0) {
      const double inv = 1.0 / std::sqrt(nn);
      for (auto& x : u) x *= inv;
      return u;
    }
  }
}

}  // namespace

FourPointData sample_four_point(std::uint64_t seed, std::uint64_t index, bool decomposed) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  FourPointData d;
  d.orientation = +1;

  // SPD metric via a lower-triangular factor with controlled conditioning
  Mat<double> l(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) l(i, j) = uniform(rng, -0.5, 0.5);
    l(i, i) = uniform(rng, 0.6, 1.6);
  }
  d.g = l * transpose(l);

  // same-orientation Hermitian pair with |a| bounded away from 1
  Vec<double> u1, u2;
  double a;
  do {
    u1 = unit3(rng);
    u2 = unit3(rng);
    a = u1[0] * u2[0] + u1[1] * u2[1] + u1[2] * u2[2];
  } while (std::abs(a) > 0.9);
  d.a = a;
  const Mat<double> linvt = transpose(inverse(l));
  const Mat<double> lt = transpose(l);
  d.jp = linvt * quat_unit(u1[0], u1[1], u1[2]) * lt;
  d.jm = linvt * quat_unit(u2[0], u2[1], u2[2]) * lt;

  // da with a safely nonzero gradient
  d.da.assign(4, 0.0);
  double nn = 0;
  do {
    nn = 0;
    for (int i = 0; i < 4; ++i) {
      d.da[static_cast<size_t>(i)] = uniform(rng, -1, 1);
      nn += d.da[static_cast<size_t>(i)] * d.da[static_cast<size_t>(i)];
    }
  } while (nn < 0.09);

  if (!decomposed) {
    d.b = Mat<double>(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        d.b(i, j) = uniform(rng, -1, 1);
        d.b(j, i) = -d.b(i, j);
      }
    return d;
  }

  // b from the decomposition c vE + vF + du ^ alpha
  const Mat<double> ginv = inverse(d.g);
  const double lambda = std::sqrt((1.0 + d.a) / (1.0 - d.a));
  const Mat<double> comm = d.jp * d.jm - d.jm * d.jp;
  const Mat<double> kk = scale(comm, -1.0 / (2.0 * std::sqrt(1.0 - d.a * d.a)));

  Vec<double> du(4);
  for (int i = 0; i < 4; ++i)
    du[static_cast<size_t>(i)] = -d.da[static_cast<size_t>(i)] / (1.0 - d.a);

  const Vec<double> gradu = ginv * du;
  const double gu = std::sqrt(gdot(d.g, gradu, gradu));
  Vec<double> f1 = gradu;
  for (auto& x : f1) x /= gu;
  const Vec<double> f2 = kk * f1;
  Vec<double> f3;
  double best = -1;
  for (int c = 0; c < 4; ++c) {
    Vec<double> v(4, 0.0);
    v[static_cast<size_t>(c)] = 1.0;
    const double c1 = gdot(d.g, v, f1), c2 = gdot(d.g, v, f2);
    for (int i = 0; i < 4; ++i)
      v[static_cast<size_t>(i)] -= c1 * f1[static_cast<size_t>(i)] + c2 * f2[static_cast<size_t>(i)];
    const double vn = gdot(d.g, v, v);
    if (vn > best) {
      best = vn;
      f3 = v;
    }
  }
  for (auto& x : f3) x /= std::sqrt(best);
  const Vec<double> f4 = kk * f3;

  Mat<double> frame(4, 4);
  for (int i = 0; i < 4; ++i) {
    frame(i, 0) = f1[static_cast<size_t>(i)];
    frame(i, 1) = f2[static_cast<size_t>(i)];
    frame(i, 2) = f3[static_cast<size_t>(i)];
    frame(i, 3) = f4[static_cast<size_t>(i)];
  }
  const Mat<double> co = inverse(frame);
  Vec<double> co1(4), co2(4), co3(4), co4(4);
  for (int j = 0; j < 4; ++j) {
    co1[static_cast<size_t>(j)] = co(0, j);
    co2[static_cast<size_t>(j)] = co(1, j);
    co3[static_cast<size_t>(j)] = co(2, j);
    co4[static_cast<size_t>(j)] = co(3, j);
  }
  const double c = uniform(rng, -2, 2);
  const double a3 = uniform(rng, -2, 2), a4 = uniform(rng, -2, 2);
  Vec<double> alpha(4);
  for (int i = 0; i < 4; ++i)
    alpha[static_cast<size_t>(i)] = a3 * co3[static_cast<size_t>(i)] + a4 * co4[static_cast<size_t>(i)];

  d.b = scale(wedge11(co1, co2), lambda * c) + scale(wedge11(co3, co4), lambda) +
        wedge11(du, alpha);
  return d;
}

}  // namespace gkv
