#include <doctest.h>

#include <random>
#include <sstream>

#include "gkv/calculus.hpp"
#include "gkv/quaternion.hpp"

using namespace gkv;

namespace {

std::mt19937_64 rng(7);
double u(double lo = -1, double hi = 1) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Patch flat_patch(int dim) {
  Patch p;
  p.dim = dim;
  for (int i = 1; i <= dim; ++i) p.coords.push_back("x" + std::to_string(i));
  p.lo.assign(static_cast<size_t>(dim), -1.0);
  p.hi.assign(static_cast<size_t>(dim), 1.0);
  return p;
}

MatrixField parse_matrix(const std::vector<std::vector<std::string>>& rows,
                         const std::vector<std::string>& coords) {
  MatrixField f;
  f.n = static_cast<int>(rows.size());
  for (const auto& r : rows)
    for (const auto& cell : r) f.entries.push_back(parse_expr(cell, coords));
  return f;
}

// central finite differences of matrix-field values
Mat<double> fd_matrix_partial(const MatrixField& f, std::vector<double> p, int i, double h) {
  p[static_cast<size_t>(i)] += h;
  Mat<double> up = f.eval_values(p);
  p[static_cast<size_t>(i)] -= 2 * h;
  Mat<double> dn = f.eval_values(p);
  return scale(up - dn, 1.0 / (2 * h));
}

}  // namespace

TEST_CASE("metric sharp/flat: Euclidean and conformal") {
  const Patch patch = flat_patch(2);
  MatrixField eucl = MatrixField::identity(2);
  auto [g, ginv] = metric_sharp_flat(eucl, patch, {0.3, -0.2});
  CHECK(max_abs(values_of(ginv) - eye(2)) == 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) CHECK(ginv(i, j).d[k] == 0.0);

  // g = e^{2 x1} delta: inverse e^{-2 x1} delta, d/dx1 (e^{-2x1}) = -2 at x1=0
  MatrixField conf = parse_matrix({{"exp(2*x1)", "0"}, {"0", "exp(2*x1)"}}, patch.coords);
  auto [g2, ginv2] = metric_sharp_flat(conf, patch, {0.0, 0.4});
  CHECK(values_of(ginv2)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ginv2(0, 0).d[0] == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(ginv2(1, 1).d[0] == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(ginv2(0, 0).d[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(max_abs(values_of(g2 * ginv2) - eye(2)) < 1e-12);

  MatrixField bad = parse_matrix({{"x1", "0"}, {"0", "1"}}, patch.coords);
  CHECK_THROWS_AS(metric_sharp_flat(bad, patch, {-0.5, 0.0}), Error);
}

TEST_CASE("christoffels of flat and conformal metrics") {
  const Patch patch = flat_patch(2);
  MatrixField eucl = MatrixField::identity(2);
  auto [g, ginv] = metric_sharp_flat(eucl, patch, {0.1, 0.2});
  Christoffels c = christoffels(g, ginv);
  for (double v : c.gamma) CHECK(v == 0.0);

  // g = e^{2 phi} delta with phi = x1: Gamma^1_11 = 1, Gamma^1_22 = -1,
  // Gamma^2_12 = 1, the rest fixed by symmetry or zero
  MatrixField conf = parse_matrix({{"exp(2*x1)", "0"}, {"0", "exp(2*x1)"}}, patch.coords);
  auto [g2, ginv2] = metric_sharp_flat(conf, patch, {0.3, -0.1});
  Christoffels c2 = christoffels(g2, ginv2);
  CHECK(c2.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c2.at(0, 1, 1) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(c2.at(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c2.at(1, 1, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c2.at(0, 0, 1) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(c2.at(1, 0, 0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(c2.at(1, 1, 1) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("metric compatibility: covariant derivative of g vanishes") {
  const Patch patch = flat_patch(3);
  MatrixField g = parse_matrix({{"1+x2^2", "0.2*x3", "0"},
                                {"0.2*x3", "2+sin(x1)", "0.1*x1"},
                                {"0", "0.1*x1", "1.5+x1^2"}},
                               patch.coords);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> p = {u(-0.5, 0.5), u(-0.5, 0.5), u(-0.5, 0.5)};
    auto [gj, ginv] = metric_sharp_flat(g, patch, p);
    Christoffels c = christoffels(gj, ginv);
    double worst = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          double nabla = gj(j, k).d[i];
          for (int l = 0; l < 3; ++l)
            nabla -= c.at(l, i, j) * gj(l, k).v + c.at(l, i, k) * gj(j, l).v;
          worst = std::max(worst, std::abs(nabla));
        }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("christoffels agree with a finite-difference oracle") {
  const Patch patch = flat_patch(2);
  MatrixField g = parse_matrix({{"1", "0"}, {"0", "exp(2*x1)"}}, patch.coords);  // warped product
  const std::vector<double> p = {0.37, -0.21};
  auto [gj, ginv] = metric_sharp_flat(g, patch, p);
  const Christoffels c = christoffels(gj, ginv);

  // oracle: FD partials of g, then the formula with a numerically inverted g
  const double h = 1e-6;
  std::vector<Mat<double>> dg;
  for (int i = 0; i < 2; ++i) dg.push_back(fd_matrix_partial(g, p, i, h));
  const Mat<double> gv = g.eval_values(p);
  const Mat<double> gi = inverse(gv);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0;
        for (int l = 0; l < 2; ++l)
          s += 0.5 * gi(k, l) * (dg[static_cast<size_t>(i)](j, l) + dg[static_cast<size_t>(j)](i, l) -
                                 dg[static_cast<size_t>(l)](i, j));
        CHECK(std::abs(c.at(k, i, j) - s) < 1e-6);
      }
  // warped product: Gamma^1_22 = -e^{2 x1}, Gamma^2_12 = 1
  CHECK(c.at(0, 1, 1) == doctest::Approx(-std::exp(2 * 0.37)).epsilon(1e-12));
  CHECK(c.at(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exterior derivative on 0-, 1- and 2-forms") {
  const Patch patch = flat_patch(3);
  const std::vector<double> p = {0.4, -0.3, 0.6};

  // d(x1 dx2) = dx1 ^ dx2
  VectorField w;
  w.entries = {parse_expr("0", patch.coords), parse_expr("x1", patch.coords),
               parse_expr("0", patch.coords)};
  const Mat<double> dw = d1(w.eval(p));
  CHECK(dw(0, 1) == 1.0);
  CHECK(dw(1, 0) == -1.0);
  CHECK(dw(0, 2) == 0.0);
  CHECK(dw(1, 2) == 0.0);

  // d(dx1) = 0
  VectorField dx1;
  dx1.entries = {parse_expr("1", patch.coords), parse_expr("0", patch.coords),
                 parse_expr("0", patch.coords)};
  CHECK(max_abs(d1(dx1.eval(p))) == 0.0);

  // d(df) = 0 with df supplied analytically, f = x1 x2 sin(x3)
  VectorField df;
  df.entries = {parse_expr("x2*sin(x3)", patch.coords), parse_expr("x1*sin(x3)", patch.coords),
                parse_expr("x1*x2*cos(x3)", patch.coords)};
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> q = {u(), u(), u()};
    CHECK(max_abs(d1(df.eval(q))) < 1e-10);
  }

  // d of a 0-form is the gradient one-form
  const Jet f = eval_jet(parse_expr("x1*x2*sin(x3)", patch.coords), p);
  const Vec<double> g0 = d0(f);
  CHECK(g0[0] == doctest::Approx(-0.3 * std::sin(0.6)).epsilon(1e-14));

  // d of a 2-form: d(x3 dx1^dx2) = dx3^dx1^dx2 = +1 on (1,2,3) ordering
  MatrixField two;
  two.n = 3;
  two.entries.assign(9, parse_expr("0", patch.coords));
  two.at(0, 1) = parse_expr("x3", patch.coords);
  two.at(1, 0) = parse_expr("-x3", patch.coords);
  const Cube3<double> d2w = d2(two.eval(p));
  CHECK(d2w.at(0, 1, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d2w.at(2, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d2w.at(1, 0, 2) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("lie bracket: coordinate fields, linear fields, antisymmetry, jacobi") {
  const Patch patch = flat_patch(3);
  auto vf = [&](std::vector<std::string> comps) {
    VectorField f;
    for (const auto& c : comps) f.entries.push_back(parse_expr(c, patch.coords));
    return f;
  };
  const std::vector<double> p = {0.2, 0.5, -0.4};

  CHECK(norm2(lie_bracket(vf({"1", "0", "0"}).eval(p), vf({"0", "1", "0"}).eval(p))) == 0.0);

  // [d1, x1 d2] = d2
  const Vec<double> br = lie_bracket(vf({"1", "0", "0"}).eval(p), vf({"0", "x1", "0"}).eval(p));
  CHECK(br[0] == 0.0);
  CHECK(br[1] == 1.0);
  CHECK(br[2] == 0.0);

  const VectorField fx = vf({"x1*x2", "x3^2", "x1+x2"});
  const VectorField fy = vf({"x2^2-x3", "x1*x3", "x2"});
  const VectorField fz = vf({"x3*x1", "x1^2", "x2*x3"});

  // antisymmetry
  for (int t = 0; t < 5; ++t) {
    const std::vector<double> q = {u(), u(), u()};
    Vec<double> a = lie_bracket(fx.eval(q), fy.eval(q));
    Vec<double> b = lie_bracket(fy.eval(q), fx.eval(q));
    double worst = 0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] + b[i]));
    CHECK(worst < 1e-12);
  }

  // Jacobi via a finite-difference outer bracket: [X,[Y,Z]] needs jets of
  // [Y,Z], which are polynomial here; compute them by evaluating the bracket
  // symbolically-by-hand is avoided by the FD route with tight tolerance.
  auto bracket_field = [&](const VectorField& a, const VectorField& b,
                           const std::vector<double>& q) {
    return lie_bracket(a.eval(q), b.eval(q));
  };
  auto jacobi = [&](const std::vector<double>& q) {
    const double h = 1e-6;
    auto outer = [&](const VectorField& a, const VectorField& b, const VectorField& c) {
      // [a, [b,c]] with FD jets of [b,c]
      Vec<double> res(3, 0.0);
      const Vec<double> av = a.eval_values(q);
      const Vec<double> inner = bracket_field(b, c, q);
      for (int i = 0; i < 3; ++i) {
        double s = 0;
        for (int j = 0; j < 3; ++j) {
          std::vector<double> qp = q, qm = q;
          qp[static_cast<size_t>(j)] += h;
          qm[static_cast<size_t>(j)] -= h;
          const double dj =
              (bracket_field(b, c, qp)[static_cast<size_t>(i)] - bracket_field(b, c, qm)[static_cast<size_t>(i)]) /
              (2 * h);
          s += av[static_cast<size_t>(j)] * dj;
          // minus [b,c]^j d_j a^i
          std::vector<double> qp2 = q, qm2 = q;
          qp2[static_cast<size_t>(j)] += h;
          qm2[static_cast<size_t>(j)] -= h;
          const double daj = (a.eval_values(qp2)[static_cast<size_t>(i)] -
                              a.eval_values(qm2)[static_cast<size_t>(i)]) /
                             (2 * h);
          s -= inner[static_cast<size_t>(j)] * daj;
        }
        res[static_cast<size_t>(i)] = s;
      }
      return res;
    };
    const Vec<double> t1 = outer(fx, fy, fz);
    const Vec<double> t2 = outer(fy, fz, fx);
    const Vec<double> t3 = outer(fz, fx, fy);
    double worst = 0;
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst,
                       std::abs(t1[static_cast<size_t>(i)] + t2[static_cast<size_t>(i)] +
                                t3[static_cast<size_t>(i)]));
    return worst;
  };
  for (int t = 0; t < 3; ++t) CHECK(jacobi({u(0.1, 0.6), u(0.1, 0.6), u(0.1, 0.6)}) < 1e-9);
}

TEST_CASE("covariant derivative of an endomorphism") {
  const Patch p2 = flat_patch(2);
  // constant J on a flat metric
  MatrixField cj = parse_matrix({{"0", "-1"}, {"1", "0"}}, p2.coords);
  MatrixField flat = MatrixField::identity(2);
  const std::vector<double> q = {0.3, 0.8};
  auto [g, ginv] = metric_sharp_flat(flat, p2, q);
  const Christoffels c = christoffels(g, ginv);
  CHECK(covariant_deriv_endo(cj.eval(q), c).max_abs() == 0.0);

  // rotation by angle x1 on flat R^2: ||nabla J||_F = sqrt(2) |d(angle)|
  MatrixField rot = parse_matrix({{"cos(x1)", "-sin(x1)"}, {"sin(x1)", "cos(x1)"}}, p2.coords);
  const Cube3<double> nj = covariant_deriv_endo(rot.eval(q), c);
  double fro = 0;
  for (double v : nj.a) fro += v * v;
  CHECK(std::sqrt(fro) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // finite-difference oracle on the components
  const double h = 1e-6;
  const Mat<double> dj = fd_matrix_partial(rot, q, 0, h);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(nj.at(0, k, j) - dj(k, j)) < 1e-9);

  // contraction linearity in the direction slot (tensoriality of the formula)
  Vec<double> w = {0.7, -1.1};
  double lhs = 0;
  for (int k = 0; k < 2; ++k) {
    double s = 0;
    for (int i = 0; i < 2; ++i) s += w[static_cast<size_t>(i)] * nj.at(i, k, 0);
    lhs += s;
  }
  double rhs = 0;
  for (int k = 0; k < 2; ++k)
    rhs += 0.7 * nj.at(0, k, 0) + (-1.1) * nj.at(1, k, 0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
}

TEST_CASE("nijenhuis tensor") {
  const Patch p4 = flat_patch(4);
  const std::vector<double> q = {0.3, -0.2, 0.5, 0.1};

  // constant complex structures are integrable
  MatrixField std_j = parse_matrix({{"0", "-1", "0", "0"},
                                    {"1", "0", "0", "0"},
                                    {"0", "0", "0", "-1"},
                                    {"0", "0", "1", "0"}},
                                   p4.coords);
  CHECK(nijenhuis(std_j.eval(q)).max_abs() == 0.0);

  // interpolation between two anticommuting structures is non-integrable
  MatrixField interp;
  interp.n = 4;
  const Mat<double> iq = quat_i(), jq = quat_j();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      std::ostringstream e;
      e.precision(17);
      e << iq(r, c) << "*cos(x3) + " << jq(r, c) << "*sin(x3)";
      interp.entries.push_back(parse_expr(e.str(), p4.coords));
    }
  const Cube3<double> n = nijenhuis(interp.eval(q));
  CHECK(n.max_abs() > 0.1);
  CHECK(n.max_abs() == doctest::Approx(1.0).epsilon(1e-12));  // unit coefficients by construction

  // finite-difference oracle for one component set
  const double h = 1e-6;
  std::vector<Mat<double>> dj;
  for (int i = 0; i < 4; ++i) dj.push_back(fd_matrix_partial(interp, q, i, h));
  const Mat<double> jv = interp.eval_values(q);
  double worst = 0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int jj = 0; jj < 4; ++jj) {
        double s = 0;
        for (int l = 0; l < 4; ++l)
          s += jv(l, i) * dj[static_cast<size_t>(l)](k, jj) - jv(l, jj) * dj[static_cast<size_t>(l)](k, i) +
               jv(k, l) * (dj[static_cast<size_t>(jj)](l, i) - dj[static_cast<size_t>(i)](l, jj));
        worst = std::max(worst, std::abs(n.at(k, i, jj) - s));
      }
  CHECK(worst < 1e-6);

  // rejects a non-almost-complex input
  MatrixField notacs = MatrixField::identity(4);
  CHECK_THROWS_AS(nijenhuis(notacs.eval(q)), Error);
}

TEST_CASE("hodge star in dimension four") {
  const Mat<double> g = eye(4);

  // *(dx1^dx2) = dx3^dx4
  Mat<double> w(4, 4);
  w(0, 1) = 1;
  w(1, 0) = -1;
  const Mat<double> sw = star_two_form_dim4(w, g, +1);
  CHECK(sw(2, 3) == doctest::Approx(1.0));
  CHECK(sw(0, 1) == doctest::Approx(0.0));

  // *1 = vol, *vol = 1
  CHECK(star_zero_form(1.0, g, +1) == doctest::Approx(1.0));
  CHECK(star_top_form(1.0, g, +1) == doctest::Approx(1.0));
  Mat<double> gscaled = scale(eye(4), 2.0);
  CHECK(star_zero_form(1.0, gscaled, +1) == doctest::Approx(4.0));  // sqrt(det) = 4
  CHECK(star_top_form(4.0, gscaled, +1) == doctest::Approx(1.0));

  // ** = id on 2-forms for random SPD metrics and random forms
  for (int t = 0; t < 5; ++t) {
    Mat<double> l(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < i; ++j) l(i, j) = u(-0.4, 0.4);
      l(i, i) = u(0.6, 1.5);
    }
    const Mat<double> gr = l * transpose(l);
    Mat<double> wr(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        wr(i, j) = u();
        wr(j, i) = -wr(i, j);
      }
    const Mat<double> ss = star_two_form_dim4(star_two_form_dim4(wr, gr, +1), gr, +1);
    CHECK(max_abs(ss - wr) < 1e-12);

    // pointwise isometry |w| = |*w|
    const Mat<double> gi = inverse(gr);
    CHECK(std::abs(gnorm_two_form(wr, gi) - gnorm_two_form(star_two_form_dim4(wr, gr, +1), gi)) <
          1e-10);

    // ** = -1 on 1-forms, and |alpha| = |*alpha|
    Vec<double> alpha = {u(), u(), u(), u()};
    const Cube3<double> sa = star_one_form_dim4(alpha, gr, +1);
    const Vec<double> ssa = star_three_form_dim4(sa, gr, +1);
    for (int i = 0; i < 4; ++i)
      CHECK(ssa[static_cast<size_t>(i)] == doctest::Approx(-alpha[static_cast<size_t>(i)]).epsilon(1e-11));
    CHECK(std::abs(gnorm_one_form(alpha, gi) - gnorm_three_form(sa, gi)) < 1e-10);

    // conformal rescaling on 1-forms: *_{c g} = c *_g in dim 4
    const double cfac = 1.7;
    const Cube3<double> s_scaled = star_one_form_dim4(alpha, scale(gr, cfac), +1);
    double worst = 0;
    for (size_t i = 0; i < sa.a.size(); ++i)
      worst = std::max(worst, std::abs(s_scaled.a[i] - cfac * sa.a[i]));
    CHECK(worst < 1e-10);
  }

  // orientation flips the sign
  const Mat<double> sneg = star_two_form_dim4(w, g, -1);
  CHECK(sneg(2, 3) == doctest::Approx(-1.0));

  // unsupported dimension
  CHECK_THROWS_AS(star_one_form_dim4({1.0, 0.0, 0.0}, eye(3), +1), Error);
}

TEST_CASE("wedge and interior products") {
  Vec<double> dx1 = {1, 0, 0}, dx2 = {0, 1, 0}, dx3 = {0, 0, 1};
  const Mat<double> w12 = wedge11(dx1, dx2);
  CHECK(w12(0, 1) == 1.0);   // (dx1^dx2)(d1, d2) = 1
  CHECK(w12(1, 0) == -1.0);

  Vec<double> e1 = {1, 0, 0};
  const Vec<double> i1 = interior2(e1, w12);
  CHECK(i1[1] == 1.0);  // i_{d1}(dx1^dx2) = dx2
  CHECK(i1[0] == 0.0);

  // (dx1 ^ (dx2^dx3))(d1,d2,d3) = 1, against the full S3 antisymmetrization
  const Mat<double> w23 = wedge11(dx2, dx3);
  const Cube3<double> t = wedge12(dx1, w23);
  CHECK(t.at(0, 1, 2) == 1.0);

  // oracle: sum over permutations of sign * a(x_{s1}) b(x_{s2}, x_{s3}) / 1!2! with
  // the shuffle normalization means three cyclic terms; expand fully here
  auto oracle = [&](const Vec<double>& a, const Mat<double>& b, int i, int j, int k) {
    return a[static_cast<size_t>(i)] * b(j, k) - a[static_cast<size_t>(j)] * b(i, k) +
           a[static_cast<size_t>(k)] * b(i, j);
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(t.at(i, j, k) == oracle(dx1, w23, i, j, k));

  // interior of a 3-form
  const Mat<double> it = interior3(e1, t);
  CHECK(max_abs(it - w23) == 0.0);

  // eval3 contracts all slots
  Vec<double> x = {1, 0, 0}, y = {0, 2, 0}, z = {0, 0, 3};
  CHECK(eval3(t, x, y, z) == 6.0);
}

TEST_CASE("sample points are deterministic, inside the box, and counted") {
  Patch p = flat_patch(2);
  p.plan.grid_per_axis = 5;
  p.plan.random_count = 16;
  p.plan.seed = 9;
  const auto pts1 = sample_points(p);
  const auto pts2 = sample_points(p);
  REQUIRE(pts1.size() == 25 + 16);
  CHECK(pts1 == pts2);
  for (const auto& q : pts1)
    for (int i = 0; i < 2; ++i) {
      CHECK(q[static_cast<size_t>(i)] >= p.lo[i] + 0.04 * (p.hi[i] - p.lo[i]));
      CHECK(q[static_cast<size_t>(i)] <= p.hi[i] - 0.04 * (p.hi[i] - p.lo[i]));
    }

  // the grid thins out in high dimension
  Patch p16 = flat_patch(16);
  p16.plan.random_count = 4;
  const auto pts16 = sample_points(p16);
  CHECK(pts16.size() == 1 + 4);

  Patch bad = flat_patch(2);
  bad.lo[0] = 2.0;
  bad.hi[0] = -2.0;
  CHECK_THROWS_AS(sample_points(bad), Error);
}
