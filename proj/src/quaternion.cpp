#include "gkv/quaternion.hpp"

namespace gkv {

namespace {

Mat<double> from_rows(const double (&r)[4][4]) {
  Mat<double> m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = r[i][j];
  return m;
}

}  // namespace

Mat<double> quat_i() {
  static const double r[4][4] = {{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  return from_rows(r);
}

Mat<double> quat_j() {
  static const double r[4][4] = {{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}};
  return from_rows(r);
}

Mat<double> quat_k() {
  static const double r[4][4] = {{0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}};
  return from_rows(r);
}

Mat<double> quat_unit(double alpha, double beta, double gamma) {
  const double nn = alpha * alpha + beta * beta + gamma * gamma;
  if (std::abs(nn - 1.0) > 1e-12)
    fail(errc::spec_error, "quaternion coefficients must satisfy alpha^2+beta^2+gamma^2 = 1");
  return scale(quat_i(), alpha) + scale(quat_j(), beta) + scale(quat_k(), gamma);
}

Mat<double> block_diag_copies(const Mat<double>& block, int copies) {
  const int b = block.rows();
  Mat<double> m(b * copies, b * copies);
  for (int c = 0; c < copies; ++c)
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) m(c * b + i, c * b + j) = block(i, j);
  return m;
}

}  // namespace gkv
