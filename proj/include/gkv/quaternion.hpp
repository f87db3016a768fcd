#ifndef GKV_QUATERNION_HPP
#define GKV_QUATERNION_HPP

#include "gkv/linalg.hpp"

namespace gkv {

// Left-multiplication matrices of i, j, k on H = span{1, i, j, k}. All three
// are orthogonal, antisymmetric, square to -Id, pairwise anticommute and
// induce the standard orientation of R^4.
Mat<double> quat_i();
Mat<double> quat_j();
Mat<double> quat_k();

// alpha i + beta j + gamma k with alpha^2 + beta^2 + gamma^2 = 1.
Mat<double> quat_unit(double alpha, double beta, double gamma);

// Block-diagonal copy of a 4x4 matrix on R^{4n}.
Mat<double> block_diag_copies(const Mat<double>& block, int copies);

}  // namespace gkv

#endif
