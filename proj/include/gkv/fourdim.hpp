#ifndef GKV_FOURDIM_HPP
#define GKV_FOURDIM_HPP

#include <cstdint>

#include "gkv/bihermitian.hpp"

namespace gkv {

// Pointwise algebraic data for the four-dimensional relations: a metric, two
// Hermitian structures inducing the declared orientation with |a| < 1, the
// differential of a as a covector, and a two-form (the gauge-normalized b in
// the field-based suite, arbitrary in the samplers).
struct FourPointData {
  Mat<double> g, jp, jm;
  double a = 0;
  Vec<double> da;
  Mat<double> b;
  int orientation = +1;
};

struct FourDimResiduals {
  double eq_1_10_line2 = 0;   // *(da^b) = da o [J+,J-] / (2(1-a))
  double eq_1_11_second = 0;  // du^b = - *_k (K du)
  double decomposition = 0;   // b minus (c vE + vF + du^alpha)
  bool decomposition_evaluated = false;
  double star_conformal = 0;  // *_k on 1-forms vs lambda *_g
};

// Consistency preconditions; throws orientation_mismatch / spec errors.
void check_four_point(const FourPointData& d, double margin = 1e-6);

FourDimResiduals four_point_residuals(const FourPointData& d, double du_tol = 1e-10);

// Derivative-bearing residuals for a 4-dimensional quadruple field at one
// point, evaluated in the Re eps- = 0 gauge:
//   line 1 of (1.10): db = -da^b/(1-a); first equality of (1.11): db = du^b.
struct FourDimFieldResiduals {
  double eq_1_10_line1 = 0;
  double eq_1_11_first = 0;
  FourDimResiduals algebraic;
};

FourDimFieldResiduals four_dim_field_residuals(const PointFrame& f, int orientation,
                                               double margin = 1e-6);

// Seeded pointwise samplers for the equivalence experiments. `decomposed`
// picks b of the form c vE + vF + du^alpha; otherwise b is a generic
// antisymmetric matrix.
FourPointData sample_four_point(std::uint64_t seed, std::uint64_t index, bool decomposed);

}  // namespace gkv

#endif
