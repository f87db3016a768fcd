#ifndef GKV_BIHERMITIAN_HPP
#define GKV_BIHERMITIAN_HPP

#include <string>
#include <vector>

#include "gkv/calculus.hpp"
#include "gkv/gencomplex.hpp"
#include "gkv/patch.hpp"

namespace gkv {

// One pointwise residual contribution; suites merge these over sample points.
struct NamedResidual {
  std::string name;
  double value = 0;
  bool evaluated = true;
};

// Quadruple sanity: J^2 = -Id, Hermitian compatibility, b antisymmetry,
// g symmetry (positive definiteness already enforced by PointFrame).
std::vector<NamedResidual> validate_residuals(const PointFrame& f);

struct SigmaData {
  Mat<Jet> sigma;          // J+J- + J-J+ with jets
  Jet a;                   // -trace(J+J-)/dim
  double scalar_residual;  // || Sigma + 2 a Id ||
  bool scalar_regime(double tol = 1e-8) const { return scalar_residual < tol; }
};

SigmaData sigma_and_a(const PointFrame& f);

// The two complex two-forms of L1 = L(T^C M, eps+), L2 = L(T^C M, eps-):
//   Im eps+- = 2 g (J+ -+ J-)^{-1},
//   Re eps+- = b + g (J+ +- J-)(J+ -+ J-)^{-1}.
struct EpsilonPair {
  Mat<Jet> im_plus, re_plus, im_minus, re_minus;

  Mat<CJet> plus() const;
  Mat<CJet> minus() const;
};

EpsilonPair epsilon_from_quadruple(const PointFrame& f);

// Defining-equation reconstruction residuals plus the scalar-regime
// consequences (the latter skipped outside the scalar regime).
std::vector<NamedResidual> epsilon_residuals(const PointFrame& f, double scalar_tol = 1e-8);

// Generalized Kahler integrability: Nijenhuis tensors and the parallelism
// equation g((nabla_X J)(Y), Z) = -+ (db(X,JY,Z) + db(X,Y,JZ))/2.
std::vector<NamedResidual> gk_residuals(const PointFrame& f);

// The scalar-regime identity chain. Each identity is evaluated only where its
// own denominators (1 +- a and the conformal powers) stay above `margin`;
// skipped identities come back with evaluated = false.
std::vector<NamedResidual> identity_residuals(const PointFrame& f, double margin = 1e-6);

// Gauge with Re eps- = 0:  b = -g (J+ - J-)(J+ + J-)^{-1}  and
// Re eps+ = g [(J+ + J-)(J+ - J-)^{-1} - (J+ - J-)(J+ + J-)^{-1}].
struct GaugeData {
  Mat<Jet> b_gauge;
  Mat<Jet> re_eps_plus;
};

GaugeData normalized_gauge(const PointFrame& f);

std::vector<NamedResidual> gauge_residuals(const PointFrame& f);

// B-field transform: g, J+- fixed; b -> b + B (entrywise expression sum).
// Fails when dB exceeds closed_tol on a coarse sampling of the patch.
QuadrupleFields b_field_transform(const QuadrupleFields& q, const MatrixField& big_b,
                                  double closed_tol = 1e-10);

// K+- = (J+ +- J-) / sqrt(2 (1 +- a)) with the conformal exponents
// f+- = -log(2 (1 +- a))/4; requires |a| < 1.
struct KPair {
  Mat<Jet> kplus, kminus;
  Jet fplus, fminus;
};

KPair k_pair(const PointFrame& f, const Jet& a);

}  // namespace gkv

#endif
