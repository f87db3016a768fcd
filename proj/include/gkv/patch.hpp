#ifndef GKV_PATCH_HPP
#define GKV_PATCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gkv/expr.hpp"
#include "gkv/linalg.hpp"

namespace gkv {

struct SamplePlan {
  int grid_per_axis = 5;     // requested per-axis resolution
  int random_count = 64;     // seeded random interior points
  std::uint64_t seed = 0;
  int max_grid_total = 625;  // grid is thinned so its total stays below this
};

// One coordinate chart with a box domain. All fields live over a patch.
struct Patch {
  int dim = 0;
  std::vector<std::string> coords;
  std::vector<double> lo, hi;
  SamplePlan plan;
  int orientation = +1;

  void validate() const;
};

// Deterministic sample set: thinned uniform interior grid (5% inset from the
// boundary) followed by seeded uniform random points.
std::vector<std::vector<double>> sample_points(const Patch& patch);

// Coarse pre-grid used for load-time validation.
std::vector<std::vector<double>> coarse_points(const Patch& patch);

// Matrix / vector / scalar fields of expressions over a patch.
struct MatrixField {
  int n = 0;
  std::vector<ExprPtr> entries;  // row major, n*n

  const ExprPtr& at(int i, int j) const { return entries[static_cast<size_t>(i * n + j)]; }
  ExprPtr& at(int i, int j) { return entries[static_cast<size_t>(i * n + j)]; }

  static MatrixField zero(int n);
  static MatrixField identity(int n);

  Mat<Jet> eval(std::span<const double> p) const;
  Mat<double> eval_values(std::span<const double> p) const;
};

struct VectorField {
  std::vector<ExprPtr> entries;

  Vec<Jet> eval(std::span<const double> p) const;
  Vec<double> eval_values(std::span<const double> p) const;
};

struct ScalarFieldExpr {
  ExprPtr e;
  Jet eval(std::span<const double> p) const { return eval_jet(e, p); }
};

// Entrywise sum as a new expression field (used by the B-field transform).
MatrixField add_fields(const MatrixField& a, const MatrixField& b);

// The (g, b, J+, J-) bundle of expression fields over a patch.
struct QuadrupleFields {
  Patch patch;
  MatrixField g, b, jplus, jminus;
};

// Christoffel symbols Gamma^k_{ij} of g at a point, plus cached values.
struct Christoffels {
  int n = 0;
  std::vector<double> gamma;  // k*n*n + i*n + j

  double at(int k, int i, int j) const { return gamma[static_cast<size_t>((k * n + i) * n + j)]; }
  double& at(int k, int i, int j) { return gamma[static_cast<size_t>((k * n + i) * n + j)]; }
};

// Everything repeatedly needed at one sample point: jets of the four fields,
// the metric inverse (with jets), Cholesky factor and Christoffels.
struct PointFrame {
  std::vector<double> p;
  int n = 0;
  Mat<Jet> g, b, jp, jm;
  Mat<Jet> ginv;
  Mat<double> gv, bv, jpv, jmv, ginvv, chol_lower;
  Christoffels gamma;

  static PointFrame at(const QuadrupleFields& q, const std::vector<double>& p);
};

// g and g^{-1} as jet matrices; fails on a non-SPD metric at p.
std::pair<Mat<Jet>, Mat<Jet>> metric_sharp_flat(const MatrixField& g, const Patch& patch,
                                                const std::vector<double>& p);

Christoffels christoffels(const Mat<Jet>& g, const Mat<Jet>& ginv);

}  // namespace gkv

#endif
