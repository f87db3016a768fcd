#ifndef GKV_EIGENDIST_HPP
#define GKV_EIGENDIST_HPP

#include <optional>

#include "gkv/bihermitian.hpp"

namespace gkv {

// One eigenvalue band of Sigma = J+J- + J-J+ at a point: the eigenvalue is
// -2 a_value, the projector is g-orthogonal.
struct EigenBand {
  double a_value = 0;
  int multiplicity = 0;
  Mat<double> projector;
};

struct EigenStructure {
  std::vector<EigenBand> bands;
  double cluster_tol = 1e-6;
};

// Symmetric eigendecomposition of Sigma in a g-orthonormal frame, clustered
// into bands. Fails with errc::ambiguous_clustering when two clusters sit
// between cluster_tol and 3*cluster_tol apart.
EigenStructure spectral_split(const PointFrame& f, double cluster_tol = 1e-6);

// Residuals of the projector algebra (idempotent, g-self-adjoint, mutually
// annihilating, summing to Id, commuting with J+-) for one point.
std::vector<NamedResidual> eigenstructure_residuals(const PointFrame& f,
                                                    const EigenStructure& es);

// Fixed band structure over a patch: multiplicities and per-point data. The
// clustering pass is sequential; pointwise projector jets come from the
// Lagrange polynomial through the band eigenvalues, which keeps them exactly
// differentiable.
struct BandStructure {
  int band_count = 0;
  std::vector<int> multiplicities;
  std::vector<double> a_values;  // at the first sample point
  double cluster_tol = 1e-6;
};

BandStructure cluster_bands(const QuadrupleFields& q,
                            const std::vector<std::vector<double>>& points,
                            double cluster_tol = 1e-6);

// Projector of band `j` with jets at one point (Lagrange polynomial in Sigma).
Mat<Jet> band_projector_jets(const PointFrame& f, const BandStructure& bs, int band);

// A distribution given by a projector field: the local frame projects the
// coordinate fields selected once per patch (frozen greedy order).
struct DistributionFrame {
  std::vector<int> column_order;  // frozen coordinate indices
  int rank = 0;
};

DistributionFrame freeze_frame(const Mat<double>& projector_values, const Mat<double>& g,
                               int rank, double null_tol = 1e-6);

// g-orthonormal frame with jets at a point, Gram-Schmidt in the frozen order.
std::vector<Vec<Jet>> frame_at(const Mat<Jet>& projector, const Mat<Jet>& g,
                               const DistributionFrame& fr, const std::vector<double>& p,
                               double null_tol = 1e-6);

// max over frame pairs of || (Id - P) [X_a, X_b] ||_g.
double frobenius_residual_at(const PointFrame& f, const Mat<Jet>& projector,
                             const DistributionFrame& fr);

// max over X in D, Y,Z in D-perp of |g(nabla_Y X, Z) + g(nabla_Z X, Y)|.
double riemannian_foliation_residual_at(const PointFrame& f, const Mat<Jet>& projector,
                                        const DistributionFrame& fr,
                                        const DistributionFrame& fr_perp);

// || nabla P || (covariant derivative of the projector field).
double parallel_foliation_residual_at(const PointFrame& f, const Mat<Jet>& projector);

}  // namespace gkv

#endif
