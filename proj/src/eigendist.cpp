#include "gkv/eigendist.hpp"

#include <Eigen/Dense>

namespace gkv {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EMat to_eigen(const Mat<double>& m) {
  EMat e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Mat<double> from_eigen(const EMat& e) {
  Mat<double> m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

struct GFrameEigen {
  Eigen::VectorXd values;  // ascending
  EMat vectors;            // columns, in the g-orthonormal frame
  EMat l, linvt;           // Cholesky factor of g and inv(L)^T
};

GFrameEigen g_symmetric_eigen(const PointFrame& f, const Mat<double>& sigma) {
  GFrameEigen out;
  out.l = to_eigen(f.chol_lower);
  EMat s = to_eigen(sigma);
  EMat lt = out.l.transpose();
  // A = L^T Sigma L^{-T}: symmetric because Sigma is g-self-adjoint
  EMat linv = out.l.inverse();
  out.linvt = linv.transpose();
  EMat a = lt * s * out.linvt;
  a = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<EMat> es(a);
  if (es.info() != Eigen::Success) fail(errc::internal, "eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

std::vector<std::pair<int, int>> cluster_ranges(const Eigen::VectorXd& vals, double tol,
                                                const std::vector<double>& point) {
  std::vector<std::pair<int, int>> ranges;
  const int n = static_cast<int>(vals.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || vals[i] - vals[i - 1] > tol) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  // guard band: adjacent cluster boundaries must be separated by > 3 tol
  for (size_t r = 1; r < ranges.size(); ++r) {
    const double gap = vals[ranges[r].first] - vals[ranges[r - 1].second - 1];
    if (gap <= 3.0 * tol)
      fail_at(errc::ambiguous_clustering,
              "eigenvalue gap " + std::to_string(gap) + " lies inside the guard band (" +
                  std::to_string(tol) + ", " + std::to_string(3.0 * tol) + "]",
              point);
  }
  return ranges;
}

}  // namespace

EigenStructure spectral_split(const PointFrame& f, double cluster_tol) {
  const SigmaData s = sigma_and_a(f);
  const Mat<double> sigma = values_of(s.sigma);
  GFrameEigen ge = g_symmetric_eigen(f, sigma);
  const auto ranges = cluster_ranges(ge.values, cluster_tol, f.p);

  EigenStructure es;
  es.cluster_tol = cluster_tol;
  for (const auto& [b, e] : ranges) {
    EigenBand band;
    band.multiplicity = e - b;
    double mean = 0;
    for (int i = b; i < e; ++i) mean += ge.values[i];
    mean /= band.multiplicity;
    band.a_value = -0.5 * mean + 0.0;  // +0.0 normalizes -0
    EMat q = ge.vectors.middleCols(b, e - b);
    EMat p = ge.linvt * q * q.transpose() * ge.l.transpose();
    band.projector = from_eigen(p);
    es.bands.push_back(std::move(band));
  }
  return es;
}

std::vector<NamedResidual> eigenstructure_residuals(const PointFrame& f,
                                                    const EigenStructure& es) {
  const int n = f.n;
  std::vector<NamedResidual> out;
  double idem = 0, selfadj = 0, annihilate = 0, commute_p = 0, commute_m = 0, range = 0;

  Mat<double> sum(n, n);
  for (const auto& band : es.bands) {
    const Mat<double>& p = band.projector;
    idem = std::max(idem, max_abs(p * p - p));
    selfadj = std::max(selfadj, max_abs(f.gv * p - transpose(p) * f.gv));
    commute_p = std::max(commute_p, max_abs(f.jpv * p - p * f.jpv));
    commute_m = std::max(commute_m, max_abs(f.jmv * p - p * f.jmv));
    range = std::max(range, std::max(-2.0 * band.a_value - 2.0, -(-2.0 * band.a_value) - 2.0));
    sum = sum + p;
  }
  for (size_t i = 0; i < es.bands.size(); ++i)
    for (size_t j = 0; j < es.bands.size(); ++j) {
      if (i == j) continue;
      annihilate =
          std::max(annihilate, max_abs(es.bands[i].projector * es.bands[j].projector));
    }
  for (int i = 0; i < n; ++i) sum(i, i) -= 1.0;

  const SigmaData s = sigma_and_a(f);
  const Mat<double> sv = values_of(s.sigma);
  out.push_back({"eig.projector_idempotent", idem});
  out.push_back({"eig.projector_g_self_adjoint", selfadj});
  out.push_back({"eig.projectors_annihilate", annihilate});
  out.push_back({"eig.partition_of_identity", max_abs(sum)});
  out.push_back({"eig.commutes_jplus", commute_p});
  out.push_back({"eig.commutes_jminus", commute_m});
  out.push_back({"eig.sigma_g_symmetric", max_abs(f.gv * sv - transpose(sv) * f.gv)});
  out.push_back({"eig.eigenvalue_range", std::max(0.0, range)});
  return out;
}

BandStructure cluster_bands(const QuadrupleFields& q,
                            const std::vector<std::vector<double>>& points, double cluster_tol) {
  BandStructure bs;
  bs.cluster_tol = cluster_tol;
  bool first = true;
  for (const auto& p : points) {
    const PointFrame f = PointFrame::at(q, p);
    const EigenStructure es = spectral_split(f, cluster_tol);
    if (first) {
      bs.band_count = static_cast<int>(es.bands.size());
      for (const auto& b : es.bands) {
        bs.multiplicities.push_back(b.multiplicity);
        bs.a_values.push_back(b.a_value);
      }
      first = false;
      continue;
    }
    if (static_cast<int>(es.bands.size()) != bs.band_count)
      fail_at(errc::rank_jump, "band count changes across the patch", p);
    for (int j = 0; j < bs.band_count; ++j)
      if (es.bands[static_cast<size_t>(j)].multiplicity != bs.multiplicities[static_cast<size_t>(j)])
        fail_at(errc::rank_jump, "band multiplicity changes across the patch", p);
  }
  if (first) fail(errc::spec_error, "no sample points for clustering");
  return bs;
}

Mat<Jet> band_projector_jets(const PointFrame& f, const BandStructure& bs, int band) {
  const int n = f.n;
  const SigmaData s = sigma_and_a(f);
  if (bs.band_count == 1) return eye_jet(n, n);

  // band eigenvalues with jets: lambda_j = tr(Sigma P_j)/m_j, using the
  // eigensolver values for P_j and jets of Sigma (exact first derivative of a
  // symmetric eigenvalue cluster mean)
  const EigenStructure es = spectral_split(f, bs.cluster_tol);
  std::vector<Jet> lambda(static_cast<size_t>(bs.band_count));
  for (int j = 0; j < bs.band_count; ++j) {
    Jet tr = Jet::constant(0.0, n);
    const Mat<double>& pj = es.bands[static_cast<size_t>(j)].projector;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) tr += s.sigma(r, c) * Jet::constant(pj(c, r), n);
    lambda[static_cast<size_t>(j)] = tr / static_cast<double>(bs.multiplicities[static_cast<size_t>(j)]);
  }

  // P_band = prod_{k != band} (Sigma - lambda_k) / (lambda_band - lambda_k)
  Mat<Jet> p = eye_jet(n, n);
  for (int k = 0; k < bs.band_count; ++k) {
    if (k == band) continue;
    Mat<Jet> factor = s.sigma;
    for (int i = 0; i < n; ++i) factor(i, i) = factor(i, i) - lambda[static_cast<size_t>(k)];
    const Jet denom = lambda[static_cast<size_t>(band)] - lambda[static_cast<size_t>(k)];
    factor = scale(factor, Jet::constant(1.0, n) / denom);
    p = p * factor;
  }
  return p;
}

DistributionFrame freeze_frame(const Mat<double>& projector_values, const Mat<double>& g,
                               int rank, double null_tol) {
  const int n = projector_values.rows();
  DistributionFrame fr;
  fr.rank = rank;
  std::vector<Vec<double>> chosen;
  std::vector<bool> used(static_cast<size_t>(n), false);

  auto gdot = [&](const Vec<double>& u, const Vec<double>& v) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += u[static_cast<size_t>(i)] * g(i, j) * v[static_cast<size_t>(j)];
    return s;
  };

  for (int pick = 0; pick < rank; ++pick) {
    int best = -1;
    double best_norm = null_tol;
    Vec<double> best_vec;
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<size_t>(c)]) continue;
      Vec<double> v(static_cast<size_t>(n));
      for (int r = 0; r < n; ++r) v[static_cast<size_t>(r)] = projector_values(r, c);
      for (const auto& u : chosen) {
        const double coef = gdot(v, u);
        for (int r = 0; r < n; ++r) v[static_cast<size_t>(r)] -= coef * u[static_cast<size_t>(r)];
      }
      const double nn = std::sqrt(std::max(0.0, gdot(v, v)));
      if (nn > best_norm) {
        best_norm = nn;
        best = c;
        best_vec = v;
      }
    }
    if (best < 0) fail(errc::rank_jump, "could not assemble a frame of the requested rank");
    used[static_cast<size_t>(best)] = true;
    const double inv = 1.0 / best_norm;
    for (auto& x : best_vec) x *= inv;
    chosen.push_back(std::move(best_vec));
    fr.column_order.push_back(best);
  }
  return fr;
}

std::vector<Vec<Jet>> frame_at(const Mat<Jet>& projector, const Mat<Jet>& g,
                               const DistributionFrame& fr, const std::vector<double>& p,
                               double null_tol) {
  const int n = projector.rows();
  std::vector<Vec<Jet>> frame;
  auto gdot = [&](const Vec<Jet>& u, const Vec<Jet>& v) {
    Jet s = Jet::constant(0.0, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += u[static_cast<size_t>(i)] * g(i, j) * v[static_cast<size_t>(j)];
    return s;
  };
  for (int c : fr.column_order) {
    Vec<Jet> v(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) v[static_cast<size_t>(r)] = projector(r, c);
    for (const auto& u : frame) {
      const Jet coef = gdot(v, u);
      for (int r = 0; r < n; ++r)
        v[static_cast<size_t>(r)] = v[static_cast<size_t>(r)] - coef * u[static_cast<size_t>(r)];
    }
    Jet nn = gdot(v, v);
    if (nn.v < null_tol * null_tol)
      fail_at(errc::rank_jump, "frame vector degenerates (rank drop)", p);
    const Jet inv = Jet::constant(1.0, n) / sqrt(nn);
    for (auto& x : v) x = x * inv;
    frame.push_back(std::move(v));
  }
  return frame;
}

double frobenius_residual_at(const PointFrame& f, const Mat<Jet>& projector,
                             const DistributionFrame& fr) {
  const int n = f.n;
  const auto frame = frame_at(projector, f.g, fr, f.p);
  const Mat<double> pv = values_of(projector);
  double worst = 0;
  for (size_t a = 0; a < frame.size(); ++a)
    for (size_t b = a + 1; b < frame.size(); ++b) {
      const Vec<double> br = lie_bracket(frame[a], frame[b]);
      // transverse part (Id - P) [X,Y]
      Vec<double> t(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        double s = br[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) s -= pv(i, j) * br[static_cast<size_t>(j)];
        t[static_cast<size_t>(i)] = s;
      }
      double nn = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          nn += t[static_cast<size_t>(i)] * f.gv(i, j) * t[static_cast<size_t>(j)];
      worst = std::max(worst, std::sqrt(std::max(0.0, nn)));
    }
  return worst;
}

double riemannian_foliation_residual_at(const PointFrame& f, const Mat<Jet>& projector,
                                        const DistributionFrame& fr,
                                        const DistributionFrame& fr_perp) {
  const int n = f.n;
  const Mat<Jet> perp = eye_jet(n, n) - projector;
  const auto frame = frame_at(projector, f.g, fr, f.p);
  const auto frame_perp = frame_at(perp, f.g, fr_perp, f.p);

  auto gdot_vals = [&](const Vec<double>& u, const Vec<Jet>& v) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += u[static_cast<size_t>(i)] * f.gv(i, j) * v[static_cast<size_t>(j)].v;
    return s;
  };

  double worst = 0;
  for (const auto& x : frame) {
    for (const auto& y : frame_perp)
      for (const auto& z : frame_perp) {
        Vec<double> yv(static_cast<size_t>(n)), zv(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
          yv[static_cast<size_t>(i)] = y[static_cast<size_t>(i)].v;
          zv[static_cast<size_t>(i)] = z[static_cast<size_t>(i)].v;
        }
        const Vec<double> nyx = covariant_deriv_vector(x, yv, f.gamma);
        const Vec<double> nzx = covariant_deriv_vector(x, zv, f.gamma);
        const double r = gdot_vals(nyx, z) + gdot_vals(nzx, y);
        worst = std::max(worst, std::abs(r));
      }
  }
  return worst;
}

double parallel_foliation_residual_at(const PointFrame& f, const Mat<Jet>& projector) {
  return covariant_deriv_endo(projector, f.gamma).max_abs();
}

}  // namespace gkv
