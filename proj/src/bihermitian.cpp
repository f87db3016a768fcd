#include "gkv/bihermitian.hpp"

#include <cmath>

namespace gkv {

namespace {

Mat<Jet> inverse_checked(const Mat<Jet>& m, const char* which, const PointFrame& f) {
  const double det = std::abs(determinant(values_of(m)));
  if (det < 1e-10)
    fail_at(errc::singular_operator,
            std::string(which) + " is singular (a = +-1 locus), |det| = " + std::to_string(det),
            f.p);
  return inverse(m, errc::singular_operator);
}

// g(A e_j, e_k) as a value matrix: (A^T G)_{jk}.
Mat<double> g_of(const Mat<double>& a, const Mat<double>& g) { return transpose(a) * g; }

// Contract slot `slot` of a 3-form cube with an endomorphism:
// out(..., i, ...) = sum_a T(..., a, ...) M^a_i.
Cube3<double> contract_slot(const Cube3<double>& t, const Mat<double>& m, int slot) {
  const int n = t.n;
  Cube3<double> r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int a = 0; a < n; ++a) {
          switch (slot) {
            case 0: s += t.at(a, j, k) * m(a, i); break;
            case 1: s += t.at(i, a, k) * m(a, j); break;
            default: s += t.at(i, j, a) * m(a, k); break;
          }
        }
        r.at(i, j, k) = s;
      }
  return r;
}

}  // namespace

std::vector<NamedResidual> validate_residuals(const PointFrame& f) {
  const int n = f.n;
  std::vector<NamedResidual> out;

  Mat<double> jp2 = f.jpv * f.jpv;
  Mat<double> jm2 = f.jmv * f.jmv;
  for (int i = 0; i < n; ++i) {
    jp2(i, i) += 1.0;
    jm2(i, i) += 1.0;
  }
  out.push_back({"validate.jplus_square", max_abs(jp2)});
  out.push_back({"validate.jminus_square", max_abs(jm2)});

  out.push_back({"validate.jplus_hermitian", max_abs(transpose(f.jpv) * f.gv * f.jpv - f.gv)});
  out.push_back({"validate.jminus_hermitian", max_abs(transpose(f.jmv) * f.gv * f.jmv - f.gv)});

  out.push_back({"validate.g_symmetric", max_abs(f.gv - transpose(f.gv))});
  out.push_back({"validate.b_antisymmetric", max_abs(f.bv + transpose(f.bv))});
  return out;
}

SigmaData sigma_and_a(const PointFrame& f) {
  SigmaData s{.sigma = f.jp * f.jm + f.jm * f.jp,
              .a = Jet(),
              .scalar_residual = 0.0};
  s.a = trace(f.jp * f.jm) / static_cast<double>(-f.n);
  Mat<double> dev = values_of(s.sigma);
  for (int i = 0; i < f.n; ++i) dev(i, i) += 2.0 * s.a.v;
  s.scalar_residual = max_abs(dev);
  return s;
}

Mat<CJet> EpsilonPair::plus() const {
  const int n = im_plus.rows();
  Mat<CJet> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = to_complex(re_plus(i, j), im_plus(i, j));
  return m;
}

Mat<CJet> EpsilonPair::minus() const {
  const int n = im_minus.rows();
  Mat<CJet> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = to_complex(re_minus(i, j), im_minus(i, j));
  return m;
}

EpsilonPair epsilon_from_quadruple(const PointFrame& f) {
  const Mat<Jet> sum = f.jp + f.jm;
  const Mat<Jet> dif = f.jp - f.jm;
  const Mat<Jet> dif_inv = inverse_checked(dif, "J+ - J-", f);
  const Mat<Jet> sum_inv = inverse_checked(sum, "J+ + J-", f);

  EpsilonPair e{.im_plus = scale(f.g * dif_inv, 2.0),
                .re_plus = f.b + f.g * (sum * dif_inv),
                .im_minus = scale(f.g * sum_inv, 2.0),
                .re_minus = f.b + f.g * (dif * sum_inv)};
  return e;
}

std::vector<NamedResidual> epsilon_residuals(const PointFrame& f, double scalar_tol) {
  std::vector<NamedResidual> out;
  const EpsilonPair e = epsilon_from_quadruple(f);
  const Mat<double> sum = f.jpv + f.jmv;
  const Mat<double> dif = f.jpv - f.jmv;
  const Mat<double> imp = values_of(e.im_plus), rep = values_of(e.re_plus);
  const Mat<double> imm = values_of(e.im_minus), rem = values_of(e.re_minus);

  out.push_back({"epsilon.recon_im_plus", max_abs(imp * dif - scale(f.gv, 2.0))});
  out.push_back({"epsilon.recon_re_plus", max_abs(rep * dif - (f.bv * dif + f.gv * sum))});
  out.push_back({"epsilon.recon_im_minus", max_abs(imm * sum - scale(f.gv, 2.0))});
  out.push_back({"epsilon.recon_re_minus", max_abs(rem * sum - (f.bv * sum + f.gv * dif))});

  out.push_back({"epsilon.antisym_im_plus", max_abs(imp + transpose(imp))});
  out.push_back({"epsilon.antisym_re_plus", max_abs(rep + transpose(rep))});

  const SigmaData s = sigma_and_a(f);
  const bool scalar = s.scalar_regime(scalar_tol);
  const double a = s.a.v;

  NamedResidual mp{"epsilon.multiplied_im_plus", 0.0, scalar};
  NamedResidual mm{"epsilon.multiplied_im_minus", 0.0, scalar};
  NamedResidual br{"epsilon.b_recovery", 0.0, scalar};
  if (scalar) {
    mp.value = max_abs(scale(imp, -2.0 + 2.0 * a) - scale(f.gv * dif, 2.0));
    mm.value = max_abs(scale(imm, -2.0 - 2.0 * a) - scale(f.gv * sum, 2.0));
    br.value = max_abs(scale(rep, a - 1.0) - scale(rem, a + 1.0) + scale(f.bv, 2.0));
  }
  out.push_back(mp);
  out.push_back(mm);
  out.push_back(br);
  return out;
}

std::vector<NamedResidual> gk_residuals(const PointFrame& f) {
  const int n = f.n;
  std::vector<NamedResidual> out;
  out.push_back({"gk.nijenhuis_jplus", nijenhuis(f.jp).max_abs()});
  out.push_back({"gk.nijenhuis_jminus", nijenhuis(f.jm).max_abs()});

  const Cube3<double> db = d2(f.b);
  for (int sgn = 0; sgn < 2; ++sgn) {
    const bool plus = sgn == 0;
    const Mat<Jet>& j = plus ? f.jp : f.jm;
    const Mat<double>& jv = plus ? f.jpv : f.jmv;
    const Cube3<double> nj = covariant_deriv_endo(j, f.gamma);
    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj)
        for (int k = 0; k < n; ++k) {
          double lhs = 0;
          for (int l = 0; l < n; ++l) lhs += nj.at(i, l, jj) * f.gv(l, k);
          double rhs = 0;
          for (int l = 0; l < n; ++l)
            rhs += db.at(i, l, k) * jv(l, jj) + db.at(i, jj, l) * jv(l, k);
          rhs *= plus ? -0.5 : 0.5;
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    out.push_back({plus ? "gk.parallel_plus" : "gk.parallel_minus", worst});
  }
  return out;
}

KPair k_pair(const PointFrame& f, const Jet& a) {
  const Jet one = Jet::constant(1.0, a.n);
  const Jet two = Jet::constant(2.0, a.n);
  const Jet sp = sqrt(two * (one + a));
  const Jet sm = sqrt(two * (one - a));
  KPair k{.kplus = scale(f.jp + f.jm, one / sp),
          .kminus = scale(f.jp - f.jm, one / sm),
          .fplus = log(two * (one + a)) * -0.25,
          .fminus = log(two * (one - a)) * -0.25};
  return k;
}

std::vector<NamedResidual> identity_residuals(const PointFrame& f, double margin) {
  const int n = f.n;
  std::vector<NamedResidual> out;

  const SigmaData s = sigma_and_a(f);
  const Jet a = s.a;
  const Vec<double> da = d0(a);

  const bool plus_ok = 1.0 + a.v > margin;   // 1/(1+a) factors
  const bool minus_ok = 1.0 - a.v > margin;  // 1/(1-a) factors
  const bool k_ok_pre = plus_ok && minus_ok;

  // Eq. (1.3) onward hold for the b of the Re eps- = 0 gauge; use it wherever
  // b appears. It needs both J+ +- J- invertible, i.e. |a| < 1.
  Cube3<double> db(n), dab(n);
  Mat<double> bv(n, n);
  if (k_ok_pre) {
    const GaugeData gauge = normalized_gauge(f);
    bv = values_of(gauge.b_gauge);
    db = d2(gauge.b_gauge);
    dab = wedge12(da, bv);
  }

  // Eq. (1.2): d[ g (J+ +- J-) / (1 +- a) ] = 0
  for (int sgn = 0; sgn < 2; ++sgn) {
    const bool p = sgn == 0;
    NamedResidual r{p ? "identities.eq_1_2_plus" : "identities.eq_1_2_minus", 0.0,
                    p ? plus_ok : minus_ok};
    if (r.evaluated) {
      const Jet coeff = Jet::constant(1.0, a.n) / (Jet::constant(1.0, a.n) + (p ? a : -a));
      const Mat<Jet> w = scale(f.g * (p ? f.jp + f.jm : f.jp - f.jm), coeff);
      r.value = d2(w).max_abs();
    }
    out.push_back(r);
  }

  // Eq. (1.3): db = da ^ b / (a - 1)
  {
    NamedResidual r{"identities.eq_1_3", 0.0, k_ok_pre};
    if (r.evaluated) {
      double worst = 0;
      const double c = 1.0 / (a.v - 1.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(db.at(i, j, k) - c * dab.at(i, j, k)));
      r.value = worst;
    }
    out.push_back(r);
  }

  // Eq. (1.5): g((nabla_X J+-)(Y), Z) = +- [ (da^b)(X, J+-Y, Z) + (da^b)(X, Y, J+-Z) ] / (2(1-a))
  for (int sgn = 0; sgn < 2; ++sgn) {
    const bool p = sgn == 0;
    NamedResidual r{p ? "identities.eq_1_5_plus" : "identities.eq_1_5_minus", 0.0, k_ok_pre};
    if (r.evaluated) {
      const Mat<Jet>& j = p ? f.jp : f.jm;
      const Mat<double>& jv = p ? f.jpv : f.jmv;
      const Cube3<double> nj = covariant_deriv_endo(j, f.gamma);
      const Cube3<double> dab_j1 = contract_slot(dab, jv, 1);
      const Cube3<double> dab_j2 = contract_slot(dab, jv, 2);
      const double c = (p ? 1.0 : -1.0) / (2.0 * (1.0 - a.v));
      double worst = 0;
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj)
          for (int k = 0; k < n; ++k) {
            double lhs = 0;
            for (int l = 0; l < n; ++l) lhs += nj.at(i, l, jj) * f.gv(l, k);
            const double rhs = c * (dab_j1.at(i, jj, k) + dab_j2.at(i, jj, k));
            worst = std::max(worst, std::abs(lhs - rhs));
          }
      r.value = worst;
    }
    out.push_back(r);
  }

  if (!k_ok_pre) {
    for (const char* nm :
         {"identities.eq_1_6_plus", "identities.eq_1_6_minus", "identities.eq_1_7_plus",
          "identities.eq_1_7_minus", "identities.eq_1_8_plus", "identities.eq_1_8_minus",
          "identities.eq_1_9", "identities.eq_1_9_z_k_plus_x", "identities.grad_a_line"})
      out.push_back({nm, 0.0, false});
    return out;
  }

  auto [kp, km] = k_pair(f, a);
  const Mat<double> kpv = values_of(kp), kmv = values_of(km);
  const Mat<double> g_kp = g_of(kpv, f.gv);  // g(K+ e_j, e_k)
  const Mat<double> g_km = g_of(kmv, f.gv);
  Vec<double> da_kp(static_cast<size_t>(n)), da_km(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double sp = 0, sm = 0;
    for (int l = 0; l < n; ++l) {
      sp += da[static_cast<size_t>(l)] * kpv(l, i);
      sm += da[static_cast<size_t>(l)] * kmv(l, i);
    }
    da_kp[static_cast<size_t>(i)] = sp;  // da(K+ e_i)
    da_km[static_cast<size_t>(i)] = sm;
  }

  const Cube3<double> nkp = covariant_deriv_endo(kp, f.gamma);
  const Cube3<double> nkm = covariant_deriv_endo(km, f.gamma);
  const double ratio = std::sqrt((1.0 - a.v) / (1.0 + a.v));  // ((1-a)/(1+a))^{1/2}

  // Eq. (1.6) and Eq. (1.7)
  for (int sgn = 0; sgn < 2; ++sgn) {
    const bool p = sgn == 0;
    const Cube3<double>& nk = p ? nkp : nkm;
    const Mat<double>& kv = p ? kpv : kmv;
    const Mat<double>& kov = p ? kmv : kpv;  // the other K
    const Mat<double>& gk = p ? g_kp : g_km;
    const double sign = p ? 1.0 : -1.0;
    const double inv2pa = 1.0 / (2.0 * (1.0 + sign * a.v));  // 1/(2(1 +- a))

    // g((nabla_i K)(e_j), e_k) as a cube
    Cube3<double> gnk(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = 0;
          for (int l = 0; l < n; ++l) v += nk.at(i, l, j) * f.gv(l, k);
          gnk.at(i, j, k) = v;
        }

    // (1.6): gnk = -+ X(a) g(K Y, Z)/(2(1+-a))
    //         + ((1-a)/(1+a))^{+-1/2} [ (da^b)(X, Ko Y, Z) + (da^b)(X, Y, Ko Z) ] / (2(1-a))
    {
      const Cube3<double> dab_o1 = contract_slot(dab, kov, 1);
      const Cube3<double> dab_o2 = contract_slot(dab, kov, 2);
      const double c2 = (p ? ratio : 1.0 / ratio) / (2.0 * (1.0 - a.v));
      double worst = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const double rhs = -sign * inv2pa * da[static_cast<size_t>(i)] * gk(j, k) +
                               c2 * (dab_o1.at(i, j, k) + dab_o2.at(i, j, k));
            worst = std::max(worst, std::abs(gnk.at(i, j, k) - rhs));
          }
      out.push_back({p ? "identities.eq_1_6_plus" : "identities.eq_1_6_minus", worst});
    }

    // (1.7): g((nabla_{KX} K)(Y), Z) - g((nabla_X K)(Y), KZ) =
    //   +- [ (KY)(a) g(KX,Z) - (KZ)(a) g(KX,Y) + Y(a) g(X,Z) - Z(a) g(X,Y) ] / (2(1+-a))
    {
      const Vec<double>& dak = p ? da_kp : da_km;
      double worst = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double lhs = 0;
            for (int m = 0; m < n; ++m) lhs += kv(m, i) * gnk.at(m, j, k);
            double l2 = 0;
            for (int l = 0; l < n; ++l) {
              double glk = 0;
              for (int m = 0; m < n; ++m) glk += f.gv(l, m) * kv(m, k);
              l2 += nk.at(i, l, j) * glk;
            }
            lhs -= l2;
            const double rhs =
                sign * inv2pa *
                (dak[static_cast<size_t>(j)] * gk(i, k) - dak[static_cast<size_t>(k)] * gk(i, j) +
                 da[static_cast<size_t>(j)] * f.gv(i, k) - da[static_cast<size_t>(k)] * f.gv(i, j));
            worst = std::max(worst, std::abs(lhs - rhs));
          }
      out.push_back({p ? "identities.eq_1_7_plus" : "identities.eq_1_7_minus", worst});
    }
  }

  // Eq. (1.8), both signs
  for (int sgn = 0; sgn < 2; ++sgn) {
    const bool p = sgn == 0;
    const Mat<double>& kv = p ? kpv : kmv;
    const Mat<double>& kov = p ? kmv : kpv;
    const Mat<double>& gk = p ? g_kp : g_km;
    const Vec<double>& dak = p ? da_kp : da_km;
    const double sign = p ? 1.0 : -1.0;

    const Cube3<double> t_koo2 = contract_slot(dab, kov, 1);        // (.., KoY, ..)
    const Cube3<double> t1 = contract_slot(t_koo2, kv, 0);          // (KX, KoY, Z)
    const Cube3<double> t2 = contract_slot(contract_slot(dab, kov, 2), kv, 0);  // (KX, Y, KoZ)
    const Cube3<double> t3 = contract_slot(contract_slot(dab, kov, 1), kv, 2);  // (X, KoY, KZ)
    const Mat<double> kok = kov * kv;                                           // Ko K
    const Cube3<double> t4 = contract_slot(dab, kok, 2);                        // (X, Y, KoKZ)

    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double lhs =
              dak[static_cast<size_t>(i)] * gk(j, k) + dak[static_cast<size_t>(j)] * gk(i, k) -
              dak[static_cast<size_t>(k)] * gk(i, j) - da[static_cast<size_t>(i)] * f.gv(j, k) +
              da[static_cast<size_t>(j)] * f.gv(i, k) - da[static_cast<size_t>(k)] * f.gv(i, j);
          const double rhs = sign * (1.0 / ratio) *
                             (t1.at(i, j, k) + t2.at(i, j, k) - t3.at(i, j, k) - t4.at(i, j, k));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    out.push_back({p ? "identities.eq_1_8_plus" : "identities.eq_1_8_minus", worst});
  }

  // Eq. (1.9) on coordinate triples, then with Z = K+ X
  {
    const Cube3<double> t = contract_slot(contract_slot(dab, kmv, 1), kpv, 0);  // (K+X, K-Y, Z)

    double worst = 0, worst_spec = 0;
    // general coordinate triples
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double lhs = da_kp[static_cast<size_t>(i)] * g_kp(j, k) +
                             da_kp[static_cast<size_t>(j)] * g_kp(i, k) -
                             da_kp[static_cast<size_t>(k)] * g_kp(i, j) +
                             da_km[static_cast<size_t>(i)] * g_km(j, k) +
                             da_km[static_cast<size_t>(j)] * g_km(i, k) +
                             da_km[static_cast<size_t>(k)] * g_km(i, j) -
                             2.0 * da[static_cast<size_t>(k)] * f.gv(i, j);
          const double rhs = 2.0 * (1.0 / ratio) * t.at(i, j, k);
          worst = std::max(worst, std::abs(lhs - rhs));
        }

    // Z = K+ X specialization: contract the Z slot with K+ e_i
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double lhs = 0, rhs = 0;
        // z = K+ e_i
        Vec<double> z(static_cast<size_t>(n));
        for (int l = 0; l < n; ++l) z[static_cast<size_t>(l)] = kpv(l, i);
        double daz = 0, da_kp_z = 0, da_km_z = 0;
        for (int l = 0; l < n; ++l) daz += da[static_cast<size_t>(l)] * z[static_cast<size_t>(l)];
        // da(K+ z) and da(K- z)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            da_kp_z += da[static_cast<size_t>(l)] * kpv(l, m) * z[static_cast<size_t>(m)];
            da_km_z += da[static_cast<size_t>(l)] * kmv(l, m) * z[static_cast<size_t>(m)];
          }
        double gkp_jz = 0, gkp_iz = 0, gkm_jz = 0, gkm_iz = 0;
        const double g_ij = f.gv(i, j);
        for (int l = 0; l < n; ++l) {
          gkp_jz += g_kp(j, l) * z[static_cast<size_t>(l)];
          gkp_iz += g_kp(i, l) * z[static_cast<size_t>(l)];
          gkm_jz += g_km(j, l) * z[static_cast<size_t>(l)];
          gkm_iz += g_km(i, l) * z[static_cast<size_t>(l)];
        }
        lhs = da_kp[static_cast<size_t>(i)] * gkp_jz + da_kp[static_cast<size_t>(j)] * gkp_iz -
              da_kp_z * g_kp(i, j) + da_km[static_cast<size_t>(i)] * gkm_jz +
              da_km[static_cast<size_t>(j)] * gkm_iz + da_km_z * g_km(i, j) - 2.0 * daz * g_ij;
        // rhs = 2 ratio^{-1} (da^b)(K+ e_i, K- e_j, z)
        for (int l = 0; l < n; ++l) {
          double tt = 0;
          for (int aa = 0; aa < n; ++aa)
            for (int bb = 0; bb < n; ++bb)
              tt += dab.at(aa, bb, l) * kpv(aa, i) * kmv(bb, j);
          rhs += tt * z[static_cast<size_t>(l)];
        }
        rhs *= 2.0 * (1.0 / ratio);
        worst_spec = std::max(worst_spec, std::abs(lhs - rhs));
      }
    out.push_back({"identities.eq_1_9", worst});
    out.push_back({"identities.eq_1_9_z_k_plus_x", worst_spec});
  }

  // grad a restricted to the orthocomplement of each quaternionic line
  {
    const Vec<double> grad = f.ginvv * da;
    const Mat<double> kkv = kpv * kmv;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
      // line = span{X, K+X, K-X, K+K-X}, g-orthonormalized
      std::vector<Vec<double>> basis;
      Vec<double> x(static_cast<size_t>(n), 0.0);
      x[static_cast<size_t>(i)] = 1.0;
      for (const Mat<double>* m : {static_cast<const Mat<double>*>(nullptr), &kpv, &kmv, &kkv}) {
        Vec<double> v = m ? (*m) * x : x;
        for (const auto& u : basis) {
          double c = 0;
          for (int r = 0; r < n; ++r)
            for (int cI = 0; cI < n; ++cI)
              c += v[static_cast<size_t>(r)] * f.gv(r, cI) * u[static_cast<size_t>(cI)];
          for (int r = 0; r < n; ++r) v[static_cast<size_t>(r)] -= c * u[static_cast<size_t>(r)];
        }
        double nn = 0;
        for (int r = 0; r < n; ++r)
          for (int cI = 0; cI < n; ++cI)
            nn += v[static_cast<size_t>(r)] * f.gv(r, cI) * v[static_cast<size_t>(cI)];
        if (nn > 1e-20) {
          const double inv = 1.0 / std::sqrt(nn);
          for (auto& vv : v) vv *= inv;
          basis.push_back(v);
        }
      }
      Vec<double> rem = grad;
      for (const auto& u : basis) {
        double c = 0;
        for (int r = 0; r < n; ++r)
          for (int cI = 0; cI < n; ++cI)
            c += rem[static_cast<size_t>(r)] * f.gv(r, cI) * u[static_cast<size_t>(cI)];
        for (int r = 0; r < n; ++r) rem[static_cast<size_t>(r)] -= c * u[static_cast<size_t>(r)];
      }
      double nn = 0;
      for (int r = 0; r < n; ++r)
        for (int cI = 0; cI < n; ++cI)
          nn += rem[static_cast<size_t>(r)] * f.gv(r, cI) * rem[static_cast<size_t>(cI)];
      worst = std::max(worst, std::sqrt(std::max(0.0, nn)));
    }
    out.push_back({"identities.grad_a_line", worst});
  }

  return out;
}

GaugeData normalized_gauge(const PointFrame& f) {
  const Mat<Jet> sum = f.jp + f.jm;
  const Mat<Jet> dif = f.jp - f.jm;
  const Mat<Jet> sum_inv = inverse_checked(sum, "J+ + J-", f);
  const Mat<Jet> dif_inv = inverse_checked(dif, "J+ - J-", f);
  GaugeData g{.b_gauge = -(f.g * (dif * sum_inv)),
              .re_eps_plus = f.g * (sum * dif_inv - dif * sum_inv)};
  return g;
}

std::vector<NamedResidual> gauge_residuals(const PointFrame& f) {
  std::vector<NamedResidual> out;
  const GaugeData g = normalized_gauge(f);
  const Mat<double> bg = values_of(g.b_gauge);
  const Mat<double> rep = values_of(g.re_eps_plus);

  out.push_back({"gauge.b_antisymmetric", max_abs(bg + transpose(bg))});
  out.push_back({"gauge.d_re_eps_plus", d2(g.re_eps_plus).max_abs()});

  // feeding the gauge b back through the dictionary must kill Re eps-
  const Mat<Jet> sum = f.jp + f.jm;
  const Mat<Jet> dif = f.jp - f.jm;
  const Mat<Jet> sum_inv = inverse(sum, errc::singular_operator);
  const Mat<double> re_minus = bg + values_of(f.g * (dif * sum_inv));
  out.push_back({"gauge.re_eps_minus_zero", max_abs(re_minus)});

  // and Re eps+ of the gauge quadruple is the displayed combination
  const Mat<Jet> dif_inv = inverse(dif, errc::singular_operator);
  const Mat<double> re_plus = bg + values_of(f.g * (sum * dif_inv));
  out.push_back({"gauge.re_eps_plus_consistent", max_abs(re_plus - rep)});
  return out;
}

QuadrupleFields b_field_transform(const QuadrupleFields& q, const MatrixField& big_b,
                                  double closed_tol) {
  for (const auto& p : coarse_points(q.patch)) {
    const double res = d2(big_b.eval(p)).max_abs();
    if (res > closed_tol)
      fail_at(errc::spec_error,
              "B-field transform requires a closed two-form; || dB || = " + std::to_string(res),
              p);
  }
  QuadrupleFields r = q;
  r.b = add_fields(q.b, big_b);
  return r;
}

}  // namespace gkv
