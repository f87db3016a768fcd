#include "gkv/zoo.hpp"

#include <cmath>
#include <sstream>

#include "gkv/quaternion.hpp"

namespace gkv {

namespace {

std::string num(double v) {
  if (v == 0.0) return "0";
  if (v == 1.0) return "1";
  if (v == -1.0) return "-1";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::vector<std::vector<std::string>> const_matrix(const Mat<double>& m) {
  std::vector<std::vector<std::string>> out(static_cast<size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[static_cast<size_t>(i)].push_back(num(m(i, j)));
  return out;
}

std::vector<std::vector<std::string>> zero_matrix(int n) {
  return std::vector<std::vector<std::string>>(static_cast<size_t>(n),
                                               std::vector<std::string>(static_cast<size_t>(n), "0"));
}

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void default_box(ManifoldSpec& s, double half) {
  s.domain_min.assign(static_cast<size_t>(s.dim), -half);
  s.domain_max.assign(static_cast<size_t>(s.dim), half);
}

void default_coords(ManifoldSpec& s) {
  for (int i = 1; i <= s.dim; ++i) s.coords.push_back("x" + std::to_string(i));
}

ManifoldSpec make_z1(const std::map<std::string, double>& params) {
  const double alpha = get_param(params, "alpha", 0.0);
  const double beta = get_param(params, "beta", 1.0);
  const double gamma = get_param(params, "gamma", 0.0);
  const int blocks = static_cast<int>(get_param(params, "blocks", 1.0));
  if (blocks != 1 && blocks != 2)
    fail(errc::spec_error, "Z1 'blocks' must be 1 or 2 (dim 4 or 8)");
  const double nn = alpha * alpha + beta * beta + gamma * gamma;
  if (std::abs(nn - 1.0) > 1e-9)
    fail(errc::spec_error, "Z1 requires alpha^2 + beta^2 + gamma^2 = 1, got " + num(nn));
  if (std::abs(alpha) > 1.0 - 1e-9)
    fail(errc::spec_error, "Z1 with alpha = +-1 makes J+ -+ J- singular; excluded");

  ManifoldSpec s;
  s.name = "z1";
  s.dim = 4 * blocks;
  default_coords(s);
  default_box(s, 1.0);
  s.parameters = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}};
  s.metric = const_matrix(eye(s.dim));
  s.b = zero_matrix(s.dim);
  s.jplus = const_matrix(block_diag_copies(quat_i(), blocks));
  s.jminus = const_matrix(block_diag_copies(quat_unit(alpha, beta, gamma), blocks));
  s.declared_scenarios = {"validate", "gk",       "identities", "gauge",
                          "courant",  "eigendist", "theorem"};
  if (s.dim == 4) s.declared_scenarios.push_back("fourdim");
  compile_and_validate(s);
  return s;
}

ManifoldSpec make_z2(const std::map<std::string, double>& params) {
  (void)params;
  ManifoldSpec s;
  s.name = "z2";
  s.dim = 4;
  default_coords(s);
  default_box(s, 0.8);
  // conformal factors e^{2 phi} with phi_A(x1,x2), phi_B(x3,x4)
  const std::string ea = "exp(0.5*sin(x1)+0.2*x2)";
  const std::string eb = "exp(0.4*x3+0.3*sin(x4))";
  s.metric = zero_matrix(4);
  s.metric[0][0] = ea;
  s.metric[1][1] = ea;
  s.metric[2][2] = eb;
  s.metric[3][3] = eb;
  s.b = zero_matrix(4);
  Mat<double> ja(4, 4), jb(4, 4);
  ja(0, 1) = -1;
  ja(1, 0) = 1;
  ja(2, 3) = -1;
  ja(3, 2) = 1;
  jb = ja;
  jb(2, 3) = 1;
  jb(3, 2) = -1;
  s.jplus = const_matrix(ja);
  s.jminus = const_matrix(jb);
  s.declared_scenarios = {"validate", "gk", "eigendist", "theorem"};
  compile_and_validate(s);
  return s;
}

ManifoldSpec make_z3(const std::map<std::string, double>& params, bool perturbed) {
  const double a1 = get_param(params, "a1", 0.0);
  const double a2 = get_param(params, "a2", 0.5);
  for (double a : {a1, a2})
    if (std::abs(a) > 1.0 - 1e-6)
      fail(errc::spec_error, "Z3/Z4 block constants must satisfy |a| < 1");
  if (std::abs(a1 - a2) < 1e-3)
    fail(errc::spec_error, "Z3/Z4 block constants must be distinct (got a1 ~= a2)");

  ManifoldSpec s;
  s.name = perturbed ? "z4" : "z3";
  s.dim = 16;
  default_coords(s);
  default_box(s, 1.0);
  s.parameters = {{"a1", a1}, {"a2", a2}};
  s.metric = const_matrix(eye(16));
  s.b = zero_matrix(16);

  const Mat<double> jm1 = quat_unit(a1, std::sqrt(1.0 - a1 * a1), 0.0);
  const Mat<double> jm2 = quat_unit(a2, std::sqrt(1.0 - a2 * a2), 0.0);
  Mat<double> jplus = block_diag_copies(quat_i(), 4);
  Mat<double> jminus(16, 16);
  const Mat<double> b1 = block_diag_copies(jm1, 2);
  const Mat<double> b2 = block_diag_copies(jm2, 2);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      jminus(i, j) = b1(i, j);
      jminus(8 + i, 8 + j) = b2(i, j);
    }
  s.jplus = const_matrix(jplus);
  s.jminus = const_matrix(jminus);

  if (perturbed) {
    s.b[1][2] = "x1";
    s.b[2][1] = "-x1";
    s.declared_scenarios = {"validate", "gk", "eigendist", "theorem"};
  } else {
    s.declared_scenarios = {"validate", "gk", "gauge", "courant", "eigendist", "theorem"};
  }
  compile_and_validate(s);
  return s;
}

ManifoldSpec make_z5(const std::map<std::string, double>& params) {
  ManifoldSpec s;
  s.name = "z5";
  s.dim = 4;
  default_coords(s);
  default_box(s, 1.0);
  s.pointwise_sampler = true;
  s.pointwise_samples = static_cast<int>(get_param(params, "samples", 1000.0));
  s.plan.seed = static_cast<std::uint64_t>(get_param(params, "seed", 0.0));
  s.declared_scenarios = {"fourdim"};
  compile_and_validate(s);
  return s;
}

}  // namespace

std::vector<std::string> zoo_names() { return {"Z1", "Z2", "Z3", "Z4", "Z5"}; }

ManifoldSpec zoo_generate(const std::string& name, const std::map<std::string, double>& params) {
  std::string n = name;
  for (auto& c : n) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (n == "Z1") return make_z1(params);
  if (n == "Z2") return make_z2(params);
  if (n == "Z3") return make_z3(params, false);
  if (n == "Z4") return make_z3(params, true);
  if (n == "Z5") return make_z5(params);
  fail(errc::spec_error, "unknown zoo example '" + name + "' (known: Z1..Z5)");
}

}  // namespace gkv
