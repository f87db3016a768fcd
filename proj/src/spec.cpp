#include "gkv/spec.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gkv/bihermitian.hpp"

namespace gkv {

using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::vector<std::string>> read_matrix(const ordered_json& j, const std::string& key,
                                                  int dim, bool required) {
  if (!j.contains(key)) {
    if (required) fail(errc::spec_error, "spec is missing the '" + key + "' matrix");
    return std::vector<std::vector<std::string>>(
        static_cast<size_t>(dim), std::vector<std::string>(static_cast<size_t>(dim), "0"));
  }
  const auto& m = j.at(key);
  if (!m.is_array() || static_cast<int>(m.size()) != dim)
    fail(errc::spec_error, "'" + key + "' must be a " + std::to_string(dim) + "x" +
                               std::to_string(dim) + " matrix of expressions");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : m) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(errc::spec_error, "'" + key + "' row has the wrong length");
    std::vector<std::string> r;
    for (const auto& cell : row) {
      if (cell.is_number())
        r.push_back(ordered_json(cell).dump());
      else if (cell.is_string())
        r.push_back(cell.get<std::string>());
      else
        fail(errc::spec_error, "'" + key + "' entries must be expression strings");
    }
    out.push_back(std::move(r));
  }
  return out;
}

MatrixField compile_matrix(const std::vector<std::vector<std::string>>& m,
                           const std::vector<std::string>& coords,
                           const std::map<std::string, double>& params, const std::string& key) {
  MatrixField f;
  f.n = static_cast<int>(m.size());
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) {
      try {
        f.entries.push_back(parse_expr(m[static_cast<size_t>(i)][static_cast<size_t>(j)], coords, params));
      } catch (const Error& e) {
        fail(errc::spec_error, "while parsing " + key + "[" + std::to_string(i) + "][" +
                                   std::to_string(j) + "]: " + e.what());
      }
    }
  return f;
}

}  // namespace

ManifoldSpec load_spec_json(const std::string& json_text, const std::string& name_hint) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    fail(errc::spec_error, std::string("spec is not valid JSON: ") + e.what());
  }

  ManifoldSpec s;
  s.name = j.value("name", name_hint);
  if (!j.contains("dim")) fail(errc::spec_error, "spec is missing 'dim'");
  s.dim = j.at("dim").get<int>();
  if (s.dim < 2 || s.dim > kMaxDim)
    fail(errc::dimension_limit,
         "dim must be between 2 and " + std::to_string(kMaxDim));

  s.pointwise_sampler = j.value("pointwise_sampler", false);
  s.pointwise_samples = j.value("samples", 1000);

  if (j.contains("coords")) {
    for (const auto& c : j.at("coords")) s.coords.push_back(c.get<std::string>());
  } else {
    for (int i = 1; i <= s.dim; ++i) s.coords.push_back("x" + std::to_string(i));
  }
  if (static_cast<int>(s.coords.size()) != s.dim)
    fail(errc::spec_error, "'coords' length does not match dim");

  if (j.contains("parameters"))
    for (const auto& [k, v] : j.at("parameters").items()) s.parameters[k] = v.get<double>();

  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    for (const auto& v : d.at("min")) s.domain_min.push_back(v.get<double>());
    for (const auto& v : d.at("max")) s.domain_max.push_back(v.get<double>());
  } else {
    s.domain_min.assign(static_cast<size_t>(s.dim), -1.0);
    s.domain_max.assign(static_cast<size_t>(s.dim), 1.0);
  }
  if (static_cast<int>(s.domain_min.size()) != s.dim ||
      static_cast<int>(s.domain_max.size()) != s.dim)
    fail(errc::spec_error, "'domain' arrays do not match dim");

  if (j.contains("sample_plan")) {
    const auto& p = j.at("sample_plan");
    s.plan.grid_per_axis = p.value("grid_per_axis", s.plan.grid_per_axis);
    s.plan.random_count = p.value("random_count", s.plan.random_count);
    s.plan.seed = p.value("seed", s.plan.seed);
    s.plan.max_grid_total = p.value("max_grid_total", s.plan.max_grid_total);
  }
  s.orientation = j.value("orientation", 1);
  if (s.orientation != 1 && s.orientation != -1)
    fail(errc::spec_error, "'orientation' must be +1 or -1");
  if (j.contains("declared_scenarios"))
    for (const auto& v : j.at("declared_scenarios")) s.declared_scenarios.push_back(v.get<std::string>());

  if (!s.pointwise_sampler) {
    s.metric = read_matrix(j, "metric", s.dim, true);
    s.b = read_matrix(j, "b", s.dim, false);
    s.jplus = read_matrix(j, "jplus", s.dim, true);
    s.jminus = read_matrix(j, "jminus", s.dim, true);
  }

  compile_and_validate(s);
  return s;
}

ManifoldSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::spec_error, "cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  const size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return load_spec_json(buf.str(), name);
}

void compile_and_validate(ManifoldSpec& spec) {
  Patch patch;
  patch.dim = spec.dim;
  patch.coords = spec.coords;
  patch.lo = spec.domain_min;
  patch.hi = spec.domain_max;
  patch.plan = spec.plan;
  patch.orientation = spec.orientation;
  patch.validate();
  spec.fields.patch = patch;

  if (spec.pointwise_sampler) return;

  spec.fields.g = compile_matrix(spec.metric, spec.coords, spec.parameters, "metric");
  spec.fields.b = compile_matrix(spec.b, spec.coords, spec.parameters, "b");
  spec.fields.jplus = compile_matrix(spec.jplus, spec.coords, spec.parameters, "jplus");
  spec.fields.jminus = compile_matrix(spec.jminus, spec.coords, spec.parameters, "jminus");

  // load-time checks on a coarse pre-grid: evaluability (domains), SPD metric,
  // quadruple residuals
  const double tol = 1e-8;
  for (const auto& p : coarse_points(patch)) {
    const PointFrame f = PointFrame::at(spec.fields, p);
    for (const NamedResidual& r : validate_residuals(f))
      if (r.value > tol)
        fail_at(errc::spec_error,
                "load-time quadruple check '" + r.name + "' failed with residual " +
                    std::to_string(r.value),
                p);
  }
}

std::string ManifoldSpec::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["dim"] = dim;
  j["coords"] = coords;
  if (!parameters.empty()) j["parameters"] = parameters;
  if (pointwise_sampler) {
    j["pointwise_sampler"] = true;
    j["samples"] = pointwise_samples;
  } else {
    j["metric"] = metric;
    j["b"] = b;
    j["jplus"] = jplus;
    j["jminus"] = jminus;
  }
  j["domain"] = {{"min", domain_min}, {"max", domain_max}};
  j["sample_plan"] = {{"grid_per_axis", plan.grid_per_axis},
                      {"random_count", plan.random_count},
                      {"seed", plan.seed},
                      {"max_grid_total", plan.max_grid_total}};
  j["orientation"] = orientation;
  if (!declared_scenarios.empty()) j["declared_scenarios"] = declared_scenarios;
  return j.dump(2) + "\n";
}

}  // namespace gkv
