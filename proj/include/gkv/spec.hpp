#ifndef GKV_SPEC_HPP
#define GKV_SPEC_HPP

#include <map>
#include <string>
#include <vector>

#include "gkv/patch.hpp"

namespace gkv {

// A manifold spec file: expression matrices for (g, b, J+, J-) over a box
// patch, plus the sampling plan. `pointwise_sampler` marks the synthetic
// four-dimensional sampler spec (no fields).
struct ManifoldSpec {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  std::map<std::string, double> parameters;
  std::vector<std::vector<std::string>> metric, b, jplus, jminus;  // expression text
  std::vector<double> domain_min, domain_max;
  SamplePlan plan;
  int orientation = +1;
  std::vector<std::string> declared_scenarios;
  bool pointwise_sampler = false;
  int pointwise_samples = 1000;

  // Parsed form; populated by load/compile.
  QuadrupleFields fields;

  std::string to_json() const;
};

// Parse + validate a spec: shapes, expression syntax, load-time domain and
// quadruple checks on a coarse pre-grid.
ManifoldSpec load_spec_file(const std::string& path);
ManifoldSpec load_spec_json(const std::string& json_text, const std::string& name_hint = "");

// Compile expression matrices into fields and run the load-time validation.
void compile_and_validate(ManifoldSpec& spec);

}  // namespace gkv

#endif
