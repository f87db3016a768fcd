#ifndef GKV_SUITES_HPP
#define GKV_SUITES_HPP

#include "gkv/report.hpp"
#include "gkv/spec.hpp"

namespace gkv {

struct RunOptions {
  Tolerances tol;
  int grid_per_axis = -1;  // -1 keeps the spec's plan
  int random_count = -1;
  long long seed = -1;
  int workers = 0;  // 0 = GKV_WORKERS env or hardware
};

// suite in {validate, gk, identities, gauge, courant, eigendist, theorem,
// fourdim, all}. Deterministic for fixed spec + seed + tolerances.
Report run_suite(const ManifoldSpec& spec, const std::string& suite, const RunOptions& opt = {});

// The `courant` CLI endpoint: user-provided section pairs.
// sections JSON: {"pairs": [[section, section], ...]} where a section is
// {"vector": [exprs], "form": [exprs], "vector_im": [...], "form_im": [...]}
// (imaginary parts optional).
Report run_courant_sections(const ManifoldSpec& spec, const std::string& sections_json,
                            const RunOptions& opt = {});

int worker_count(int requested = 0);

}  // namespace gkv

#endif
