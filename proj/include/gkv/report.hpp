#ifndef GKV_REPORT_HPP
#define GKV_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gkv/tolerances.hpp"

namespace gkv {

struct CheckRecord {
  std::string name;
  std::string paper_ref;
  double max_residual = 0;
  std::vector<double> argmax_point;
  double tolerance = 0;
  bool pass = true;
  bool skipped = false;
  std::string note;
};

struct Report {
  std::string spec_name;
  std::string suite;
  int dim = 0;
  std::uint64_t seed = 0;
  int grid_per_axis = 0;
  int random_count = 0;
  int point_count = 0;
  Tolerances tol;
  std::vector<CheckRecord> checks;

  bool passed() const;
  // Deterministic apart from the meta.timestamp field.
  std::string to_json() const;
  // One human line per check.
  std::string summary() const;
};

}  // namespace gkv

#endif
