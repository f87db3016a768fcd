#include "gkv/report.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

namespace gkv {

using ordered_json = nlohmann::ordered_json;

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.skipped && !c.pass) return false;
  return true;
}

std::string Report::to_json() const {
  ordered_json j;
  ordered_json meta;
  meta["toolkit"] = "gkv";
  meta["version"] = "0.1.0";
  meta["spec"] = spec_name;
  meta["suite"] = suite;
  meta["dim"] = dim;
  meta["seed"] = seed;
  meta["grid_per_axis"] = grid_per_axis;
  meta["random_count"] = random_count;
  meta["point_count"] = point_count;
  meta["tolerances"] = {{"algebraic", tol.algebraic},
                        {"derivative", tol.derivative},
                        {"cluster", tol.cluster},
                        {"margin", tol.margin},
                        {"scalar_regime", tol.scalar_regime}};
  const auto now = std::chrono::system_clock::now();
  meta["timestamp"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  j["meta"] = meta;

  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json rec;
    rec["name"] = c.name;
    rec["paper_ref"] = c.paper_ref;
    rec["max_residual"] = c.max_residual;
    rec["argmax_point"] = c.argmax_point;
    rec["tolerance"] = c.tolerance;
    rec["pass"] = c.pass;
    if (c.skipped) rec["skipped"] = true;
    if (!c.note.empty()) rec["note"] = c.note;
    arr.push_back(rec);
  }
  j["checks"] = arr;
  j["passed"] = passed();
  return j.dump(2) + "\n";
}

std::string Report::summary() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    if (c.skipped)
      out << "[skip] ";
    else
      out << (c.pass ? "[ ok ] " : "[FAIL] ");
    out.setf(std::ios::scientific);
    out.precision(3);
    out << c.name << "  residual " << c.max_residual << "  (tol " << c.tolerance << ")";
    if (!c.note.empty()) out << "  -- " << c.note;
    out << "\n";
  }
  out << (passed() ? "PASSED" : "FAILED") << "\n";
  return out.str();
}

}  // namespace gkv
