#ifndef GKV_ERRORS_HPP
#define GKV_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace gkv {

enum class errc {
  spec_error,            // malformed spec file, bad shapes, unknown names, usage
  parse_error,           // expression syntax error (offset carried in message)
  domain_error,          // log/sqrt/div evaluation failure at a point
  singular_metric,       // Cholesky / inversion failure at a point
  not_almost_complex,    // J^2 != -Id where required
  singular_operator,     // J+ +- J- not invertible at a point
  orientation_mismatch,  // declared orientation vs Pfaffian sign
  ambiguous_clustering,  // eigenvalue gap inside the guard band
  rank_jump,             // distribution rank changes across the patch
  dimension_limit,       // patch dim outside [2, kMaxDim]
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Error(errc code, std::string msg, std::vector<double> point)
      : std::runtime_error(std::move(msg)), code_(code), point_(std::move(point)) {}

  errc code() const { return code_; }
  const std::vector<double>& point() const { return point_; }

 private:
  errc code_;
  std::vector<double> point_;
};

std::string format_point(const std::vector<double>& p);

[[noreturn]] inline void fail(errc code, std::string msg) { throw Error(code, std::move(msg)); }

[[noreturn]] void fail_at(errc code, const std::string& msg, const std::vector<double>& point);

}  // namespace gkv

#endif
