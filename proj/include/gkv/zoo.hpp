#ifndef GKV_ZOO_HPP
#define GKV_ZOO_HPP

#include "gkv/spec.hpp"

namespace gkv {

// Built-in example manifolds:
//   Z1  flat R^{4n} (n = 1, 2), J+ = i, J- = alpha i + beta j + gamma k
//   Z2  product of two conformal Riemann-surface Kahler factors,
//       J+ = (J_A, J_B), J- = (J_A, -J_B)
//   Z3  product of two flat 8-dimensional quaternionic blocks with distinct
//       constants a1 != a2
//   Z4  Z3 with b += x1 dx2^dx3 (negative control, db != 0)
//   Z5  pointwise 4-dimensional sampler (no fields)
ManifoldSpec zoo_generate(const std::string& name,
                          const std::map<std::string, double>& params = {});

std::vector<std::string> zoo_names();

}  // namespace gkv

#endif
