#include "gkv/errors.hpp"

#include <sstream>

namespace gkv {

std::string format_point(const std::vector<double>& p) {
  std::ostringstream out;
  out.precision(17);
  out << "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out << ", ";
    out << p[i];
  }
  out << ")";
  return out.str();
}

void fail_at(errc code, const std::string& msg, const std::vector<double>& point) {
  throw Error(code, msg + " at point " + format_point(point), point);
}

}  // namespace gkv
