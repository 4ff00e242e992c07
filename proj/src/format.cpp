#include "drfeas/format.hpp"

#include <charconv>
#include <system_error>

namespace drfeas {

std::string format_real(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string format_point(const Vector& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += ',';
    out += format_real(x[i]);
  }
  out += ')';
  return out;
}

}  // namespace drfeas
