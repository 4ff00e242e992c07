#pragma once

#include <string>

#include "drfeas/geometry.hpp"

namespace drfeas {

/// Shortest round-trip representation of a double.
std::string format_real(double v);

/// "(v0,v1,...)"
std::string format_point(const Vector& x);

}  // namespace drfeas
