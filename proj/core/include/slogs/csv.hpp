#pragma once

#include <string>

namespace slogs {

/// Shortest round-trip decimal form, '.' separator, independent of the locale.
std::string format_double(double v);

}  // namespace slogs
