#pragma once

#include <cstdio>
#include <string>

namespace subordinate {

/// Round-trippable decimal: 17 significant digits, '.' separator, no grouping.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace subordinate
