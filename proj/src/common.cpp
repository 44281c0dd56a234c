#include "bgadam/common.hpp"

#include <cstdio>

namespace bgadam {

std::string format_double(double v) {
    char buf[64];
    // 17 significant digits round-trip any IEEE double
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace bgadam
