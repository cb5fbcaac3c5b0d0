#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace csbi {

/// Shortest decimal text that parses back to exactly v.
inline std::string fmt_double(double v) {
    char buf[40];
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v && (best.empty() || std::strlen(buf) < best.size()))
            best = buf;
    }
    return best;
}

}  // namespace csbi
