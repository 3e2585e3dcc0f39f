#pragma once

#include <complex>
#include <cstdio>
#include <string>

namespace nonpv {

/// 17 significant digits, round-trip safe.
inline std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_short(double x, int digits = 6)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

}  // namespace nonpv
