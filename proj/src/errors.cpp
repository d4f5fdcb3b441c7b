#include "sphere_eq/errors.hpp"

#include <cstdio>

namespace sphere_eq {

ParseError::ParseError(const std::string& what, int line)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace sphere_eq
