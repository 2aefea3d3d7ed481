#include "powernet/format.hpp"

#include <charconv>

namespace powernet {

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace powernet
