#pragma once

#include <string>

namespace powernet {

// shortest decimal that reads back to the same double
std::string format_real(double v);

}  // namespace powernet
