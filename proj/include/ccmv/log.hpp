#pragma once

#include <iostream>
#include <string>

namespace ccmv {

inline void log_warning(const std::string& msg) { std::cerr << "[ccmv] warning: " << msg << '\n'; }

}  // namespace ccmv
