#pragma once

namespace polopt {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace polopt
