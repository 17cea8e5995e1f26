#pragma once

namespace frb {

inline constexpr const char* kToolName = "frbkit";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace frb
