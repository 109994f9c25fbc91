#pragma once

namespace spavg {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace spavg
