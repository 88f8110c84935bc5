#pragma once

namespace retset {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace retset
