#pragma once

namespace maxcon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace maxcon
