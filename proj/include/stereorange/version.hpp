#pragma once

namespace stereorange {

inline constexpr const char* version = "0.1.0";

}  // namespace stereorange
