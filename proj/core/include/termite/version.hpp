#pragma once

namespace termite {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace termite
