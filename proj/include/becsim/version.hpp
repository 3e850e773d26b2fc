#pragma once

namespace becsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace becsim
