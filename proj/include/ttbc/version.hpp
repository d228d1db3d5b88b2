#pragma once

namespace ttbc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ttbc
