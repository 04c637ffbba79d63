#pragma once

namespace wdro {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wdro
