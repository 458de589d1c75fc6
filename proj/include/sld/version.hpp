#pragma once

namespace sld {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace sld
