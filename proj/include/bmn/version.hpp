#pragma once

namespace bmn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bmn
