#pragma once

namespace fractex {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fractex
