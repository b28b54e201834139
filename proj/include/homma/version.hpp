#pragma once

namespace homma {

inline constexpr const char* kToolName = "homma";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

} // namespace homma
