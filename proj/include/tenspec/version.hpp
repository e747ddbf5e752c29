#pragma once

namespace tenspec {
inline constexpr const char* kVersion = "0.1.0";
}
