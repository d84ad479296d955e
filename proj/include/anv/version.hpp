#pragma once

namespace anv {
inline constexpr const char* kVersion = "0.1.0";
}
