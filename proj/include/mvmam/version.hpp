#pragma once

namespace mvmam {
inline constexpr const char* kVersion = "0.1.0";
}
