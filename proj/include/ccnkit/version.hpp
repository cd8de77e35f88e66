#pragma once

namespace ccn {
inline constexpr const char* kVersion = "0.1.0";
}
