#pragma once

namespace qmaxent {
inline constexpr const char* kVersion = "0.1.0";
}
