#pragma once

namespace ipfcsim {
inline constexpr const char* kVersion = "0.1.0";
}
