#pragma once

namespace margbayes {
inline constexpr const char* kVersion = "0.1.0";
}
