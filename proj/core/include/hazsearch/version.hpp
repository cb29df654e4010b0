#pragma once

namespace hazsearch {

inline constexpr const char* kVersion = "0.1.0";

} // namespace hazsearch
