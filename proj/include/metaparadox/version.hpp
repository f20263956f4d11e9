#pragma once

namespace metaparadox {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace metaparadox
