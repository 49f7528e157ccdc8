#pragma once

namespace multiplex {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace multiplex
