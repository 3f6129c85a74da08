#pragma once

namespace soswall {

inline constexpr const char* kVersion = "soswall 0.1.0";

}  // namespace soswall
