#pragma once

namespace dnorm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dnorm
