#pragma once

namespace selfnorm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace selfnorm
