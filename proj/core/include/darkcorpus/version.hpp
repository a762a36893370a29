#pragma once

namespace darkcorpus {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace darkcorpus
