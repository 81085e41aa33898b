#pragma once

namespace ppl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ppl
