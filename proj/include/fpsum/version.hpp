#pragma once

namespace fpsum {

inline constexpr const char* kLibraryName = "fpsum";
inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace fpsum
