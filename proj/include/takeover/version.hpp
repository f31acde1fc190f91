#pragma once

#include <cstdint>
#include <string_view>

namespace takeover {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a, 64-bit; used to fingerprint spec files in result bundles.
inline uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace takeover
