#pragma once

#include <cstdint>
#include <string_view>

namespace skilleval {

// FNV-1a 64-bit content fingerprint (not cryptographic).
constexpr std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char byte : data) {
        h ^= byte;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace skilleval
