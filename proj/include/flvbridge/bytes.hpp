#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bridge {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

// All wire formats in this project are big-endian.

inline void put_u16be(Bytes& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32be(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

// Callers must ensure off + 2 (resp. 4) <= in.size().
inline uint16_t get_u16be(BytesView in, size_t off) {
    return static_cast<uint16_t>((in[off] << 8) | in[off + 1]);
}

inline uint32_t get_u32be(BytesView in, size_t off) {
    return (static_cast<uint32_t>(in[off]) << 24) | (static_cast<uint32_t>(in[off + 1]) << 16)
        | (static_cast<uint32_t>(in[off + 2]) << 8) | static_cast<uint32_t>(in[off + 3]);
}

std::string to_hex(BytesView data);

// Accepts lowercase or uppercase digits; throws bridge::Error on odd length
// or non-hex characters.
Bytes from_hex(std::string_view hex);

} // namespace bridge
