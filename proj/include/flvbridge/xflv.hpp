#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flvbridge/bytes.hpp"
#include "flvbridge/media_message.hpp"

namespace bridge::xflv {

// "RTMP" as a big-endian 32-bit number; leads every chunk on the wire.
inline constexpr uint32_t kMagic = 0x52544d50;

// Assembled message header: type, size, time as big-endian 32-bit each.
inline constexpr size_t kAssembledHeaderSize = 12;

// Chunk headers: magic(4) seq(4) cseq(2) [total_size(2) on the first chunk].
inline constexpr size_t kFirstChunkHeaderSize = 12;
inline constexpr size_t kLaterChunkHeaderSize = 10;

// Chunk bodies are cut to this size; every chunk except the last carries
// exactly this many bytes. 12 header + 1000 body + 12 RTP leaves ample room
// under the 1500-byte packet ceiling.
inline constexpr size_t kChunkBodyLimit = 1000;

// total_size is a 16-bit field, which bounds the whole assembled message.
inline constexpr size_t kMaxAssembledSize = 0xffff;
inline constexpr size_t kMaxDataSize = kMaxAssembledSize - kAssembledHeaderSize; // 65523

// An RTMP media message flattened to wire form: 12-byte header followed by
// the data part. The size field at offset 4 always equals data length.
struct AssembledMessage {
    Bytes bytes;

    size_t size() const { return bytes.size(); }
    bool operator==(const AssembledMessage&) const = default;
};

// Throws MessageTooLarge when the data part exceeds kMaxDataSize (the
// 16-bit total_size could not represent the result).
AssembledMessage encode_assembled(const MediaMessage& msg);

// Inverse of encode_assembled. Throws MalformedMessage when the input is
// shorter than 13 bytes, the size field disagrees with the actual length,
// or the type field is not an audio/video code.
MediaMessage decode_assembled(BytesView assembled);

// One RTP payload carrying a slice of an assembled message.
struct XflvChunk {
    uint32_t seq = 0;
    uint16_t cseq = 0;
    std::optional<uint16_t> total_size; // present iff cseq == 0
    Bytes body;

    bool operator==(const XflvChunk&) const = default;
};

// Splits an assembled message into ceil(len/1000) chunks: bodies of exactly
// 1000 bytes with a smaller final remainder, cseq 0..N-1, chunk 0 carrying
// the full assembled length.
std::vector<XflvChunk> make_chunks(const AssembledMessage& a, uint32_t seq);

// Wire layout: magic | seq | cseq | [total_size] | body, all big-endian.
Bytes serialize_chunk(const XflvChunk& c);

// Throws BadMagic when the payload does not lead with "RTMP", and
// TruncatedChunk when it is shorter than its own header.
XflvChunk parse_chunk(BytesView payload);

// Serial-number comparison on message sequence numbers (wraps at 2^32).
inline bool seq_newer(uint32_t a, uint32_t b) {
    return a != b && static_cast<uint32_t>(a - b) < 0x80000000u;
}

} // namespace bridge::xflv
