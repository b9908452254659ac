#pragma once

#include <cstdint>

#include "flvbridge/bytes.hpp"

namespace bridge {

enum class MessageKind { Audio, Video };

// RTMP message type codes for the two media message kinds.
inline constexpr uint32_t kAudioTypeCode = 8;
inline constexpr uint32_t kVideoTypeCode = 9;

// Speex-in-FLV audio tag bytes used when wrapping raw Speex payloads.
inline constexpr uint8_t kSpeexTag16k = 0xb2;
inline constexpr uint8_t kSpeexTag8k = 0xb6;

// One timed audio or video unit as produced/consumed by the RTMP side.
// The data part is treated as opaque except for its first byte, which
// carries the FLV tag info (codec for audio, frame type for video).
struct MediaMessage {
    uint32_t type_code = kAudioTypeCode;
    uint32_t time_ms = 0;
    Bytes data; // never empty

    MessageKind kind() const {
        return type_code == kAudioTypeCode ? MessageKind::Audio : MessageKind::Video;
    }

    static MediaMessage audio(uint32_t time_ms, Bytes data);
    static MediaMessage video(uint32_t time_ms, Bytes data);

    bool operator==(const MediaMessage&) const = default;
};

enum class FrameKind { AudioFrame, VideoKey, VideoInter, VideoOther };

// Video frame type from the upper nibble of the first data byte (FLV video
// tag convention: 1 = key frame, 2 = inter frame). Audio is always
// AudioFrame. Depends only on (kind, data[0]).
FrameKind classify_frame(const MediaMessage& msg);

struct CodecTag {
    enum class Id { Speex16k, Opaque };

    Id id = Id::Opaque;
    uint8_t raw = 0; // first data byte as seen on the wire

    static CodecTag speex16k(uint8_t raw) { return {Id::Speex16k, raw}; }
    static CodecTag opaque(uint8_t raw) { return {Id::Opaque, raw}; }

    bool operator==(const CodecTag&) const = default;
};

// Decodes the first data byte of an audio message per the FLV audio tag
// layout (sound format in the upper nibble; 11 = Speex, nominally 16 kHz).
// Anything the bridge does not need to understand comes back Opaque; video
// data is never interpreted.
CodecTag codec_of(const MediaMessage& msg);

} // namespace bridge
