#include "flvbridge/media_message.hpp"

namespace bridge {

namespace {

// FLV sound format codes (upper nibble of an audio tag's first byte).
constexpr uint8_t kFlvSoundFormatSpeex = 11;

// FLV video frame types (upper nibble of a video tag's first byte).
constexpr uint8_t kFlvFrameKey = 1;
constexpr uint8_t kFlvFrameInter = 2;

} // namespace

MediaMessage MediaMessage::audio(uint32_t time_ms, Bytes data) {
    return MediaMessage{kAudioTypeCode, time_ms, std::move(data)};
}

MediaMessage MediaMessage::video(uint32_t time_ms, Bytes data) {
    return MediaMessage{kVideoTypeCode, time_ms, std::move(data)};
}

FrameKind classify_frame(const MediaMessage& msg) {
    if (msg.kind() == MessageKind::Audio)
        return FrameKind::AudioFrame;
    if (msg.data.empty())
        return FrameKind::VideoOther;
    switch (msg.data[0] >> 4) {
    case kFlvFrameKey:
        return FrameKind::VideoKey;
    case kFlvFrameInter:
        return FrameKind::VideoInter;
    default:
        return FrameKind::VideoOther;
    }
}

CodecTag codec_of(const MediaMessage& msg) {
    if (msg.data.empty())
        return CodecTag::opaque(0);
    uint8_t first = msg.data[0];
    if (msg.kind() == MessageKind::Audio && (first >> 4) == kFlvSoundFormatSpeex)
        return CodecTag::speex16k(first);
    return CodecTag::opaque(first);
}

} // namespace bridge
