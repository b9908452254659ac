#include <doctest.h>

#include "flvbridge/media_message.hpp"

using namespace bridge;

TEST_SUITE("media") {

TEST_CASE("frame classification follows the FLV tag nibbles") {
    CHECK(classify_frame(MediaMessage::video(0, {0x12, 0x00})) == FrameKind::VideoKey);
    CHECK(classify_frame(MediaMessage::video(0, {0x22, 0x00})) == FrameKind::VideoInter);
    CHECK(classify_frame(MediaMessage::video(0, {0x32})) == FrameKind::VideoOther);
    CHECK(classify_frame(MediaMessage::audio(0, {0xb2, 0x01})) == FrameKind::AudioFrame);

    // Frame type lives in the upper nibble; the codec id below must not leak in.
    CHECK(classify_frame(MediaMessage::video(0, {0x17})) == FrameKind::VideoKey);
    CHECK(classify_frame(MediaMessage::video(0, {0x2f})) == FrameKind::VideoInter);
}

TEST_CASE("empty video data classifies as other, not a crash") {
    CHECK(classify_frame(MediaMessage::video(0, {})) == FrameKind::VideoOther);
}

TEST_CASE("speex detection keys on sound format 11") {
    CHECK(codec_of(MediaMessage::audio(0, {0xb2, 0x40})).id == CodecTag::Id::Speex16k);
    CHECK(codec_of(MediaMessage::audio(0, {0xb6, 0x40})).id == CodecTag::Id::Speex16k);
    CHECK(codec_of(MediaMessage::audio(0, {0x12, 0x40})).id == CodecTag::Id::Opaque); // ADPCM tag
    CHECK(codec_of(MediaMessage::video(0, {0xb2})).id == CodecTag::Id::Opaque);
    CHECK(codec_of(MediaMessage::audio(0, {0xb6})).raw == 0xb6);
}

TEST_CASE("kind comes from the message type code") {
    auto a = MediaMessage::audio(123, {0xb2});
    auto v = MediaMessage::video(456, {0x12});
    CHECK(a.type_code == kAudioTypeCode);
    CHECK(v.type_code == kVideoTypeCode);
    CHECK(a.kind() == MessageKind::Audio);
    CHECK(v.kind() == MessageKind::Video);
    CHECK(a.time_ms == 123);
    CHECK(v.time_ms == 456);
}

} // TEST_SUITE
