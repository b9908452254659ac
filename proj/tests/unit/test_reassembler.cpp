#include <doctest.h>

#include <random>

#include "flvbridge/reassembler.hpp"

using namespace bridge;
using namespace bridge::xflv;

namespace {

template <class T>
bool is(const ReassemblyEvent& ev) {
    return std::holds_alternative<T>(ev);
}

// Serialized chunk payloads for one message.
std::vector<Bytes> wire_chunks(const MediaMessage& msg, uint32_t seq) {
    std::vector<Bytes> out;
    for (const auto& c : make_chunks(encode_assembled(msg), seq))
        out.push_back(serialize_chunk(c));
    return out;
}

MediaMessage video_msg(uint32_t t, uint8_t tag, std::size_t data_len) {
    Bytes data(data_len, 0x5a);
    data[0] = tag;
    return MediaMessage::video(t, std::move(data));
}

MediaMessage key_frame(uint32_t t, std::size_t n = 2500) { return video_msg(t, 0x12, n); }
MediaMessage inter_frame(uint32_t t, std::size_t n = 2500) { return video_msg(t, 0x22, n); }

MediaMessage audio_msg(uint32_t t) {
    return MediaMessage::audio(t, Bytes{0xb2, 0x03, 0x04, 0x05});
}

} // namespace

TEST_SUITE("reassembler") {

TEST_CASE("single-chunk audio delivers immediately, even before any key frame") {
    Reassembler rx;
    CHECK(rx.awaiting_keyframe());
    const auto msg = audio_msg(20);
    auto events = rx.push(wire_chunks(msg, 0)[0]);
    REQUIRE(events.size() == 1);
    REQUIRE(is<Delivered>(events[0]));
    CHECK(std::get<Delivered>(events[0]).message == msg);
    CHECK(rx.awaiting_keyframe()); // audio does not open the video gate
}

TEST_CASE("multi-chunk message: NeedMore until the last chunk") {
    Reassembler rx;
    const auto msg = key_frame(0);
    const auto w = wire_chunks(msg, 5);
    REQUIRE(w.size() == 3);
    CHECK(is<NeedMore>(rx.push(w[0])[0]));
    CHECK(is<NeedMore>(rx.push(w[1])[0]));
    auto last = rx.push(w[2]);
    REQUIRE(is<Delivered>(last[0]));
    CHECK(std::get<Delivered>(last[0]).message == msg);
    CHECK(!rx.awaiting_keyframe());
    CHECK(rx.stats().messages_delivered == 1);
}

TEST_CASE("fresh receiver gates inter frames until the first key frame") {
    Reassembler rx;
    auto ev = rx.push(wire_chunks(inter_frame(0, 100), 0)[0]);
    REQUIRE(is<DiscardedGated>(ev[0]));
    ev = rx.push(wire_chunks(key_frame(40, 100), 1)[0]);
    REQUIRE(is<Delivered>(ev[0]));
    ev = rx.push(wire_chunks(inter_frame(80, 100), 2)[0]);
    REQUIRE(is<Delivered>(ev[0]));
    CHECK(rx.stats().video_gated == 1);
}

TEST_CASE("a hole inside a message kills it at the default window") {
    Reassembler rx;
    rx.push(wire_chunks(key_frame(0, 50), 0)[0]); // open the gate
    const auto w = wire_chunks(inter_frame(40), 1);
    CHECK(is<NeedMore>(rx.push(w[0])[0]));
    // chunk 1 lost; chunk 2 arrives with a gap the window cannot absorb
    auto ev = rx.push(w[2]);
    REQUIRE(ev.size() == 1);
    REQUIRE(is<DiscardedLoss>(ev[0]));
    CHECK(std::get<DiscardedLoss>(ev[0]).seq == 1);
    CHECK(rx.awaiting_keyframe()); // video loss closes the gate again
}

TEST_CASE("a wider reorder window rides out swapped chunks") {
    Reassembler rx(Reassembler::Options{2});
    const auto msg = key_frame(0);
    const auto w = wire_chunks(msg, 9);
    CHECK(is<NeedMore>(rx.push(w[0])[0]));
    CHECK(is<NeedMore>(rx.push(w[2])[0])); // early, but within the window
    auto ev = rx.push(w[1]);
    REQUIRE(is<Delivered>(ev[0]));
    CHECK(std::get<Delivered>(ev[0]).message == msg);
}

TEST_CASE("losing the last chunk surfaces when the next message starts") {
    Reassembler rx;
    const auto w1 = wire_chunks(inter_frame(0), 3);
    rx.push(w1[0]);
    rx.push(w1[1]); // w1[2] never arrives
    const auto next = audio_msg(20);
    auto ev = rx.push(wire_chunks(next, 4)[0]);
    REQUIRE(ev.size() == 2);
    CHECK(is<DiscardedLoss>(ev[0]));
    CHECK(std::get<DiscardedLoss>(ev[0]).seq == 3);
    REQUIRE(is<Delivered>(ev[1]));
    CHECK(std::get<Delivered>(ev[1]).message == next);
}

TEST_CASE("missed first chunk poisons the whole seq, once") {
    Reassembler rx;
    const auto w = wire_chunks(key_frame(0), 5);

    // Cold start: the first packet ever seen is mid-message.
    auto ev = rx.push(w[1]);
    REQUIRE(is<Ignored>(ev[0]));
    CHECK(std::get<Ignored>(ev[0]).reason == IgnoreReason::PoisonedSeq);
    ev = rx.push(w[2]);
    REQUIRE(is<Ignored>(ev[0]));
    CHECK(rx.stats().messages_poisoned == 1);

    // Recovery on the next seq.
    const auto good = key_frame(40);
    const auto w2 = wire_chunks(good, 6);
    CHECK(is<NeedMore>(rx.push(w2[0])[0]));
    rx.push(w2[1]);
    auto done = rx.push(w2[2]);
    REQUIRE(is<Delivered>(done[0]));
    CHECK(std::get<Delivered>(done[0]).message == good);
}

TEST_CASE("mid-stream missed first chunk reports one loss then ignores") {
    Reassembler rx;
    rx.push(wire_chunks(key_frame(0, 50), 0)[0]);
    const auto w = wire_chunks(inter_frame(40), 1);
    auto ev = rx.push(w[1]); // first chunk of seq 1 lost
    REQUIRE(ev.size() == 1);
    REQUIRE(is<DiscardedLoss>(ev[0]));
    CHECK(std::get<DiscardedLoss>(ev[0]).seq == 1);
    ev = rx.push(w[2]);
    REQUIRE(is<Ignored>(ev[0]));
    CHECK(std::get<Ignored>(ev[0]).reason == IgnoreReason::PoisonedSeq);

    // Unknown kind must close the gate: the next inter frame stays gated.
    auto gated = rx.push(wire_chunks(inter_frame(80, 100), 2)[0]);
    REQUIRE(is<DiscardedGated>(gated[0]));
    auto key = rx.push(wire_chunks(key_frame(120, 100), 3)[0]);
    REQUIRE(is<Delivered>(key[0]));
}

TEST_CASE("stale and duplicate chunks are ignored without side effects") {
    Reassembler rx;
    const auto msg = key_frame(0);
    const auto w = wire_chunks(msg, 10);
    rx.push(w[0]);
    rx.push(w[1]);
    rx.push(w[2]); // delivered

    auto ev = rx.push(w[1]); // replay of a finished message
    REQUIRE(is<Ignored>(ev[0]));
    CHECK(std::get<Ignored>(ev[0]).reason == IgnoreReason::DuplicateChunk);

    ev = rx.push(wire_chunks(key_frame(0), 2)[0]); // from the past
    REQUIRE(is<Ignored>(ev[0]));
    CHECK(std::get<Ignored>(ev[0]).reason == IgnoreReason::StaleSeq);

    // A duplicate inside an unfinished message does not break assembly.
    const auto msg2 = key_frame(40);
    const auto w2 = wire_chunks(msg2, 11);
    rx.push(w2[0]);
    rx.push(w2[1]);
    ev = rx.push(w2[1]);
    REQUIRE(is<Ignored>(ev[0]));
    auto done = rx.push(w2[2]);
    REQUIRE(is<Delivered>(done[0]));
    CHECK(std::get<Delivered>(done[0]).message == msg2);
}

TEST_CASE("garbage payloads never disturb the current message") {
    Reassembler rx;
    const auto msg = key_frame(0);
    const auto w = wire_chunks(msg, 0);
    rx.push(w[0]);

    CHECK(std::get<Ignored>(rx.push(Bytes{1, 2, 3})[0]).reason == IgnoreReason::Truncated);
    CHECK(std::get<Ignored>(rx.push(Bytes(12, 0xee))[0]).reason == IgnoreReason::BadMagic);
    CHECK(rx.stats().chunks_rejected_magic == 1);
    CHECK(rx.stats().chunks_rejected_malformed == 1);

    rx.push(w[1]);
    auto done = rx.push(w[2]);
    REQUIRE(is<Delivered>(done[0]));
}

TEST_CASE("audio still flows while video is gated") {
    Reassembler rx;
    // Lose a chunk of a video message…
    const auto w = wire_chunks(inter_frame(0), 0);
    rx.push(w[0]);
    auto ev = rx.push(wire_chunks(audio_msg(20), 1)[0]);
    // …the dead video is reported, the audio message is delivered anyway.
    REQUIRE(ev.size() == 2);
    CHECK(is<DiscardedLoss>(ev[0]));
    REQUIRE(is<Delivered>(ev[1]));
    CHECK(std::get<Delivered>(ev[1]).message.kind() == MessageKind::Audio);
    CHECK(rx.awaiting_keyframe());
}

TEST_CASE("loss accounting: each pushed message ends in exactly one bucket") {
    std::mt19937_64 rng(77);
    Reassembler rx;
    uint64_t sent = 0;
    for (uint32_t seq = 0; seq < 400; ++seq) {
        const bool audio = rng() % 3 == 0;
        const MediaMessage msg = audio ? audio_msg(seq * 20)
                                       : video_msg(seq * 20, rng() % 2 ? 0x12 : 0x22,
                                                   1 + rng() % 3000);
        ++sent;
        for (const auto& payload : wire_chunks(msg, seq)) {
            if (rng() % 10 == 0)
                continue; // ~10% chunk loss
            rx.push(payload);
        }
    }
    const auto& s = rx.stats();
    // Every message is delivered, discarded, gated, or still pending/poisoned.
    CHECK(s.messages_delivered + s.messages_discarded + s.video_gated <= sent);
    CHECK(s.messages_delivered > 0);
    CHECK(s.messages_discarded > 0);
}

} // TEST_SUITE
