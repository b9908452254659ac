#include "flvbridge/rtp.hpp"

#include "flvbridge/errors.hpp"

namespace bridge::rtp {

TsClock::TsClock(uint32_t rate) : clock_rate(rate) {
    if (rate != 8000 && rate != 16000 && rate != 90000)
        throw InvalidRate("unsupported clock rate " + std::to_string(rate));
}

uint32_t ms_to_ts(uint32_t time_ms, TsClock clock) {
    return static_cast<uint32_t>(static_cast<uint64_t>(time_ms) * clock.clock_rate / 1000);
}

uint32_t ts_to_ms(uint32_t ts, TsClock clock) {
    return static_cast<uint32_t>(static_cast<uint64_t>(ts) * 1000 / clock.clock_rate);
}

RtpPacket packetize(BytesView payload, uint8_t pt, Sequencer& seq, uint32_t ts, uint32_t ssrc) {
    if (payload.size() > kMaxPayloadSize)
        throw PayloadTooLarge("rtp payload of " + std::to_string(payload.size())
                              + " bytes exceeds " + std::to_string(kMaxPayloadSize));
    RtpPacket p;
    p.payload_type = pt & 0x7f;
    p.sequence = seq.take();
    p.timestamp = ts;
    p.ssrc = ssrc;
    p.payload.assign(payload.begin(), payload.end());
    return p;
}

Bytes serialize_packet(const RtpPacket& p) {
    Bytes out;
    out.reserve(kHeaderSize + p.payload.size());
    out.push_back(0x80); // V=2, no padding, no extension, no CSRCs
    out.push_back(static_cast<uint8_t>((p.marker ? 0x80 : 0x00) | (p.payload_type & 0x7f)));
    put_u16be(out, p.sequence);
    put_u32be(out, p.timestamp);
    put_u32be(out, p.ssrc);
    out.insert(out.end(), p.payload.begin(), p.payload.end());
    return out;
}

RtpPacket depacketize(BytesView wire) {
    if (wire.size() < kHeaderSize)
        throw TruncatedPacket("rtp packet shorter than fixed header");
    const uint8_t b0 = wire[0];
    if ((b0 >> 6) != 2)
        throw BadVersion("rtp version " + std::to_string(b0 >> 6));

    const bool padding = b0 & 0x20;
    const bool extension = b0 & 0x10;
    const unsigned csrc_count = b0 & 0x0f;

    RtpPacket p;
    p.marker = wire[1] & 0x80;
    p.payload_type = wire[1] & 0x7f;
    p.sequence = get_u16be(wire, 2);
    p.timestamp = get_u32be(wire, 4);
    p.ssrc = get_u32be(wire, 8);

    std::size_t offset = kHeaderSize + 4 * csrc_count;
    if (wire.size() < offset)
        throw TruncatedPacket("rtp packet truncated inside CSRC list");
    if (extension) {
        if (wire.size() < offset + 4)
            throw TruncatedPacket("rtp packet truncated inside extension header");
        const std::size_t ext_words = get_u16be(wire, offset + 2);
        offset += 4 + 4 * ext_words;
        if (wire.size() < offset)
            throw TruncatedPacket("rtp packet truncated inside extension body");
    }

    std::size_t end = wire.size();
    if (padding) {
        if (end == offset)
            throw TruncatedPacket("padded rtp packet with empty body");
        const std::size_t pad = wire[end - 1];
        if (pad == 0 || offset + pad > end)
            throw TruncatedPacket("rtp padding count out of range");
        end -= pad;
    }
    p.payload.assign(wire.begin() + offset, wire.begin() + end);
    return p;
}

uint8_t select_payload_type(MessageKind kind, Direction dir, std::optional<uint8_t> offered_pt) {
    if (dir == Direction::Outgoing)
        return kind == MessageKind::Video ? kXflvPayloadType : kSpeexPayloadType;
    if (!offered_pt)
        throw MissingOffer("incoming stream has no offered payload type to echo");
    return *offered_pt & 0x7f;
}

} // namespace bridge::rtp
