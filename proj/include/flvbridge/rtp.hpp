#pragma once

#include <cstdint>
#include <optional>

#include "flvbridge/bytes.hpp"
#include "flvbridge/media_message.hpp"

namespace bridge::rtp {

constexpr std::size_t kHeaderSize = 12;
// Keeps header + payload inside a 1500-byte datagram.
constexpr std::size_t kMaxPayloadSize = 1500 - kHeaderSize;

constexpr uint8_t kSpeexPayloadType = 96;
constexpr uint8_t kXflvPayloadType = 97;

// Media clock. Only the three rates the bridge negotiates are meaningful.
struct TsClock {
    uint32_t clock_rate;
    explicit TsClock(uint32_t rate);
};

// RTMP milliseconds -> RTP timestamp units, exact integer arithmetic.
uint32_t ms_to_ts(uint32_t time_ms, TsClock clock);
// Receive-side inverse (truncating); used to rebuild message times.
uint32_t ts_to_ms(uint32_t ts, TsClock clock);

struct RtpPacket {
    uint8_t payload_type = 0;
    bool marker = false;
    uint16_t sequence = 0;
    uint32_t timestamp = 0;
    uint32_t ssrc = 0;
    Bytes payload;

    bool operator==(const RtpPacket&) const = default;
};

// Per-stream sequence counter; wraps mod 2^16.
class Sequencer {
public:
    explicit Sequencer(uint16_t initial = 0) : next_(initial) {}
    uint16_t take() { return next_++; }
    uint16_t peek() const { return next_; }

private:
    uint16_t next_;
};

// Throws PayloadTooLarge beyond kMaxPayloadSize. Marker is never set.
RtpPacket packetize(BytesView payload, uint8_t pt, Sequencer& seq, uint32_t ts, uint32_t ssrc);

Bytes serialize_packet(const RtpPacket& p);

// Parses a version-2 packet, skipping CSRCs, extensions and padding.
// Throws TruncatedPacket / BadVersion. Payload-type checks belong to the
// session layer, not here.
RtpPacket depacketize(BytesView wire);

enum class Direction { Outgoing, Incoming };

// Outgoing streams use the fixed 96/97 mapping; incoming calls echo
// whatever payload type the offer carried. Throws MissingOffer when an
// incoming stream has no offered type to echo.
uint8_t select_payload_type(MessageKind kind, Direction dir,
                            std::optional<uint8_t> offered_pt = std::nullopt);

} // namespace bridge::rtp
