#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "flvbridge/sdp.hpp"

namespace bridge::sdp {

inline constexpr uint32_t kXflvClockRate = 90000;
inline constexpr const char* kSpeexEncoding = "speex";
inline constexpr const char* kXflvEncoding = "x-flv";

// Source of local media ports (the RTCP port is port+1 by convention, so
// everything handed out is even).
class PortPicker {
public:
    virtual ~PortPicker() = default;
    virtual uint16_t pick() = 0;
};

// Uniform random even port in [lo, hi], never repeating a pick.
class RandomPortPicker : public PortPicker {
public:
    explicit RandomPortPicker(uint64_t seed, uint16_t lo = 16384, uint16_t hi = 32766);
    uint16_t pick() override;

private:
    std::mt19937_64 rng_;
    uint16_t lo_;
    uint16_t hi_;
    std::set<uint16_t> used_;
};

// Hands out a fixed list, in order; for reproducing exact descriptions.
class FixedPortPicker : public PortPicker {
public:
    explicit FixedPortPicker(std::vector<uint16_t> ports) : ports_(std::move(ports)) {}
    uint16_t pick() override;

private:
    std::vector<uint16_t> ports_;
    std::size_t next_ = 0;
};

struct OfferConfig {
    uint32_t speex_rate = 16000; // 8000 or 16000
};

struct NegotiatedStream {
    uint16_t local_port = 0;
    uint16_t remote_port = 0;
    uint8_t payload_type = 0;
    uint32_t clock_rate = 0;

    bool operator==(const NegotiatedStream&) const = default;
};

struct NegotiatedSession {
    std::optional<NegotiatedStream> audio;
    std::optional<NegotiatedStream> video;
    // An x-flv answer can only come from another instance of this bridge.
    bool peer_is_gateway = false;
    // When the video stream is live it already carries the audio messages,
    // so the speex stream stays idle even if negotiated.
    bool audio_via_xflv = false;
};

// Audio m-line first (speex PT 96), then video (x-flv PT 97); ports drawn
// from the picker in that order. Throws InvalidRate for rates other than
// 8000/16000.
SdpDescription build_offer(const OfferConfig& cfg, PortPicker& ports);

struct Answer {
    SdpDescription sdp;
    NegotiatedSession session;
};

// nullopt = nothing acceptable, reject the call with 488. The answer
// mirrors every offered m-line, echoes the offerer's payload types, and
// disables unacceptable streams with port 0.
std::optional<Answer> answer_offer(const SdpDescription& offer, const OfferConfig& cfg,
                                   PortPicker& ports);

// Caller side: reads the answer to the offer this side built.
// nullopt = the peer enabled nothing usable (treat like a 488).
std::optional<NegotiatedSession> interpret_answer(const SdpDescription& offer,
                                                  const SdpDescription& answer);

} // namespace bridge::sdp
