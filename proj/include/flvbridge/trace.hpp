#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flvbridge/media_message.hpp"

namespace bridge::sim {

// One scripted media message. Text form, one per line:
//   A|V <time_ms> <key|inter|-> <size>
// where size counts message data bytes (including the 1-byte tag prefix)
// and audio rows use "-" for the frame column.
struct TraceRecord {
    MessageKind kind = MessageKind::Audio;
    uint32_t time_ms = 0;
    FrameKind frame = FrameKind::AudioFrame;
    uint32_t size = 0;

    bool operator==(const TraceRecord&) const = default;
};

// '#' comments and blank lines allowed; times must be non-decreasing and
// sizes within 1..65523. Throws ConfigError.
std::vector<TraceRecord> parse_trace(const std::string& text);
std::vector<TraceRecord> load_trace(const std::string& path);
std::string format_trace(const std::vector<TraceRecord>& records);

// Builds the message a record describes: correct tag byte for the kind and
// frame, then deterministic filler from the rng.
MediaMessage synth_message(const TraceRecord& rec, uint32_t speex_rate, std::mt19937_64& rng);

// Inverse view, for dissection output.
TraceRecord record_of(const MediaMessage& msg);

} // namespace bridge::sim
