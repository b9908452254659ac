#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flvbridge/errors.hpp"

namespace bridge::sdp {

enum class MediaKind { Audio, Video };

struct RtpMap {
    uint8_t payload_type = 0;
    std::string encoding; // as written in the SDP; compare case-insensitively
    uint32_t clock_rate = 0;

    bool operator==(const RtpMap&) const = default;
};

struct MediaDesc {
    MediaKind kind = MediaKind::Audio;
    uint16_t port = 0; // 0 = disabled
    std::vector<uint8_t> payload_types;
    std::vector<RtpMap> rtpmaps;

    bool enabled() const { return port != 0; }
    // First rtpmap whose encoding (case-insensitive) and clock match.
    const RtpMap* find_encoding(std::string_view encoding, uint32_t clock) const;
    const RtpMap* map_for(uint8_t pt) const;
};

struct SdpDescription {
    std::string origin_addr = "127.0.0.1";
    std::vector<MediaDesc> media;

    const MediaDesc* first(MediaKind k) const;
};

bool encoding_equal(std::string_view a, std::string_view b);

// Minimal SDP reader: keeps m= and a=rtpmap structure, takes the session
// address from c=, ignores everything else. Throws SdpError.
SdpDescription parse_sdp(const std::string& text);

// CRLF line endings throughout.
std::string serialize_sdp(const SdpDescription& sdp);

// Just the m=/a=rtpmap lines, for fixture comparison and logs.
std::string media_section(const SdpDescription& sdp);

} // namespace bridge::sdp
