#include "flvbridge/negotiation.hpp"

namespace bridge::sdp {

RandomPortPicker::RandomPortPicker(uint64_t seed, uint16_t lo, uint16_t hi)
    : rng_(seed), lo_(static_cast<uint16_t>((lo + 1) & ~1u)), hi_(static_cast<uint16_t>(hi & ~1u)) {
    if (lo_ > hi_)
        throw ConfigError("empty media port range");
}

uint16_t RandomPortPicker::pick() {
    const uint32_t slots = (hi_ - lo_) / 2 + 1;
    if (used_.size() == slots)
        throw ConfigError("media port range exhausted");
    std::uniform_int_distribution<uint32_t> dist(0, slots - 1);
    for (;;) {
        const uint16_t port = static_cast<uint16_t>(lo_ + 2 * dist(rng_));
        if (used_.insert(port).second)
            return port;
    }
}

uint16_t FixedPortPicker::pick() {
    if (next_ >= ports_.size())
        throw ConfigError("fixed port list exhausted");
    return ports_[next_++];
}

SdpDescription build_offer(const OfferConfig& cfg, PortPicker& ports) {
    if (cfg.speex_rate != 8000 && cfg.speex_rate != 16000)
        throw InvalidRate("speex rate must be 8000 or 16000, got "
                          + std::to_string(cfg.speex_rate));

    SdpDescription sdp;

    MediaDesc audio;
    audio.kind = MediaKind::Audio;
    audio.port = ports.pick();
    audio.payload_types = {96};
    audio.rtpmaps = {{96, kSpeexEncoding, cfg.speex_rate}};
    sdp.media.push_back(std::move(audio));

    MediaDesc video;
    video.kind = MediaKind::Video;
    video.port = ports.pick();
    video.payload_types = {97};
    video.rtpmaps = {{97, kXflvEncoding, kXflvClockRate}};
    sdp.media.push_back(std::move(video));

    return sdp;
}

std::optional<Answer> answer_offer(const SdpDescription& offer, const OfferConfig& cfg,
                                   PortPicker& ports) {
    if (cfg.speex_rate != 8000 && cfg.speex_rate != 16000)
        throw InvalidRate("speex rate must be 8000 or 16000, got "
                          + std::to_string(cfg.speex_rate));

    // Which of the offered m-lines can we take?
    std::size_t audio_idx = offer.media.size();
    std::size_t video_idx = offer.media.size();
    const RtpMap* audio_map = nullptr;
    const RtpMap* video_map = nullptr;
    for (std::size_t i = 0; i < offer.media.size(); ++i) {
        const MediaDesc& m = offer.media[i];
        if (!m.enabled())
            continue;
        if (m.kind == MediaKind::Audio && !audio_map) {
            if (const RtpMap* map = m.find_encoding(kSpeexEncoding, cfg.speex_rate)) {
                audio_idx = i;
                audio_map = map;
            }
        } else if (m.kind == MediaKind::Video && !video_map) {
            if (const RtpMap* map = m.find_encoding(kXflvEncoding, kXflvClockRate)) {
                video_idx = i;
                video_map = map;
            }
        }
    }

    if (!audio_map && !video_map)
        return std::nullopt; // 488 Not Acceptable Here

    Answer ans;
    ans.sdp.origin_addr = "127.0.0.1";
    for (std::size_t i = 0; i < offer.media.size(); ++i) {
        const MediaDesc& offered = offer.media[i];
        MediaDesc line;
        line.kind = offered.kind;
        if (i == audio_idx) {
            line.port = ports.pick();
            line.payload_types = {audio_map->payload_type};
            line.rtpmaps = {{audio_map->payload_type, kSpeexEncoding, cfg.speex_rate}};
            ans.session.audio = NegotiatedStream{line.port, offered.port,
                                                 audio_map->payload_type, cfg.speex_rate};
        } else if (i == video_idx) {
            line.port = ports.pick();
            line.payload_types = {video_map->payload_type};
            line.rtpmaps = {{video_map->payload_type, kXflvEncoding, kXflvClockRate}};
            ans.session.video = NegotiatedStream{line.port, offered.port,
                                                 video_map->payload_type, kXflvClockRate};
        } else {
            line.port = 0; // declined, but the slot must stay
            line.payload_types = offered.payload_types;
        }
        ans.sdp.media.push_back(std::move(line));
    }

    if (video_map) {
        ans.session.peer_is_gateway = true;
        ans.session.audio_via_xflv = true;
    }
    return ans;
}

namespace {

// The answer enables a stream iff its m-line has a real port and keeps the
// encoding and payload type we offered.
std::optional<NegotiatedStream> live_stream(const SdpDescription& offer,
                                            const SdpDescription& answer, MediaKind kind,
                                            const char* encoding) {
    const MediaDesc* offered = nullptr;
    const RtpMap* offered_map = nullptr;
    for (const auto& m : offer.media) {
        if (m.kind != kind || !m.enabled())
            continue;
        for (const auto& map : m.rtpmaps) {
            if (encoding_equal(map.encoding, encoding)) {
                offered = &m;
                offered_map = &map;
                break;
            }
        }
        if (offered)
            break;
    }
    if (!offered)
        return std::nullopt;

    const MediaDesc* answered = answer.first(kind);
    if (!answered || !answered->enabled())
        return std::nullopt;
    const RtpMap* map = answered->find_encoding(encoding, offered_map->clock_rate);
    if (!map || map->payload_type != offered_map->payload_type)
        return std::nullopt;

    return NegotiatedStream{offered->port, answered->port, offered_map->payload_type,
                            offered_map->clock_rate};
}

} // namespace

std::optional<NegotiatedSession> interpret_answer(const SdpDescription& offer,
                                                  const SdpDescription& answer) {
    NegotiatedSession session;
    session.audio = live_stream(offer, answer, MediaKind::Audio, kSpeexEncoding);
    session.video = live_stream(offer, answer, MediaKind::Video, kXflvEncoding);
    if (!session.audio && !session.video)
        return std::nullopt;
    if (session.video) {
        session.peer_is_gateway = true;
        session.audio_via_xflv = true;
    }
    return session;
}

} // namespace bridge::sdp
