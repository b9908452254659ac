#include "flvbridge/sdp.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace bridge::sdp {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw SdpError(std::string("bad ") + what + " '" + std::string(s) + "'");
    return value;
}

} // namespace

bool encoding_equal(std::string_view a, std::string_view b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i]))
            != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

const RtpMap* MediaDesc::find_encoding(std::string_view encoding, uint32_t clock) const {
    for (const auto& m : rtpmaps)
        if (m.clock_rate == clock && encoding_equal(m.encoding, encoding))
            return &m;
    return nullptr;
}

const RtpMap* MediaDesc::map_for(uint8_t pt) const {
    for (const auto& m : rtpmaps)
        if (m.payload_type == pt)
            return &m;
    return nullptr;
}

const MediaDesc* SdpDescription::first(MediaKind k) const {
    for (const auto& m : media)
        if (m.kind == k)
            return &m;
    return nullptr;
}

SdpDescription parse_sdp(const std::string& text) {
    SdpDescription out;
    out.media.clear();

    bool saw_version = false;
    bool have_media = false;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        if (raw.empty())
            continue;
        if (raw.size() < 2 || raw[1] != '=')
            throw SdpError("line without '=': '" + raw + "'");
        const char type = raw[0];
        std::string_view value = std::string_view(raw).substr(2);

        switch (type) {
        case 'v':
            if (value != "0")
                throw SdpError("unsupported SDP version '" + std::string(value) + "'");
            saw_version = true;
            break;
        case 'c': {
            // c=IN IP4 <addr>
            auto parts = split(value, ' ');
            if (parts.size() == 3 && parts[0] == "IN")
                out.origin_addr = std::string(parts[2]);
            break;
        }
        case 'm': {
            // m=<media> <port> <proto> <pt> [<pt>...]
            auto parts = split(value, ' ');
            if (parts.size() < 4)
                throw SdpError("short m-line '" + raw + "'");
            MediaDesc desc;
            if (parts[0] == "audio")
                desc.kind = MediaKind::Audio;
            else if (parts[0] == "video")
                desc.kind = MediaKind::Video;
            else {
                // Media we do not bridge; keep the slot so answers can
                // mirror it, but it never matches any codec.
                desc.kind = MediaKind::Audio;
                desc.port = 0;
                out.media.push_back(desc);
                have_media = true;
                break;
            }
            desc.port = parse_number<uint16_t>(parts[1], "m-line port");
            for (std::size_t i = 3; i < parts.size(); ++i) {
                auto pt = parse_number<unsigned>(parts[i], "payload type");
                if (pt > 127)
                    throw SdpError("payload type out of range in '" + raw + "'");
                desc.payload_types.push_back(static_cast<uint8_t>(pt));
            }
            out.media.push_back(std::move(desc));
            have_media = true;
            break;
        }
        case 'a': {
            constexpr std::string_view kPrefix = "rtpmap:";
            if (value.substr(0, kPrefix.size()) != kPrefix)
                break;
            if (!have_media)
                throw SdpError("a=rtpmap before any m-line");
            // a=rtpmap:<pt> <encoding>/<clock>[/<params>]
            auto rest = value.substr(kPrefix.size());
            auto fields = split(rest, ' ');
            if (fields.size() < 2)
                throw SdpError("bad rtpmap '" + raw + "'");
            auto pt = parse_number<unsigned>(fields[0], "rtpmap payload type");
            if (pt > 127)
                throw SdpError("rtpmap payload type out of range in '" + raw + "'");
            auto codec = split(fields[1], '/');
            if (codec.size() < 2 || codec[0].empty())
                throw SdpError("bad rtpmap codec '" + raw + "'");
            RtpMap map;
            map.payload_type = static_cast<uint8_t>(pt);
            map.encoding = std::string(codec[0]);
            map.clock_rate = parse_number<uint32_t>(codec[1], "rtpmap clock rate");
            out.media.back().rtpmaps.push_back(std::move(map));
            break;
        }
        default:
            break; // o=, s=, t=, b=, other a= lines: ignored
        }
    }

    if (!saw_version)
        throw SdpError("missing v=0 line");
    return out;
}

std::string serialize_sdp(const SdpDescription& sdp) {
    std::ostringstream out;
    out << "v=0\r\n"
        << "o=- 0 0 IN IP4 " << sdp.origin_addr << "\r\n"
        << "s=-\r\n"
        << "c=IN IP4 " << sdp.origin_addr << "\r\n"
        << "t=0 0\r\n"
        << media_section(sdp);
    return out.str();
}

std::string media_section(const SdpDescription& sdp) {
    std::ostringstream out;
    for (const auto& m : sdp.media) {
        out << "m=" << (m.kind == MediaKind::Audio ? "audio" : "video") << ' ' << m.port
            << " RTP/AVP";
        for (uint8_t pt : m.payload_types)
            out << ' ' << unsigned(pt);
        out << "\r\n";
        for (const auto& map : m.rtpmaps)
            out << "a=rtpmap:" << unsigned(map.payload_type) << ' ' << map.encoding << '/'
                << map.clock_rate << "\r\n";
    }
    return out.str();
}

} // namespace bridge::sdp
