#include "flvbridge/signaling.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "flvbridge/errors.hpp"

namespace bridge::ua {

namespace {

struct KindName {
    SignalKind kind;
    const char* name;
};

constexpr std::array<KindName, 13> kKindNames{{
    {SignalKind::Register, "REGISTER"},
    {SignalKind::Invite, "INVITE"},
    {SignalKind::Accept, "ACCEPT"},
    {SignalKind::Reject, "REJECT"},
    {SignalKind::Bye, "BYE"},
    {SignalKind::Info, "INFO"},
    {SignalKind::Message, "MESSAGE"},
    {SignalKind::RegisterOk, "REGISTER_OK"},
    {SignalKind::RegisterFail, "REGISTER_FAIL"},
    {SignalKind::IncomingInvite, "INCOMING_INVITE"},
    {SignalKind::InviteOk, "INVITE_OK"},
    {SignalKind::InviteFail, "INVITE_FAIL"},
    {SignalKind::ByeReceived, "BYE_RECEIVED"},
}};

std::string escape(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (c == '%' || c == ' ' || c == '\r' || c == '\n' || c == '=') {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%') {
            if (i + 2 >= s.size())
                throw Error("truncated %-escape in signaling value");
            int hi = hex_digit(s[i + 1]);
            int lo = hex_digit(s[i + 2]);
            if (hi < 0 || lo < 0)
                throw Error("bad %-escape in signaling value");
            out.push_back(static_cast<char>(hi * 16 + lo));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

template <typename T>
T to_number(std::string_view s, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(std::string("bad signaling ") + what + " '" + std::string(s) + "'");
    return value;
}

} // namespace

const char* signal_kind_name(SignalKind k) {
    for (const auto& entry : kKindNames)
        if (entry.kind == k)
            return entry.name;
    return "?";
}

bool is_outbound(SignalKind k) {
    return k == SignalKind::Register || k == SignalKind::Invite || k == SignalKind::Accept
        || k == SignalKind::Reject || k == SignalKind::Bye || k == SignalKind::Info
        || k == SignalKind::Message;
}

std::string format_event(const SignalingEvent& ev) {
    std::ostringstream out;
    out << signal_kind_name(ev.kind);
    auto field = [&](const char* key, const std::string& value) {
        if (!value.empty())
            out << ' ' << key << '=' << escape(value);
    };
    field("aor", ev.aor);
    field("peer", ev.peer);
    field("sdp", ev.sdp);
    if (ev.code != 0)
        out << " code=" << ev.code;
    if (ev.expires_s != 0)
        out << " expires=" << ev.expires_s;
    field("text", ev.text);
    if (ev.with_credentials)
        out << " creds=1";
    field("user", ev.username);
    field("display", ev.display_name);
    return out.str();
}

SignalingEvent parse_event(const std::string& line) {
    std::istringstream in(line);
    std::string token;
    if (!(in >> token))
        throw Error("empty signaling line");

    SignalingEvent ev;
    bool known = false;
    for (const auto& entry : kKindNames) {
        if (token == entry.name) {
            ev.kind = entry.kind;
            known = true;
            break;
        }
    }
    if (!known)
        throw Error("unknown signaling event '" + token + "'");

    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            throw Error("signaling field without '=': '" + token + "'");
        std::string key = token.substr(0, eq);
        std::string value = unescape(std::string_view(token).substr(eq + 1));
        if (key == "aor")
            ev.aor = value;
        else if (key == "peer")
            ev.peer = value;
        else if (key == "sdp")
            ev.sdp = value;
        else if (key == "code")
            ev.code = to_number<int>(value, "code");
        else if (key == "expires")
            ev.expires_s = to_number<uint32_t>(value, "expires");
        else if (key == "text")
            ev.text = value;
        else if (key == "creds")
            ev.with_credentials = value == "1";
        else if (key == "user")
            ev.username = value;
        else if (key == "display")
            ev.display_name = value;
        else
            throw Error("unknown signaling field '" + key + "'");
    }
    return ev;
}

} // namespace bridge::ua
