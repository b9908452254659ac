#pragma once

#include <cstdint>
#include <string>

namespace bridge::ua {

// Commands the session sends toward SIP, and events it receives back.
enum class SignalKind {
    // outbound
    Register,
    Invite,
    Accept,
    Reject,
    Bye,
    Info,
    Message,
    // inbound
    RegisterOk,
    RegisterFail,
    IncomingInvite,
    InviteOk,
    InviteFail,
    ByeReceived,
};

// One flat record instead of a tagged union; unused fields keep their
// defaults and stay off the wire.
struct SignalingEvent {
    SignalKind kind = SignalKind::Register;
    std::string aor;  // session context; routing key for inbound events
    std::string peer; // Invite destination / IncomingInvite originator
    std::string sdp;
    int code = 0;          // Reject / RegisterFail / InviteFail
    uint32_t expires_s = 0; // RegisterOk
    std::string text;      // Info digit or Message body
    bool with_credentials = false;
    std::string username;
    std::string display_name;

    bool operator==(const SignalingEvent&) const = default;
};

const char* signal_kind_name(SignalKind k);
bool is_outbound(SignalKind k);

// Wire form: one event per line, `<EVENT> key=value key=value…` with
// %-escaping of '%', space, CR, LF and '=' inside values.
std::string format_event(const SignalingEvent& ev);
SignalingEvent parse_event(const std::string& line); // throws Error

} // namespace bridge::ua
