#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flvbridge/media_message.hpp"
#include "flvbridge/negotiation.hpp"
#include "flvbridge/reassembler.hpp"
#include "flvbridge/rtp.hpp"
#include "flvbridge/signaling.hpp"

namespace bridge::ua {

struct ClientAuth {
    std::string display_name;
    std::string username;
    std::string password;
};

struct UaConfig {
    uint32_t speex_rate = 16000; // 8000 or 16000
    int reorder_window = 1;
    uint64_t rng_seed = 0; // drives ports, SSRCs and initial RTP sequences
    uint16_t port_lo = 16384;
    uint16_t port_hi = 32766;
    uint32_t register_expires_s = 3600;
};

enum class RegState { Unregistered, Registering, Registered, Failed };
enum class CallState { Idle, Inviting, Ringing, InCall };

enum class UaError {
    None,
    BadUrl,
    AuthFailed,
    NotRegistered,
    Busy,
    WrongState,
    NotInCall,
    MessageTooLarge,
};

const char* ua_error_name(UaError e);

// Callbacks the gateway would fire toward the connected client.
enum class NoticeKind {
    Registered,
    RegisterFailed,
    Ring,
    CallEstablished,
    CallRejected,
    CallEnded,
};

struct Notice {
    NoticeKind kind;
    int code = 0;
    std::string peer;
};

struct MediaCounters {
    uint64_t rtp_out = 0;
    uint64_t rtp_in = 0;
    uint64_t video_dropped_audio_only = 0;
    uint64_t wrong_payload_type = 0;
    uint64_t malformed_rtp = 0;
    uint64_t not_in_call_media = 0;
    uint64_t malformed_local = 0;
};

// One client connection = one SIP user agent with at most one call.
// Single-threaded: commands, signaling, RTP and clock ticks must arrive
// from one owner; distinct sessions are independent.
class UaSession {
public:
    // Accepts rtmp://host[:port]/sip/<aor>; throws BadUrl otherwise.
    // Immediately queues the initial Register.
    UaSession(const std::string& url, ClientAuth auth, UaConfig cfg, uint64_t now_ms);

    const std::string& aor() const { return aor_; }
    RegState reg_state() const { return reg_; }
    CallState call_state() const { return call_; }
    bool connection_up() const { return connection_up_; }
    bool has_media() const { return media_.has_value(); }
    const sdp::NegotiatedSession* negotiated() const;
    uint64_t refresh_due_ms() const { return refresh_due_ms_; }
    const MediaCounters& counters() const { return counters_; }
    const xflv::ReassemblyStats* rx_stats() const;

    // Client RPCs. All total: bad states come back as error codes.
    UaError invite(const std::string& dest);
    UaError accept();
    UaError reject();
    UaError bye();
    UaError send_digit(char digit);
    UaError send_text(const std::string& text);

    // Connection drop: ends the call, stops registration refreshes.
    void disconnect();

    struct MediaResult {
        UaError error = UaError::None;
        std::vector<Bytes> packets; // serialized RTP, one per chunk
    };

    // "local" stream -> RTP toward the peer.
    MediaResult on_local_media(const MediaMessage& msg);

    // RTP from the peer -> messages for the "remote" stream.
    std::vector<MediaMessage> on_rtp(BytesView wire);

    // Inbound signaling; unknown or out-of-place events are ignored.
    void handle_signaling(const SignalingEvent& ev);

    // Virtual clock; drives registration refresh.
    void tick(uint64_t now_ms);

    std::vector<SignalingEvent> take_signaling();
    std::vector<Notice> take_notices();

private:
    struct MediaState {
        sdp::NegotiatedSession session;
        uint32_t next_message_seq = 0;
        rtp::Sequencer video_seq;
        rtp::Sequencer audio_seq;
        uint32_t video_ssrc = 0;
        uint32_t audio_ssrc = 0;
        xflv::Reassembler rx;
    };

    void emit(SignalingEvent ev);
    void notify(NoticeKind kind, int code = 0, std::string peer = {});
    void send_register(bool with_credentials);
    void enter_call(const sdp::NegotiatedSession& session);
    void leave_call();

    ClientAuth auth_;
    UaConfig cfg_;
    std::string aor_;
    uint64_t now_ms_;

    RegState reg_ = RegState::Unregistered;
    CallState call_ = CallState::Idle;
    bool connection_up_ = true;
    bool auth_attempted_ = false;
    uint64_t refresh_due_ms_ = 0;
    uint32_t expires_s_ = 0;

    std::string peer_;
    std::optional<sdp::SdpDescription> pending_offer_;  // offer we sent (Inviting)
    std::optional<sdp::Answer> pending_answer_;         // answer we prepared (Ringing)

    std::optional<MediaState> media_;

    std::mt19937_64 rng_;
    sdp::RandomPortPicker ports_;

    MediaCounters counters_;
    std::vector<SignalingEvent> outbox_;
    std::vector<Notice> notices_;
};

} // namespace bridge::ua
