#include "flvbridge/ua_session.hpp"

#include "flvbridge/errors.hpp"
#include "flvbridge/xflv.hpp"

namespace bridge::ua {

namespace {

std::string parse_aor(const std::string& url) {
    constexpr std::string_view kScheme = "rtmp://";
    if (url.rfind(kScheme.data(), 0) != 0)
        throw BadUrl("connection url must start with rtmp://");
    const std::string rest = url.substr(kScheme.size());
    const auto slash = rest.find('/');
    if (slash == std::string::npos || slash == 0)
        throw BadUrl("connection url has no path");

    std::vector<std::string> segments;
    std::size_t start = slash + 1;
    while (start <= rest.size()) {
        auto end = rest.find('/', start);
        if (end == std::string::npos)
            end = rest.size();
        segments.push_back(rest.substr(start, end - start));
        start = end + 1;
    }
    if (segments.size() < 2 || segments.front() != "sip" || segments.back().empty())
        throw BadUrl("expected rtmp://host/sip/<user@domain>, got '" + url + "'");
    return segments.back();
}

} // namespace

const char* ua_error_name(UaError e) {
    switch (e) {
    case UaError::None: return "ok";
    case UaError::BadUrl: return "bad url";
    case UaError::AuthFailed: return "authentication failed";
    case UaError::NotRegistered: return "not registered";
    case UaError::Busy: return "busy";
    case UaError::WrongState: return "wrong state";
    case UaError::NotInCall: return "not in call";
    case UaError::MessageTooLarge: return "message too large";
    }
    return "?";
}

UaSession::UaSession(const std::string& url, ClientAuth auth, UaConfig cfg, uint64_t now_ms)
    : auth_(std::move(auth)),
      cfg_(cfg),
      aor_(parse_aor(url)),
      now_ms_(now_ms),
      rng_(cfg.rng_seed),
      ports_(rng_(), cfg.port_lo, cfg.port_hi) {
    reg_ = RegState::Registering;
    send_register(false);
}

const sdp::NegotiatedSession* UaSession::negotiated() const {
    return media_ ? &media_->session : nullptr;
}

const xflv::ReassemblyStats* UaSession::rx_stats() const {
    return media_ ? &media_->rx.stats() : nullptr;
}

void UaSession::emit(SignalingEvent ev) {
    ev.aor = aor_;
    outbox_.push_back(std::move(ev));
}

void UaSession::notify(NoticeKind kind, int code, std::string peer) {
    notices_.push_back(Notice{kind, code, std::move(peer)});
}

void UaSession::send_register(bool with_credentials) {
    SignalingEvent ev;
    ev.kind = SignalKind::Register;
    ev.display_name = auth_.display_name;
    ev.with_credentials = with_credentials;
    if (with_credentials)
        ev.username = auth_.username;
    emit(std::move(ev));
}

UaError UaSession::invite(const std::string& dest) {
    if (reg_ != RegState::Registered)
        return UaError::NotRegistered;
    if (call_ != CallState::Idle)
        return UaError::Busy;

    pending_offer_ = sdp::build_offer({cfg_.speex_rate}, ports_);
    peer_ = dest;
    call_ = CallState::Inviting;

    SignalingEvent ev;
    ev.kind = SignalKind::Invite;
    ev.peer = dest;
    ev.sdp = sdp::serialize_sdp(*pending_offer_);
    emit(std::move(ev));
    return UaError::None;
}

UaError UaSession::accept() {
    if (call_ != CallState::Ringing)
        return UaError::WrongState;

    SignalingEvent ev;
    ev.kind = SignalKind::Accept;
    ev.peer = peer_;
    ev.sdp = sdp::serialize_sdp(pending_answer_->sdp);
    emit(std::move(ev));

    enter_call(pending_answer_->session);
    pending_answer_.reset();
    notify(NoticeKind::CallEstablished, 0, peer_);
    return UaError::None;
}

UaError UaSession::reject() {
    if (call_ != CallState::Ringing)
        return UaError::WrongState;

    SignalingEvent ev;
    ev.kind = SignalKind::Reject;
    ev.peer = peer_;
    ev.code = 603;
    emit(std::move(ev));

    pending_answer_.reset();
    call_ = CallState::Idle;
    return UaError::None;
}

UaError UaSession::bye() {
    if (call_ != CallState::InCall && call_ != CallState::Inviting)
        return UaError::WrongState;

    SignalingEvent ev;
    ev.kind = SignalKind::Bye;
    ev.peer = peer_;
    emit(std::move(ev));

    pending_offer_.reset();
    leave_call();
    return UaError::None;
}

UaError UaSession::send_digit(char digit) {
    if (call_ != CallState::InCall)
        return UaError::WrongState;
    SignalingEvent ev;
    ev.kind = SignalKind::Info;
    ev.peer = peer_;
    ev.text = std::string(1, digit);
    emit(std::move(ev));
    return UaError::None;
}

UaError UaSession::send_text(const std::string& text) {
    if (reg_ != RegState::Registered)
        return UaError::WrongState;
    SignalingEvent ev;
    ev.kind = SignalKind::Message;
    ev.peer = peer_;
    ev.text = text;
    emit(std::move(ev));
    return UaError::None;
}

void UaSession::disconnect() {
    if (!connection_up_)
        return;
    if (call_ == CallState::InCall || call_ == CallState::Inviting) {
        SignalingEvent ev;
        ev.kind = SignalKind::Bye;
        ev.peer = peer_;
        emit(std::move(ev));
    }
    pending_offer_.reset();
    pending_answer_.reset();
    leave_call();
    reg_ = RegState::Unregistered;
    connection_up_ = false;
}

void UaSession::enter_call(const sdp::NegotiatedSession& session) {
    MediaState st;
    st.session = session;
    st.video_seq = rtp::Sequencer(static_cast<uint16_t>(rng_()));
    st.audio_seq = rtp::Sequencer(static_cast<uint16_t>(rng_()));
    st.video_ssrc = static_cast<uint32_t>(rng_());
    st.audio_ssrc = static_cast<uint32_t>(rng_());
    st.rx = xflv::Reassembler(xflv::Reassembler::Options{cfg_.reorder_window});
    media_ = std::move(st);
    call_ = CallState::InCall;
}

void UaSession::leave_call() {
    media_.reset();
    call_ = CallState::Idle;
}

UaSession::MediaResult UaSession::on_local_media(const MediaMessage& msg) {
    if (call_ != CallState::InCall) {
        counters_.not_in_call_media++;
        return {UaError::NotInCall, {}};
    }
    MediaState& m = *media_;
    MediaResult result;

    if (m.session.video) {
        // Everything — audio included — rides the x-flv stream.
        xflv::AssembledMessage assembled;
        try {
            assembled = xflv::encode_assembled(msg);
        } catch (const MessageTooLarge&) {
            return {UaError::MessageTooLarge, {}};
        }
        const auto chunks = xflv::make_chunks(assembled, m.next_message_seq++);
        const uint32_t ts = rtp::ms_to_ts(msg.time_ms, rtp::TsClock(sdp::kXflvClockRate));
        for (const auto& chunk : chunks) {
            auto packet = rtp::packetize(xflv::serialize_chunk(chunk),
                                         m.session.video->payload_type, m.video_seq, ts,
                                         m.video_ssrc);
            result.packets.push_back(rtp::serialize_packet(packet));
        }
    } else {
        if (msg.kind() == MessageKind::Video) {
            counters_.video_dropped_audio_only++;
            return result;
        }
        if (msg.data.empty()) {
            counters_.malformed_local++;
            return result;
        }
        // Raw codec frames: the 1-byte container prefix stays on the RTMP side.
        const Bytes payload(msg.data.begin() + 1, msg.data.end());
        const uint32_t ts =
            rtp::ms_to_ts(msg.time_ms, rtp::TsClock(m.session.audio->clock_rate));
        auto packet = rtp::packetize(payload, m.session.audio->payload_type, m.audio_seq, ts,
                                     m.audio_ssrc);
        result.packets.push_back(rtp::serialize_packet(packet));
    }
    counters_.rtp_out += result.packets.size();
    return result;
}

std::vector<MediaMessage> UaSession::on_rtp(BytesView wire) {
    std::vector<MediaMessage> out;
    if (call_ != CallState::InCall) {
        counters_.not_in_call_media++;
        return out;
    }

    rtp::RtpPacket p;
    try {
        p = rtp::depacketize(wire);
    } catch (const Error&) {
        counters_.malformed_rtp++;
        return out;
    }
    counters_.rtp_in++;

    MediaState& m = *media_;
    if (m.session.video && p.payload_type == m.session.video->payload_type) {
        for (auto& ev : m.rx.push(p.payload)) {
            if (auto* delivered = std::get_if<xflv::Delivered>(&ev))
                out.push_back(std::move(delivered->message));
        }
    } else if (!m.session.video && m.session.audio
               && p.payload_type == m.session.audio->payload_type) {
        const uint32_t rate = m.session.audio->clock_rate;
        Bytes data;
        data.reserve(1 + p.payload.size());
        data.push_back(rate == 16000 ? kSpeexTag16k : kSpeexTag8k);
        data.insert(data.end(), p.payload.begin(), p.payload.end());
        out.push_back(
            MediaMessage::audio(rtp::ts_to_ms(p.timestamp, rtp::TsClock(rate)), std::move(data)));
    } else {
        counters_.wrong_payload_type++;
    }
    return out;
}

void UaSession::handle_signaling(const SignalingEvent& ev) {
    switch (ev.kind) {
    case SignalKind::RegisterOk: {
        if (reg_ != RegState::Registering && reg_ != RegState::Registered)
            return;
        const bool first = reg_ != RegState::Registered;
        reg_ = RegState::Registered;
        expires_s_ = ev.expires_s ? ev.expires_s : cfg_.register_expires_s;
        refresh_due_ms_ = now_ms_ + static_cast<uint64_t>(expires_s_) * 1000 / 2;
        if (first)
            notify(NoticeKind::Registered);
        return;
    }
    case SignalKind::RegisterFail: {
        if (reg_ == RegState::Unregistered || reg_ == RegState::Failed)
            return;
        if (ev.code == 401 && !auth_attempted_) {
            auth_attempted_ = true;
            reg_ = RegState::Registering;
            send_register(true);
            return;
        }
        reg_ = RegState::Failed;
        notify(NoticeKind::RegisterFailed, ev.code);
        return;
    }
    case SignalKind::IncomingInvite: {
        auto reject_with = [&](int code) {
            SignalingEvent out;
            out.kind = SignalKind::Reject;
            out.peer = ev.peer;
            out.code = code;
            emit(std::move(out));
        };
        if (reg_ != RegState::Registered) {
            reject_with(480);
            return;
        }
        if (call_ != CallState::Idle) {
            reject_with(486);
            return;
        }
        // Codec matching happens now, before ringing the client, so a
        // doomed call never looks answerable.
        sdp::SdpDescription offer;
        try {
            offer = sdp::parse_sdp(ev.sdp);
        } catch (const SdpError&) {
            reject_with(488);
            return;
        }
        auto answer = sdp::answer_offer(offer, {cfg_.speex_rate}, ports_);
        if (!answer) {
            reject_with(488);
            return;
        }
        pending_answer_ = std::move(*answer);
        peer_ = ev.peer;
        call_ = CallState::Ringing;
        notify(NoticeKind::Ring, 0, peer_);
        return;
    }
    case SignalKind::InviteOk: {
        if (call_ != CallState::Inviting)
            return;
        std::optional<sdp::NegotiatedSession> session;
        try {
            session = sdp::interpret_answer(*pending_offer_, sdp::parse_sdp(ev.sdp));
        } catch (const SdpError&) {
            session.reset();
        }
        pending_offer_.reset();
        if (!session) {
            SignalingEvent out;
            out.kind = SignalKind::Bye;
            out.peer = peer_;
            emit(std::move(out));
            call_ = CallState::Idle;
            notify(NoticeKind::CallRejected, 488, peer_);
            return;
        }
        enter_call(*session);
        notify(NoticeKind::CallEstablished, 0, peer_);
        return;
    }
    case SignalKind::InviteFail: {
        if (call_ != CallState::Inviting)
            return;
        pending_offer_.reset();
        call_ = CallState::Idle;
        notify(NoticeKind::CallRejected, ev.code ? ev.code : 488, peer_);
        return;
    }
    case SignalKind::ByeReceived: {
        if (call_ == CallState::Idle)
            return;
        const std::string who = peer_;
        pending_offer_.reset();
        pending_answer_.reset();
        leave_call();
        notify(NoticeKind::CallEnded, 0, who);
        return;
    }
    default:
        return; // outbound kinds echoed back: nothing to do
    }
}

void UaSession::tick(uint64_t now_ms) {
    now_ms_ = now_ms;
    if (!connection_up_ || reg_ != RegState::Registered)
        return;
    if (refresh_due_ms_ != 0 && now_ms_ >= refresh_due_ms_) {
        send_register(auth_attempted_);
        refresh_due_ms_ = now_ms_ + static_cast<uint64_t>(expires_s_) * 1000 / 2;
    }
}

std::vector<SignalingEvent> UaSession::take_signaling() {
    return std::exchange(outbox_, {});
}

std::vector<Notice> UaSession::take_notices() {
    return std::exchange(notices_, {});
}

} // namespace bridge::ua
