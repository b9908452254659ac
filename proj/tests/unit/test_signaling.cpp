#include <doctest.h>

#include "flvbridge/errors.hpp"
#include "flvbridge/signaling.hpp"

using namespace bridge;
using namespace bridge::ua;

TEST_SUITE("signaling") {

TEST_CASE("only the populated fields reach the wire") {
    SignalingEvent ev;
    ev.kind = SignalKind::Register;
    ev.aor = "alice@example.net";
    CHECK(format_event(ev) == "REGISTER aor=alice@example.net");

    ev.with_credentials = true;
    ev.username = "alice";
    ev.display_name = "Alice";
    CHECK(format_event(ev) == "REGISTER aor=alice@example.net creds=1 user=alice display=Alice");
}

TEST_CASE("values with separators survive the round trip") {
    SignalingEvent ev;
    ev.kind = SignalKind::Invite;
    ev.aor = "alice@example.net";
    ev.peer = "bob@example.net";
    ev.sdp = "v=0\r\nm=audio 22700 RTP/AVP 96\r\n";

    const std::string line = format_event(ev);
    CHECK(line.find("\r") == std::string::npos);
    CHECK(line.find("sdp=v%3D0%0D%0Am%3Daudio%2022700%20RTP/AVP%2096%0D%0A")
          != std::string::npos);
    CHECK(parse_event(line) == ev);
}

TEST_CASE("numeric and text fields round trip") {
    SignalingEvent fail;
    fail.kind = SignalKind::RegisterFail;
    fail.aor = "alice@example.net";
    fail.code = 401;
    CHECK(format_event(fail) == "REGISTER_FAIL aor=alice@example.net code=401");
    CHECK(parse_event(format_event(fail)) == fail);

    SignalingEvent ok;
    ok.kind = SignalKind::RegisterOk;
    ok.aor = "alice@example.net";
    ok.expires_s = 1800;
    CHECK(parse_event(format_event(ok)) == ok);

    SignalingEvent digit;
    digit.kind = SignalKind::Info;
    digit.aor = "alice@example.net";
    digit.text = "#";
    CHECK(parse_event(format_event(digit)) == digit);

    SignalingEvent msg;
    msg.kind = SignalKind::Message;
    msg.aor = "alice@example.net";
    msg.peer = "bob@example.net";
    msg.text = "see you at 5 = five";
    CHECK(parse_event(format_event(msg)) == msg);

    // A 100%-escaped percent sign.
    SignalingEvent pct;
    pct.kind = SignalKind::Message;
    pct.text = "100%";
    CHECK(format_event(pct) == "MESSAGE text=100%25");
    CHECK(parse_event(format_event(pct)) == pct);
}

TEST_CASE("parser refuses malformed lines") {
    CHECK_THROWS_AS(parse_event(""), Error);
    CHECK_THROWS_AS(parse_event("HELLO aor=x"), Error);
    CHECK_THROWS_AS(parse_event("REGISTER aor"), Error);
    CHECK_THROWS_AS(parse_event("REGISTER flavor=vanilla"), Error);
    CHECK_THROWS_AS(parse_event("INVITE sdp=%zz"), Error);
    CHECK_THROWS_AS(parse_event("INVITE sdp=%4"), Error);
}

TEST_CASE("every kind has a stable wire name") {
    const SignalKind kinds[] = {
        SignalKind::Register,  SignalKind::Invite,       SignalKind::Accept,
        SignalKind::Reject,    SignalKind::Bye,          SignalKind::Info,
        SignalKind::Message,   SignalKind::RegisterOk,   SignalKind::RegisterFail,
        SignalKind::IncomingInvite, SignalKind::InviteOk, SignalKind::InviteFail,
        SignalKind::ByeReceived,
    };
    for (SignalKind k : kinds) {
        SignalingEvent ev;
        ev.kind = k;
        ev.aor = "x@y";
        CHECK(parse_event(format_event(ev)).kind == k);
    }
    CHECK(is_outbound(SignalKind::Bye));
    CHECK(is_outbound(SignalKind::Register));
    CHECK(!is_outbound(SignalKind::ByeReceived));
    CHECK(!is_outbound(SignalKind::IncomingInvite));
}

} // TEST_SUITE
