#include "flvbridge/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "flvbridge/errors.hpp"
#include "flvbridge/ua_session.hpp"

namespace bridge::sim {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return std::string(s);
}

template <typename T>
T number_or_die(const std::string& s, const std::string& key) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("bad value for '" + key + "': '" + s + "'");
    return value;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir) {
    ScenarioConfig cfg;
    std::string trace_path;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));

        if (key == "trace") {
            trace_path = value;
        } else if (key == "rate") {
            cfg.speex_rate = number_or_die<uint32_t>(value, key);
            if (cfg.speex_rate != 8000 && cfg.speex_rate != 16000)
                throw ConfigError("rate must be 8000 or 16000");
        } else if (key == "loss") {
            cfg.media.loss_prob = number_or_die<double>(value, key);
        } else if (key == "reorder") {
            cfg.media.reorder_prob = number_or_die<double>(value, key);
        } else if (key == "dup") {
            cfg.media.dup_prob = number_or_die<double>(value, key);
        } else if (key == "depth") {
            cfg.media.reorder_depth = number_or_die<int>(value, key);
        } else if (key == "seed") {
            cfg.seed = number_or_die<uint64_t>(value, key);
        } else if (key == "drop") {
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ','))
                cfg.drop_media.push_back(number_or_die<uint64_t>(trim(item), key));
        } else if (key == "caller") {
            cfg.caller_aor = value;
        } else if (key == "callee") {
            cfg.callee_aor = value;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (trace_path.empty())
        throw ConfigError("config is missing the required 'trace' key");
    std::filesystem::path p(trace_path);
    if (p.is_relative() && !base_dir.empty())
        p = std::filesystem::path(base_dir) / p;
    cfg.trace = load_trace(p.string());
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), std::filesystem::path(path).parent_path().string());
}

namespace {

// Lossless signaling: every event crosses as its wire line, and the
// registrar / proxy role is played inline.
void route(const ua::SignalingEvent& raw, ua::UaSession& from, ua::UaSession& other) {
    const ua::SignalingEvent ev = ua::parse_event(ua::format_event(raw));
    ua::SignalingEvent fwd;
    switch (ev.kind) {
    case ua::SignalKind::Register:
        fwd.kind = ua::SignalKind::RegisterOk;
        fwd.expires_s = 3600;
        from.handle_signaling(fwd);
        return;
    case ua::SignalKind::Invite:
        if (other.aor() == ev.peer) {
            fwd.kind = ua::SignalKind::IncomingInvite;
            fwd.peer = ev.aor;
            fwd.sdp = ev.sdp;
            other.handle_signaling(fwd);
        } else {
            fwd.kind = ua::SignalKind::InviteFail;
            fwd.code = 404;
            from.handle_signaling(fwd);
        }
        return;
    case ua::SignalKind::Accept:
        if (other.aor() == ev.peer) {
            fwd.kind = ua::SignalKind::InviteOk;
            fwd.sdp = ev.sdp;
            other.handle_signaling(fwd);
        }
        return;
    case ua::SignalKind::Reject:
        if (other.aor() == ev.peer) {
            fwd.kind = ua::SignalKind::InviteFail;
            fwd.code = ev.code;
            other.handle_signaling(fwd);
        }
        return;
    case ua::SignalKind::Bye:
        if (other.aor() == ev.peer) {
            fwd.kind = ua::SignalKind::ByeReceived;
            fwd.peer = ev.aor;
            other.handle_signaling(fwd);
        }
        return;
    default:
        return; // Info / Message: no simulator-side effect
    }
}

void pump(ua::UaSession& a, ua::UaSession& b) {
    for (int round = 0; round < 1000; ++round) {
        auto from_a = a.take_signaling();
        auto from_b = b.take_signaling();
        if (from_a.empty() && from_b.empty())
            return;
        for (const auto& ev : from_a)
            route(ev, a, b);
        for (const auto& ev : from_b)
            route(ev, b, a);
    }
    throw ScenarioFailed("signaling did not settle");
}

bool ordered_subsequence(const std::vector<MediaMessage>& delivered,
                         const std::vector<MediaMessage>& sent) {
    std::size_t j = 0;
    for (const auto& msg : delivered) {
        while (j < sent.size() && !(sent[j] == msg))
            ++j;
        if (j == sent.size())
            return false;
        ++j;
    }
    return true;
}

} // namespace

RunStats run_scenario(const ScenarioConfig& cfg) {
    std::mt19937_64 master(cfg.seed);
    const uint64_t synth_seed = master();
    const uint64_t channel_seed = master();
    const uint64_t caller_seed = master();
    const uint64_t callee_seed = master();

    ua::UaConfig ua_cfg;
    ua_cfg.speex_rate = cfg.speex_rate;

    ua_cfg.rng_seed = caller_seed;
    ua::UaSession caller("rtmp://gw.example.net/sip/" + cfg.caller_aor,
                         {"Caller", cfg.caller_aor, "secret"}, ua_cfg, 0);
    ua_cfg.rng_seed = callee_seed;
    ua::UaSession callee("rtmp://gw.example.net/sip/" + cfg.callee_aor,
                         {"Callee", cfg.callee_aor, "secret"}, ua_cfg, 0);

    pump(caller, callee);
    if (caller.reg_state() != ua::RegState::Registered
        || callee.reg_state() != ua::RegState::Registered)
        throw ScenarioFailed("registration did not complete");

    if (auto err = caller.invite(cfg.callee_aor); err != ua::UaError::None)
        throw ScenarioFailed(std::string("invite refused: ") + ua::ua_error_name(err));
    pump(caller, callee);
    if (callee.call_state() != ua::CallState::Ringing)
        throw ScenarioFailed("callee never rang");
    if (auto err = callee.accept(); err != ua::UaError::None)
        throw ScenarioFailed(std::string("accept refused: ") + ua::ua_error_name(err));
    pump(caller, callee);
    if (caller.call_state() != ua::CallState::InCall
        || callee.call_state() != ua::CallState::InCall)
        throw ScenarioFailed("call did not reach InCall on both sides");

    RunStats stats;

    std::mt19937_64 synth_rng(synth_seed);
    std::vector<MediaMessage> sent;
    std::vector<Bytes> packets;
    sent.reserve(cfg.trace.size());
    for (const auto& rec : cfg.trace) {
        MediaMessage msg = synth_message(rec, cfg.speex_rate, synth_rng);
        auto result = caller.on_local_media(msg);
        if (result.error != ua::UaError::None)
            throw ScenarioFailed(std::string("media send failed: ")
                                 + ua::ua_error_name(result.error));
        sent.push_back(std::move(msg));
        for (auto& p : result.packets)
            packets.push_back(std::move(p));
    }
    stats.messages_sent = sent.size();
    stats.packets_out = packets.size();

    if (!cfg.drop_media.empty()) {
        const std::set<uint64_t> drops(cfg.drop_media.begin(), cfg.drop_media.end());
        std::vector<Bytes> kept;
        kept.reserve(packets.size());
        for (std::size_t i = 0; i < packets.size(); ++i)
            if (!drops.count(i))
                kept.push_back(std::move(packets[i]));
        packets = std::move(kept);
    }

    ChannelConfig ch = cfg.media;
    ch.seed = channel_seed;
    const auto arrived = channel_transmit(ch, packets);
    stats.packets_in = arrived.size();

    std::vector<MediaMessage> delivered;
    for (const auto& p : arrived)
        for (auto& msg : callee.on_rtp(p))
            delivered.push_back(std::move(msg));
    stats.messages_delivered = delivered.size();

    if (const xflv::ReassemblyStats* rx = callee.rx_stats()) {
        stats.messages_discarded_loss = rx->messages_discarded;
        stats.messages_discarded_gated = rx->video_gated;
        stats.bad_magic = rx->chunks_rejected_magic;
    }

    stats.end_to_end_delivery_ratio =
        stats.messages_sent ? static_cast<double>(stats.messages_delivered)
                / static_cast<double>(stats.messages_sent)
                            : 1.0;
    stats.media_bit_identical = ordered_subsequence(delivered, sent);

    caller.bye();
    pump(caller, callee);
    return stats;
}

std::string stats_to_json(const RunStats& s) {
    nlohmann::json j;
    j["packets_out"] = s.packets_out;
    j["packets_in"] = s.packets_in;
    j["messages_sent"] = s.messages_sent;
    j["messages_delivered"] = s.messages_delivered;
    j["messages_discarded_loss"] = s.messages_discarded_loss;
    j["messages_discarded_gated"] = s.messages_discarded_gated;
    j["bad_magic"] = s.bad_magic;
    j["delivery_ratio"] = s.end_to_end_delivery_ratio;
    j["media_bit_identical"] = s.media_bit_identical;
    return j.dump(2) + "\n";
}

std::string stats_to_table(const RunStats& s) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.6f", s.end_to_end_delivery_ratio);
    std::ostringstream out;
    out << "packets out             " << s.packets_out << '\n'
        << "packets in              " << s.packets_in << '\n'
        << "messages sent           " << s.messages_sent << '\n'
        << "messages delivered      " << s.messages_delivered << '\n'
        << "discarded (loss)        " << s.messages_discarded_loss << '\n'
        << "discarded (gated)       " << s.messages_discarded_gated << '\n'
        << "bad magic chunks        " << s.bad_magic << '\n'
        << "delivery ratio          " << ratio << '\n'
        << "media bit-identical     " << (s.media_bit_identical ? "yes" : "no") << '\n';
    return out.str();
}

} // namespace bridge::sim
