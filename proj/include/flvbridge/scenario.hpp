#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flvbridge/channel.hpp"
#include "flvbridge/trace.hpp"

namespace bridge::sim {

// Flat key=value file ('#' comments):
//   trace=<path>          media script, required (relative to the config file)
//   rate=16000            speex sampling rate, 8000 or 16000
//   loss=0.0 reorder=0.0 dup=0.0 depth=3    media channel behaviour
//   drop=4,17             scripted drop list: media packet indices (0-based,
//                         pre-channel), for surgical loss experiments
//   seed=0                master seed (payloads, channel, sessions)
//   caller=alice@example.net  callee=bob@example.net
struct ScenarioConfig {
    std::vector<TraceRecord> trace;
    uint32_t speex_rate = 16000;
    ChannelConfig media; // .seed is derived from the master seed
    std::vector<uint64_t> drop_media;
    uint64_t seed = 0;
    std::string caller_aor = "alice@example.net";
    std::string callee_aor = "bob@example.net";
};

ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir);
ScenarioConfig load_scenario(const std::string& path); // throws ConfigError

struct RunStats {
    uint64_t packets_out = 0; // media packets the caller produced
    uint64_t packets_in = 0;  // media packets the callee received
    uint64_t messages_sent = 0;
    uint64_t messages_delivered = 0;
    uint64_t messages_discarded_loss = 0;
    uint64_t messages_discarded_gated = 0;
    uint64_t bad_magic = 0;
    double end_to_end_delivery_ratio = 0.0;
    bool media_bit_identical = false; // delivered ⊑ sent, byte for byte, in order
};

// Registers both parties, places the call, streams the trace through the
// media channel, hangs up. Signaling rides a separate lossless channel, so
// media loss can never break call setup. Throws ScenarioFailed when the
// call does not reach InCall on both sides.
RunStats run_scenario(const ScenarioConfig& cfg);

std::string stats_to_json(const RunStats& s);
std::string stats_to_table(const RunStats& s);

} // namespace bridge::sim
