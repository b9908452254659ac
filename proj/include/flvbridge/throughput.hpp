#pragma once

#include <cstdint>

namespace bridge::sim {

struct ThroughputResult {
    int calls = 0;
    int packets_per_call = 0;
    int threads = 1; // 1 = serial reference path
    uint64_t total_packets = 0;
    uint64_t delivered = 0; // must equal calls × packets_per_call
    double seconds = 0.0;
    double packets_per_second = 0.0;
};

// Pushes single-chunk audio messages through the whole per-packet pipeline
// (encode → chunk → RTP → parse → reassemble) for `calls` independent call
// contexts. Calls share nothing, so threads > 1 fans them out with OpenMP
// when the build has it; otherwise the serial path runs regardless.
ThroughputResult run_throughput(int calls, int packets_per_call, int threads = 1);

} // namespace bridge::sim
